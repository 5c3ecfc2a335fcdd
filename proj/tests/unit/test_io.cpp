#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "svehdr/io.hpp"

using namespace svehdr;
namespace fs = std::filesystem;
using namespace std::string_literals;

namespace {

io::Bytes bytes_of(std::string_view s) { return {s.begin(), s.end()}; }

FormatErrc code_of(auto&& fn) {
    try {
        fn();
    } catch (const FormatError& e) {
        return e.code();
    }
    FAIL("no FormatError raised");
    return FormatErrc::syntax;
}

fs::path scratch(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "svehdr_unit_io";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("raw frame round trip") {
    RawFrame f(4, 4, 12, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 4093, 4094, 4095, 256});
    const io::Bytes b = io::encode_raw16(f);
    CHECK(std::string(b.begin(), b.begin() + 13) == "P5\n4 4\n65535\n");
    CHECK(b.size() == 13 + 32);
    CHECK(b[13 + 2 * 14] == 0x0F);
    CHECK(b[13 + 2 * 14 + 1] == 0xFF);
    CHECK(io::decode_raw16(b) == f);
    const fs::path p = scratch("frame.pgm");
    io::write_raw16(f, p);
    CHECK(io::read_raw16(p) == f);
    CHECK(io::read_file(p) == b);
}

TEST_CASE("graymap header variants") {
    CHECK(io::decode_pgm16(bytes_of("P5 2 1 65535\n\x01\x02\x03\x04"s)).pixels()[1] == 0x0304);
    CHECK(io::decode_pgm16(bytes_of("P5\n# made by hand\n2 # width\n1\n65535\n\x00\x01\x00\x02"s))(1, 0) == 2);
}

TEST_CASE("graymap errors") {
    const std::string ok = "P5\n2 2\n65535\n"s + std::string(8, '\0');
    CHECK(code_of([&] { io::decode_pgm16(bytes_of("P5\n2 2\n255\n" + std::string(4, '\0'))); }) ==
          FormatErrc::unsupported_maxval);
    CHECK(code_of([&] { io::decode_pgm16(bytes_of(ok.substr(0, ok.size() - 1))); }) == FormatErrc::truncated);
    CHECK(code_of([&] { io::decode_pgm16(bytes_of(ok + "x")); }) == FormatErrc::trailing_data);
    CHECK(code_of([&] { io::decode_pgm16(bytes_of("P6\n2 2\n65535\n")); }) == FormatErrc::malformed_header);
    CHECK(code_of([&] { io::decode_pgm16(bytes_of("P5\n2\n")); }) == FormatErrc::malformed_header);
    CHECK(code_of([&] { io::decode_pgm16(bytes_of("P5\n0 2\n65535\n")); }) == FormatErrc::malformed_header);
    CHECK(code_of([&] { io::decode_pgm16(bytes_of("P5\n99999999999 2\n65535\n")); }) ==
          FormatErrc::malformed_header);
    CHECK(code_of([&] { io::decode_raw16(bytes_of("P5\n2 2\n65535\n\x10\x00"s + std::string(6, '\0'))); }) ==
          FormatErrc::sample_overflow);
    CHECK_NOTHROW(io::decode_raw16(bytes_of("P5\n2 2\n65535\n\x10\x00"s + std::string(6, '\0')), 16));
    CHECK(code_of([&] { io::decode_raw16(bytes_of("P5\n3 2\n65535\n" + std::string(12, '\0'))); }) ==
          FormatErrc::bad_value);
    CHECK_THROWS_AS(io::read_raw16(scratch("does-not-exist.pgm")), IoError);
}

TEST_CASE("profile round trip") {
    const auto p = oracle::standard_calibration().profile;
    const std::string text = io::encode_profile(p);
    const auto q = io::decode_profile(text);
    CHECK(q == p);
    CHECK(io::encode_profile(q) == text);
    const fs::path path = scratch("profile.json");
    io::write_profile(p, path);
    CHECK(io::read_profile(path) == p);
}

TEST_CASE("profile errors") {
    const std::string text = io::encode_profile(oracle::standard_calibration().profile);
    auto edit = [&](const std::string& from, const std::string& to) {
        std::string s = text;
        const auto at = s.find(from);
        REQUIRE(at != std::string::npos);
        return s.replace(at, from.size(), to);
    };
    CHECK(code_of([&] { io::decode_profile(edit("\"e2\": 0.2", "\"e2\": 1.2")); }) ==
          FormatErrc::invariant_violation);
    CHECK(code_of([&] { io::decode_profile(edit("\"version\": 1", "\"version\": \"99\"")); }) ==
          FormatErrc::unsupported_version);
    CHECK(code_of([&] { io::decode_profile(edit("\"version\": 1", "\"version\": 99")); }) ==
          FormatErrc::unsupported_version);
    CHECK(code_of([&] { io::decode_profile(edit("\"eol\"", "\"extra\": 0, \"eol\"")); }) == FormatErrc::unknown_key);
    CHECK(code_of([&] { io::decode_profile(edit("\"eol\": 3400,", "")); }) == FormatErrc::missing_key);
    CHECK(code_of([&] { io::decode_profile(edit("\"main\": \"R\"", "\"main\": \"Q\"")); }) ==
          FormatErrc::bad_value);
    CHECK(code_of([&] { io::decode_profile(edit("\"tier\": \"extra1\"", "\"tier\": \"main\"")); }) ==
          FormatErrc::bad_value);
    CHECK(code_of([&] { io::decode_profile(edit("\"order\": ", "\"order\": 1")); }) == FormatErrc::bad_value);
    CHECK(code_of([&] { io::decode_profile(text.substr(0, text.size() / 2)); }) == FormatErrc::syntax);
    CHECK(code_of([&] { io::decode_profile("[1, 2]"); }) == FormatErrc::bad_value);
}

TEST_CASE("HDR container") {
    LinearHdrImage img(3, 3);
    for (int i = 0; i < 9; ++i) {
        img.values.pixels()[static_cast<std::size_t>(i)] = 0.1f * static_cast<float>(i * i);
        img.valid.pixels()[static_cast<std::size_t>(i)] = i % 3 != 0;
    }
    const io::Bytes b = io::encode_hdr(img);
    CHECK(b.size() == 13 + 36 + 2);
    CHECK(std::memcmp(b.data(), "SVEH\x01\x03\x00\x00\x00\x03\x00\x00\x00", 13) == 0);
    CHECK(b[49] == 0b10110110);
    CHECK(b[50] == 0b1);
    CHECK(io::decode_hdr(b) == img);
    const fs::path p = scratch("img.sveh");
    io::write_hdr(img, p);
    CHECK(io::read_hdr(p) == img);

    LinearHdrImage nan = img;
    nan.values(1, 1) = std::numeric_limits<float>::quiet_NaN();
    CHECK_THROWS_AS(io::encode_hdr(nan), FormatError);
    CHECK_THROWS_AS(io::encode_hdr(LinearHdrImage(0, 0)), InvalidArgument);

    io::Bytes c = b;
    c[0] = 'X';
    CHECK(code_of([&] { io::decode_hdr(c); }) == FormatErrc::bad_magic);
    CHECK(code_of([&] { io::decode_hdr(std::span(b).first(b.size() - 1)); }) == FormatErrc::truncated);
    CHECK(code_of([&] { io::decode_hdr(std::span(b).first(8)); }) == FormatErrc::truncated);
    c = b;
    c.push_back(0);
    CHECK(code_of([&] { io::decode_hdr(c); }) == FormatErrc::trailing_data);
    c = b;
    c[4] = 2;
    CHECK(code_of([&] { io::decode_hdr(c); }) == FormatErrc::unsupported_version);
    c = b;
    c[5] = 0;
    CHECK(code_of([&] { io::decode_hdr(c); }) == FormatErrc::bad_value);
    c = b;
    c[50] = 0x80;  // padding bit set
    CHECK(code_of([&] { io::decode_hdr(c); }) == FormatErrc::bad_value);
    c = b;
    c[13 + 3] = 0x7F;
    c[13 + 2] = 0xC0;  // NaN bit pattern in the first sample
    CHECK(code_of([&] { io::decode_hdr(c); }) == FormatErrc::non_finite);
}

TEST_CASE("manifest and regions") {
    const std::vector<io::ManifestEntry> m{{0.00025, "a.pgm"}, {0.1, "b.pgm"}, {2.0, "sub dir/c.pgm"}};
    const std::string text = io::encode_manifest(m);
    CHECK(text == "exposure_seconds,path\n0.00025,a.pgm\n0.1,b.pgm\n2,sub dir/c.pgm\n");
    CHECK(io::decode_manifest(text) == m);
    CHECK(io::decode_manifest("exposure_seconds,path\r\n1,a\r\n\n") == std::vector<io::ManifestEntry>{{1.0, "a"}});
    CHECK(code_of([] { io::decode_manifest("T,path\n1,a\n"); }) == FormatErrc::malformed_header);
    CHECK(code_of([] { io::decode_manifest("exposure_seconds,path\n2,a\n1,b\n"); }) ==
          FormatErrc::invariant_violation);
    CHECK(code_of([] { io::decode_manifest("exposure_seconds,path\nabc,a\n"); }) == FormatErrc::bad_value);
    CHECK(code_of([] { io::decode_manifest("exposure_seconds,path\n1\n"); }) == FormatErrc::bad_value);
    CHECK(code_of([] { io::decode_manifest("exposure_seconds,path\n-1,a\n"); }) == FormatErrc::bad_value);

    const fs::path mp = scratch("manifest.csv");
    io::write_manifest(m, mp);
    CHECK_THROWS_AS(io::read_manifest(mp), IoError);  // referenced frames do not exist

    const std::vector<Rect> r{{1, 2, 15, 15}, {30, 2, 15, 15}};
    CHECK(io::decode_regions(io::encode_regions(r)) == r);
    CHECK(io::encode_regions(r) == "x,y,w,h\n1,2,15,15\n30,2,15,15\n");
    CHECK(code_of([] { io::decode_regions("x,y,w,h\n1,2,3\n"); }) == FormatErrc::bad_value);
    CHECK(code_of([] { io::decode_regions("x,y,w,h\n1,2,0,3\n"); }) == FormatErrc::bad_value);
    CHECK(code_of([] { io::decode_regions("x,y,w,h\n1.5,2,3,3\n"); }) == FormatErrc::bad_value);
}

TEST_CASE("series loading and CSV artefacts") {
    const fs::path dir = scratch("series").parent_path() / "series";
    fs::create_directories(dir);
    const auto series = oracle::flat_series({1.0, 2.0, 4.0}, {}, oracle::red(), 8);
    std::vector<io::ManifestEntry> m;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string name = "f" + std::to_string(i) + ".pgm";
        io::write_raw16(series.entries()[i].frame, dir / name);
        m.push_back({series.entries()[i].exposure, name});
    }
    io::write_manifest(m, dir / "manifest.csv");
    const auto loaded = io::load_series(dir / "manifest.csv");
    REQUIRE(loaded.size() == 3);
    CHECK(loaded.entries()[2].frame == series.entries()[2].frame);
    CHECK(loaded.entries()[2].exposure == 4.0);

    const auto rf = measure_radiometric(loaded, Rect{0, 0, 4, 4}, {}, oracle::red(), 3400);
    CHECK(io::encode_radiometric(rf) == "T_seconds,mean_sve\n1,1000\n2,2000\n4,4200\n");

    const fs::path csv = dir / "metrics.csv";
    fs::remove(csv);
    EvaluationRecord r;
    r.halftone.ratios = {1, 0.5};
    io::append_evaluation(r, csv);
    io::append_evaluation(r, csv);
    const auto b = io::read_file(csv);
    CHECK(std::string(b.begin(), b.end()) == evaluation_csv_header(2) + "\n" + evaluation_csv_row(r) + "\n" +
                                                 evaluation_csv_row(r) + "\n");
}

TEST_CASE("preview") {
    LinearHdrImage img(2, 1);
    img.values(0, 0) = 50.0f;
    img.values(1, 0) = 100.0f;
    img.valid(0, 0) = img.valid(1, 0) = 1;
    const auto b = io::encode_preview8(img);
    const std::string head = "P5\n2 1\n255\n";
    REQUIRE(b.size() == head.size() + 2);
    CHECK(b[head.size()] == 128);
    CHECK(b[head.size() + 1] == 255);
}

TEST_CASE("readers reject random bytes with structured errors") {
    std::mt19937 rng(9);
    for (int i = 0; i < 1000; ++i) {
        io::Bytes junk(rng() % 64);
        for (auto& c : junk) c = static_cast<std::uint8_t>(rng());
        if (i % 3 == 0 && junk.size() > 4) std::memcpy(junk.data(), i % 2 ? "P5\n1" : "SVEH", 4);
        const std::string text(junk.begin(), junk.end());
        CHECK_THROWS_AS(io::decode_raw16(junk), Error);
        CHECK_THROWS_AS(io::decode_hdr(junk), Error);
        CHECK_THROWS_AS(io::decode_profile(text), Error);
        try {
            io::decode_manifest(text);
            io::decode_regions(text);
        } catch (const Error&) {
        }
    }
}
