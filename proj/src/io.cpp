#include "svehdr/io.hpp"

#include <fmt/format.h>

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

namespace svehdr::io {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading " + path.string());
    return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("error writing " + path.string());
}

void write_text(const fs::path& path, std::string_view text) {
    write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

namespace {

std::string_view as_text(std::span<const std::uint8_t> bytes) {
    return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

// --- graymap header ---------------------------------------------------------

bool is_space(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    void expect_magic() {
        if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != '5')
            throw FormatError(FormatErrc::malformed_header, "missing P5 signature");
        pos_ = 2;
    }

    unsigned long next_uint(const char* what) {
        const std::size_t before = pos_;
        skip_space_and_comments();
        if (pos_ == before) throw FormatError(FormatErrc::malformed_header, std::string("no separator before ") + what);
        unsigned long value = 0;
        int digits = 0;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            if (++digits > 9) throw FormatError(FormatErrc::malformed_header, std::string(what) + " is too large");
            value = value * 10 + (bytes_[pos_] - '0');
            ++pos_;
        }
        if (digits == 0) throw FormatError(FormatErrc::malformed_header, std::string("expected ") + what);
        return value;
    }

    void single_space() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_]))
            throw FormatError(FormatErrc::malformed_header, "maxval must be followed by one whitespace byte");
        ++pos_;
    }

    std::size_t position() const { return pos_; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

// --- little-endian helpers ------------------------------------------------

void put_u32(Bytes& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + static_cast<std::size_t>(i)]) << (8 * i);
    return v;
}

// --- CSV helpers ------------------------------------------------------------

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    while (true) {
        const auto comma = line.find(',');
        fields.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return fields;
}

template <typename T>
T parse_number(std::string_view field, const char* what) {
    T value{};
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty())
        throw FormatError(FormatErrc::bad_value, std::string("cannot parse ") + what + " '" + std::string(field) + "'");
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw FormatError(FormatErrc::non_finite, std::string(what) + " is not finite");
    }
    return value;
}

void expect_header(const std::vector<std::string_view>& lines, std::string_view header) {
    if (lines.empty() || lines.front() != header)
        throw FormatError(FormatErrc::malformed_header, "expected CSV header '" + std::string(header) + "'");
}

// --- profile JSON helpers -----------------------------------------------------

const json& require(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw FormatError(FormatErrc::missing_key, key);
    return *it;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const char* where) {
    if (!obj.is_object()) throw FormatError(FormatErrc::bad_value, std::string(where) + " must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            throw FormatError(FormatErrc::unknown_key, std::string(where) + "." + item.key());
    for (const char* k : keys)
        if (!obj.contains(k)) throw FormatError(FormatErrc::missing_key, std::string(where) + "." + k);
}

double number(const json& v, const char* what) {
    if (!v.is_number()) throw FormatError(FormatErrc::bad_value, std::string(what) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw FormatError(FormatErrc::non_finite, what);
    return d;
}

int integer(const json& v, const char* what) {
    if (!v.is_number_integer()) throw FormatError(FormatErrc::bad_value, std::string(what) + " must be an integer");
    const auto i = v.get<long long>();
    if (i < -1000000 || i > 1000000) throw FormatError(FormatErrc::bad_value, std::string(what) + " out of range");
    return static_cast<int>(i);
}

Channel channel(const json& v, const char* what) {
    if (!v.is_string() || v.get<std::string>().size() != 1)
        throw FormatError(FormatErrc::bad_value, std::string(what) + " must be one of \"R\", \"G\", \"B\"");
    try {
        return channel_from_char(v.get<std::string>()[0]);
    } catch (const InvalidArgument&) {
        throw FormatError(FormatErrc::bad_value, std::string(what) + " must be one of \"R\", \"G\", \"B\"");
    }
}

std::pair<double, double> pair_of(const json& v, const char* what) {
    if (!v.is_array() || v.size() != 2)
        throw FormatError(FormatErrc::bad_value, std::string(what) + " must be a two-element array");
    return {number(v[0], what), number(v[1], what)};
}

ordered_json poly_json(const Polynomial& p, const char* domain_key) {
    ordered_json j;
    j["order"] = p.order();
    j["coeffs"] = p.coeffs;
    j[domain_key] = {p.domain_lo, p.domain_hi};
    return j;
}

Polynomial poly_from_json(const json& j, const char* where, const char* domain_key) {
    only_keys(j, {"order", "coeffs", domain_key}, where);
    Polynomial p;
    const int order = integer(j["order"], "order");
    const json& coeffs = j["coeffs"];
    if (!coeffs.is_array()) throw FormatError(FormatErrc::bad_value, std::string(where) + ".coeffs must be an array");
    for (const auto& c : coeffs) p.coeffs.push_back(number(c, "coefficient"));
    if (order < 0 || static_cast<std::size_t>(order) + 1 != p.coeffs.size())
        throw FormatError(FormatErrc::bad_value, std::string(where) + ".order does not match the coefficient count");
    std::tie(p.domain_lo, p.domain_hi) = pair_of(j[domain_key], domain_key);
    return p;
}

const char* tier_name(Provenance p) {
    switch (p) {
        case Provenance::extra1: return "extra1";
        case Provenance::extra2: return "extra2";
        default: return "?";
    }
}

Provenance tier_from_json(const json& v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "extra1") return Provenance::extra1;
        if (v.get<std::string>() == "extra2") return Provenance::extra2;
    }
    throw FormatError(FormatErrc::bad_value, "segment tier must be \"extra1\" or \"extra2\"");
}

}  // namespace

// --- graymap -------------------------------------------------------------------

Bytes encode_pgm16(const Plane<std::uint16_t>& plane) {
    if (plane.width() <= 0 || plane.height() <= 0) throw InvalidArgument("cannot encode an empty plane");
    const std::string header = fmt::format("P5\n{} {}\n65535\n", plane.width(), plane.height());
    Bytes out(header.begin(), header.end());
    out.reserve(out.size() + plane.size() * 2);
    for (std::uint16_t s : plane.pixels()) {
        out.push_back(static_cast<std::uint8_t>(s >> 8));
        out.push_back(static_cast<std::uint8_t>(s & 0xFF));
    }
    return out;
}

Plane<std::uint16_t> decode_pgm16(std::span<const std::uint8_t> bytes) {
    HeaderReader header(bytes);
    header.expect_magic();
    const auto width = header.next_uint("width");
    const auto height = header.next_uint("height");
    const auto maxval = header.next_uint("maxval");
    header.single_space();
    if (width == 0 || height == 0) throw FormatError(FormatErrc::malformed_header, "zero image dimension");
    if (maxval != 65535)
        throw FormatError(FormatErrc::unsupported_maxval, "maxval " + std::to_string(maxval) + ", expected 65535");

    const std::uint64_t need = static_cast<std::uint64_t>(width) * height * 2;
    const std::uint64_t have = bytes.size() - header.position();
    if (have < need)
        throw FormatError(FormatErrc::truncated, "payload has " + std::to_string(have) + " of " +
                                                     std::to_string(need) + " bytes");
    if (have > need) throw FormatError(FormatErrc::trailing_data, "bytes after the last sample");

    Plane<std::uint16_t> plane(static_cast<int>(width), static_cast<int>(height));
    auto px = plane.pixels();
    const auto* src = bytes.data() + header.position();
    for (std::size_t i = 0; i < px.size(); ++i)
        px[i] = static_cast<std::uint16_t>((src[2 * i] << 8) | src[2 * i + 1]);
    return plane;
}

Bytes encode_raw16(const RawFrame& frame) { return encode_pgm16(frame.samples()); }

RawFrame decode_raw16(std::span<const std::uint8_t> bytes, int bit_depth) {
    if (bit_depth < 1 || bit_depth > 16) throw InvalidArgument("bit depth must be in 1..16");
    Plane<std::uint16_t> plane = decode_pgm16(bytes);
    if (plane.width() % 2 != 0 || plane.height() % 2 != 0)
        throw FormatError(FormatErrc::bad_value, "raw frame dimensions must be even");
    const auto limit = static_cast<std::uint16_t>((1u << bit_depth) - 1u);
    const auto px = plane.pixels();
    if (const auto it = std::find_if(px.begin(), px.end(), [&](std::uint16_t s) { return s > limit; }); it != px.end())
        throw FormatError(FormatErrc::sample_overflow, "sample " + std::to_string(*it) + " exceeds " +
                                                           std::to_string(limit) + " for " +
                                                           std::to_string(bit_depth) + "-bit data");
    return RawFrame(plane.width(), plane.height(), bit_depth, {px.begin(), px.end()});
}

RawFrame read_raw16(const fs::path& path, int bit_depth) {
    const Bytes bytes = read_file(path);
    try {
        return decode_raw16(bytes, bit_depth);
    } catch (const FormatError& e) {
        throw FormatError(e.code(), path.string() + ": " + e.what());
    }
}

void write_raw16(const RawFrame& frame, const fs::path& path) { write_file(path, encode_raw16(frame)); }

Bytes encode_preview8(const LinearHdrImage& img) {
    if (img.width() <= 0 || img.height() <= 0) throw InvalidArgument("cannot encode an empty image");
    float peak = 0.0f;
    for (std::size_t i = 0; i < img.values.size(); ++i)
        if (img.valid.pixels()[i]) peak = std::max(peak, img.values.pixels()[i]);
    const std::string header = fmt::format("P5\n{} {}\n255\n", img.width(), img.height());
    Bytes out(header.begin(), header.end());
    for (std::size_t i = 0; i < img.values.size(); ++i) {
        const double v = img.valid.pixels()[i] && peak > 0.0f ? img.values.pixels()[i] / peak : 0.0;
        out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    }
    return out;
}

// --- profile -------------------------------------------------------------------

std::string encode_profile(const CorrectionProfile& profile) {
    profile.validate();
    ordered_json j;
    j["version"] = kProfileVersion;
    j["eol"] = profile.eol;
    const auto& r = profile.roles;
    j["roles"] = ordered_json{{"lambda_nm", r.lambda_nm},
                              {"main", std::string(1, to_char(r.main))},
                              {"extra1", std::string(1, to_char(r.extra1))},
                              {"extra2", std::string(1, to_char(r.extra2))},
                              {"e1", r.e1},
                              {"e2", r.e2},
                              {"e3", r.e3}};
    j["linear"] = ordered_json{{"a", profile.linear.a}, {"b", profile.linear.b}};
    j["segments"] = ordered_json::array();
    for (const auto& s : profile.segments) {
        ordered_json seg;
        seg["tier"] = tier_name(s.tier);
        seg["poly"] = poly_json(s.response, "t_domain");
        seg["alpha_value_poly"] = poly_json(s.alpha_of_value, "v_domain");
        seg["alpha_samples"] = ordered_json::array();
        for (const auto& a : s.alpha_samples) seg["alpha_samples"].push_back({a.exposure, a.alpha});
        j["segments"].push_back(std::move(seg));
    }
    return j.dump(2) + "\n";
}

CorrectionProfile decode_profile(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        throw FormatError(FormatErrc::syntax, e.what());
    }
    if (!j.is_object()) throw FormatError(FormatErrc::bad_value, "profile must be a JSON object");
    const json& version = require(j, "version");
    if (!version.is_number_integer() || version.get<long long>() != kProfileVersion)
        throw FormatError(FormatErrc::unsupported_version,
                          "profile version " + version.dump() + ", expected " + std::to_string(kProfileVersion));
    only_keys(j, {"version", "eol", "roles", "linear", "segments"}, "profile");

    try {
        CorrectionProfile p;
        p.eol = integer(j["eol"], "eol");

        const json& roles = j["roles"];
        only_keys(roles, {"lambda_nm", "main", "extra1", "extra2", "e1", "e2", "e3"}, "roles");
        p.roles.lambda_nm = number(roles["lambda_nm"], "roles.lambda_nm");
        p.roles.main = channel(roles["main"], "roles.main");
        p.roles.extra1 = channel(roles["extra1"], "roles.extra1");
        p.roles.extra2 = channel(roles["extra2"], "roles.extra2");
        p.roles.e1 = number(roles["e1"], "roles.e1");
        p.roles.e2 = number(roles["e2"], "roles.e2");
        p.roles.e3 = number(roles["e3"], "roles.e3");

        const json& linear = j["linear"];
        only_keys(linear, {"a", "b"}, "linear");
        p.linear.a = number(linear["a"], "linear.a");
        p.linear.b = number(linear["b"], "linear.b");

        const json& segments = j["segments"];
        if (!segments.is_array()) throw FormatError(FormatErrc::bad_value, "segments must be an array");
        for (const auto& sj : segments) {
            only_keys(sj, {"tier", "poly", "alpha_value_poly", "alpha_samples"}, "segment");
            CorrectionSegment s;
            s.tier = tier_from_json(sj["tier"]);
            s.response = poly_from_json(sj["poly"], "poly", "t_domain");
            s.alpha_of_value = poly_from_json(sj["alpha_value_poly"], "alpha_value_poly", "v_domain");
            if (!sj["alpha_samples"].is_array())
                throw FormatError(FormatErrc::bad_value, "alpha_samples must be an array");
            for (const auto& a : sj["alpha_samples"]) {
                const auto [t, alpha] = pair_of(a, "alpha sample");
                s.alpha_samples.push_back({t, alpha});
            }
            p.segments.push_back(std::move(s));
        }

        p.validate();
        return p;
    } catch (const InvalidArgument& e) {
        throw FormatError(FormatErrc::invariant_violation, e.what());
    } catch (const json::exception& e) {
        throw FormatError(FormatErrc::bad_value, e.what());
    }
}

CorrectionProfile read_profile(const fs::path& path) {
    const Bytes bytes = read_file(path);
    try {
        return decode_profile(as_text(bytes));
    } catch (const FormatError& e) {
        throw FormatError(e.code(), path.string() + ": " + e.what());
    }
}

void write_profile(const CorrectionProfile& profile, const fs::path& path) {
    write_text(path, encode_profile(profile));
}

// --- HDR container -----------------------------------------------------------

Bytes encode_hdr(const LinearHdrImage& img) {
    if (img.width() <= 0 || img.height() <= 0) throw InvalidArgument("cannot encode a zero-dimension image");
    if (!img.valid.same_shape(img.values)) throw InvalidArgument("validity mask and values differ in shape");
    Bytes out{'S', 'V', 'E', 'H', kHdrVersion};
    put_u32(out, static_cast<std::uint32_t>(img.width()));
    put_u32(out, static_cast<std::uint32_t>(img.height()));
    for (float v : img.values.pixels()) {
        if (!std::isfinite(v)) throw FormatError(FormatErrc::non_finite, "HDR samples must be finite");
        put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
    const auto mask = img.valid.pixels();
    Bytes bits((mask.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) bits[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    out.insert(out.end(), bits.begin(), bits.end());
    return out;
}

LinearHdrImage decode_hdr(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t header = 13;
    if (bytes.size() < 4 || !std::equal(bytes.begin(), bytes.begin() + 4, "SVEH"))
        throw FormatError(FormatErrc::bad_magic, "missing SVEH signature");
    if (bytes.size() < header) throw FormatError(FormatErrc::truncated, "HDR header is incomplete");
    if (bytes[4] != kHdrVersion)
        throw FormatError(FormatErrc::unsupported_version, "HDR version " + std::to_string(bytes[4]));
    const std::uint32_t width = get_u32(bytes, 5);
    const std::uint32_t height = get_u32(bytes, 9);
    if (width == 0 || height == 0) throw FormatError(FormatErrc::bad_value, "zero image dimension");
    if (width > 1u << 20 || height > 1u << 20) throw FormatError(FormatErrc::bad_value, "image dimension too large");
    const std::uint64_t count = static_cast<std::uint64_t>(width) * height;
    const std::uint64_t need = header + 4 * count + (count + 7) / 8;
    if (bytes.size() < need) throw FormatError(FormatErrc::truncated, "HDR payload is incomplete");
    if (bytes.size() > need) throw FormatError(FormatErrc::trailing_data, "bytes after the validity mask");

    LinearHdrImage img(static_cast<int>(width), static_cast<int>(height));
    auto values = img.values.pixels();
    auto valid = img.valid.pixels();
    for (std::size_t i = 0; i < count; ++i) {
        const float v = std::bit_cast<float>(get_u32(bytes, header + 4 * i));
        if (!std::isfinite(v)) throw FormatError(FormatErrc::non_finite, "HDR sample " + std::to_string(i));
        values[i] = v;
    }
    const std::size_t mask_at = header + 4 * count;
    for (std::size_t i = 0; i < count; ++i) valid[i] = (bytes[mask_at + i / 8] >> (i % 8)) & 1u;
    if (count % 8 != 0 && (bytes.back() >> (count % 8)) != 0)
        throw FormatError(FormatErrc::bad_value, "non-zero padding bits in the validity mask");
    return img;
}

LinearHdrImage read_hdr(const fs::path& path) {
    const Bytes bytes = read_file(path);
    try {
        return decode_hdr(bytes);
    } catch (const FormatError& e) {
        throw FormatError(e.code(), path.string() + ": " + e.what());
    }
}

void write_hdr(const LinearHdrImage& img, const fs::path& path) { write_file(path, encode_hdr(img)); }

// --- CSV -----------------------------------------------------------------------

std::string encode_manifest(std::span<const ManifestEntry> entries) {
    std::string s = "exposure_seconds,path\n";
    for (const auto& e : entries) s += fmt::format("{},{}\n", e.exposure, e.path);
    return s;
}

std::vector<ManifestEntry> decode_manifest(std::string_view text) {
    const auto lines = split_lines(text);
    expect_header(lines, "exposure_seconds,path");
    std::vector<ManifestEntry> entries;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto comma = lines[i].find(',');
        if (comma == std::string_view::npos)
            throw FormatError(FormatErrc::bad_value, "manifest line " + std::to_string(i + 1) + " has no comma");
        ManifestEntry e;
        e.exposure = parse_number<double>(lines[i].substr(0, comma), "exposure");
        e.path = std::string(lines[i].substr(comma + 1));
        if (!(e.exposure > 0.0)) throw FormatError(FormatErrc::bad_value, "exposure must be positive");
        if (e.path.empty()) throw FormatError(FormatErrc::bad_value, "empty frame path");
        if (!entries.empty() && !(e.exposure > entries.back().exposure))
            throw FormatError(FormatErrc::invariant_violation, "manifest exposures must increase strictly");
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
    const Bytes bytes = read_file(path);
    auto entries = decode_manifest(as_text(bytes));
    const fs::path dir = path.parent_path();
    for (const auto& e : entries)
        if (!fs::exists(dir / e.path)) throw IoError("manifest entry " + (dir / e.path).string() + " does not exist");
    return entries;
}

void write_manifest(std::span<const ManifestEntry> entries, const fs::path& path) {
    write_text(path, encode_manifest(entries));
}

ExposureSeries load_series(const fs::path& manifest_path, int bit_depth) {
    const auto entries = read_manifest(manifest_path);
    std::vector<ExposureEntry> series;
    for (const auto& e : entries) {
        RawFrame frame = read_raw16(manifest_path.parent_path() / e.path, bit_depth);
        frame.set_exposure_time(e.exposure);
        series.push_back({e.exposure, std::move(frame)});
    }
    return ExposureSeries(std::move(series));
}

std::string encode_regions(std::span<const Rect> regions) {
    std::string s = "x,y,w,h\n";
    for (const auto& r : regions) s += fmt::format("{},{},{},{}\n", r.x, r.y, r.width, r.height);
    return s;
}

std::vector<Rect> decode_regions(std::string_view text) {
    const auto lines = split_lines(text);
    expect_header(lines, "x,y,w,h");
    std::vector<Rect> regions;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_fields(lines[i]);
        if (f.size() != 4) throw FormatError(FormatErrc::bad_value, "region line needs four fields");
        Rect r{parse_number<int>(f[0], "x"), parse_number<int>(f[1], "y"), parse_number<int>(f[2], "w"),
               parse_number<int>(f[3], "h")};
        if (r.x < 0 || r.y < 0 || r.width <= 0 || r.height <= 0)
            throw FormatError(FormatErrc::bad_value, "region must have a non-negative origin and positive size");
        regions.push_back(r);
    }
    return regions;
}

std::vector<Rect> read_regions(const fs::path& path) {
    const Bytes bytes = read_file(path);
    return decode_regions(as_text(bytes));
}

void write_regions(std::span<const Rect> regions, const fs::path& path) {
    write_text(path, encode_regions(regions));
}

std::string encode_radiometric(const RadiometricFunction& rf) {
    std::string s = "T_seconds,mean_sve\n";
    for (const auto& sample : rf.samples) s += fmt::format("{},{}\n", sample.exposure, sample.mean);
    return s;
}

void append_evaluation(const EvaluationRecord& record, const fs::path& path) {
    std::error_code ec;
    const bool fresh = !fs::exists(path, ec) || fs::file_size(path, ec) == 0;
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw IoError("cannot open " + path.string());
    if (fresh) out << evaluation_csv_header(record.halftone.ratios.size()) << '\n';
    out << evaluation_csv_row(record) << '\n';
    if (!out) throw IoError("error writing " + path.string());
}

}  // namespace svehdr::io
