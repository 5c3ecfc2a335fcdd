#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "svehdr/linearize.hpp"

using namespace svehdr;

namespace {

const CorrectionProfile& profile() {
    static const CorrectionProfile p = oracle::standard_calibration().profile;
    return p;
}

double lin(std::uint32_t v, DomainPolicy policy = DomainPolicy::clamp) {
    return linearize_value(v, provenance_of(v, 3400), profile(), policy).value();
}

}  // namespace

TEST_CASE("per-value linearization") {
    CHECK(lin(1000) == 1000.0);
    CHECK(std::abs(lin(4400) - 5000.0) / 5000.0 <= 0.02);
    CHECK(std::abs(lin(9500) - 30000.0) / 30000.0 <= 0.05);  // 2*eol + 0.09 * 30000
    CHECK_FALSE(linearize_value(10200, Provenance::unrecoverable, profile()).has_value());
}

TEST_CASE("property: noiseless values match the piecewise inversion") {
    std::mt19937 rng(5);
    for (int i = 0; i < 5000; ++i) {
        // Main-equivalent signal from the top of the main tier to the top of extra2.
        const double u = std::uniform_real_distribution<double>(3400, 3399 / 0.09)(rng);
        const double v = oracle::forward(u, 3400, 0.20, 0.09);
        const auto tier = provenance_of(static_cast<std::uint32_t>(v), 3400);
        const double truth = oracle::invert(v, 3400, 0.20, 0.09);
        const double out = lin(static_cast<std::uint32_t>(v));
        const double tol = tier == Provenance::extra1 ? 0.02 : 0.05;
        REQUIRE(std::abs(out - truth) / truth <= tol);
    }
}

TEST_CASE("property: linearization is monotone in the SVE value") {
    std::mt19937 rng(6);
    std::uniform_int_distribution<int> dn(0, 3 * 3400 - 1);
    for (int i = 0; i < 20000; ++i) {
        auto a = static_cast<std::uint32_t>(dn(rng));
        auto b = static_cast<std::uint32_t>(dn(rng));
        if (a > b) std::swap(a, b);
        REQUIRE(lin(a) <= lin(b));
    }
    double prev = -1;
    for (std::uint32_t v = 0; v < 3 * 3400; ++v) {
        const double out = lin(v);
        REQUIRE(out >= prev);
        prev = out;
    }
}

TEST_CASE("domain policies") {
    const auto& seg = *profile().segment(Provenance::extra1);
    const auto below = static_cast<std::uint32_t>(std::floor(seg.alpha_of_value.domain_lo)) - 1;
    REQUIRE(provenance_of(below, 3400) == Provenance::extra1);
    CHECK_FALSE(linearize_value(below, Provenance::extra1, profile(), DomainPolicy::invalidate).has_value());
    CHECK(lin(below) == doctest::Approx(seg.linearize(seg.alpha_of_value.domain_lo)));
    CHECK(domain_policy_from_string("invalidate") == DomainPolicy::invalidate);
    CHECK_THROWS_AS(domain_policy_from_string("wrap"), InvalidArgument);

    // A tier without a segment falls back to the top of the calibrated range below it.
    CorrectionProfile partial = profile();
    partial.segments.pop_back();
    const auto top = seg.linearize(seg.alpha_of_value.domain_hi);
    CHECK(linearize_value(8000, Provenance::extra2, partial).value() == doctest::Approx(top));
    CHECK_FALSE(linearize_value(8000, Provenance::extra2, partial, DomainPolicy::invalidate).has_value());
    partial.segments.clear();
    CHECK(linearize_value(4000, Provenance::extra1, partial).value() == 3400.0);
}

TEST_CASE("image linearization") {
    Plane<std::uint16_t> v(3, 1);
    v(0, 0) = 1000;
    v(1, 0) = 4400;
    v(2, 0) = 10200;
    const LinearHdrImage img = linearize(sve_from_values(v, 3400), profile());
    CHECK(img.values(0, 0) == 1000.0f);
    CHECK(img.is_valid(1, 0));
    CHECK_FALSE(img.is_valid(2, 0));
    CHECK(img.valid_count() == 2);
    CHECK_THROWS_AS(linearize(sve_from_values(v, 3401), profile()), ProfileMismatch);
}

TEST_CASE("doubling exposure doubles the reconstruction") {
    const auto roles = oracle::red();
    const auto chart = make_test_chart(512, 256);
    for (double t : {1.0, 3.0, 8.0}) {
        auto recon = [&](double time) {
            const auto f = expose(chart.scene, {}, {}, roles, time);
            return linearize(construct(decompose(f, {}, roles), 3400), profile());
        };
        const auto a = recon(t);
        const auto b = recon(2 * t);
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            const double x = a.values.pixels()[i];
            if (x < 200) continue;  // quantization dominates in the dark steps
            REQUIRE(std::abs(b.values.pixels()[i] / (2 * x) - 1.0) <= 0.02);
        }
    }
}

TEST_CASE("dynamic range") {
    LinearHdrImage img(2, 1);
    img.values(0, 0) = 3162.3f;
    img.valid(0, 0) = 1;
    CHECK(dynamic_range_db(img) == doctest::Approx(70.0).epsilon(1e-5));
    const double base = dynamic_range_db(img);
    img.values(0, 0) *= 5;
    CHECK(dynamic_range_db(img) - base == doctest::Approx(13.9794).epsilon(1e-4));
    CHECK(dynamic_range_db(img, 10.0) == doctest::Approx(base + 13.9794 - 20).epsilon(1e-4));
    img.values(1, 0) = 1e9f;  // invalid pixels do not count
    CHECK(dynamic_range_db(img) - base == doctest::Approx(13.9794).epsilon(1e-4));
    CHECK_THROWS_AS(dynamic_range_db(img, 0.0), InvalidArgument);
    CHECK_THROWS_AS(dynamic_range_db(LinearHdrImage(2, 2)), InvalidArgument);
    CHECK_THROWS_AS(dynamic_range_db(img, 1.0, Rect{1, 0, 1, 1}), InvalidArgument);
}
