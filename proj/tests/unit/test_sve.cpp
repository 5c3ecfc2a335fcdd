#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "svehdr/sve.hpp"

using namespace svehdr;

namespace {

QuadPlanes one_quad(std::uint16_t m, std::uint16_t a, std::uint16_t b) {
    return QuadPlanes{Plane<std::uint16_t>(1, 1, m), Plane<std::uint16_t>(1, 1, a), Plane<std::uint16_t>(1, 1, b), 12};
}

}  // namespace

TEST_CASE("merge rule examples") {
    auto check = [](std::uint16_t m, std::uint16_t a, std::uint16_t b, int value, Provenance p) {
        const SveImage s = construct(one_quad(m, a, b), 3400);
        CHECK(s.values(0, 0) == value);
        CHECK(s.provenance(0, 0) == p);
    };
    check(2000, 4095, 4095, 2000, Provenance::main);
    check(4095, 500, 0, 3900, Provenance::extra1);
    check(4095, 3500, 100, 6900, Provenance::extra2);
    check(4095, 4095, 4095, 10200, Provenance::unrecoverable);
    // The comparison is against eol, not against ADC saturation.
    check(3400, 3399, 0, 6799, Provenance::extra1);
    check(3399, 4095, 4095, 3399, Provenance::main);
    check(3400, 3400, 3400, 10200, Provenance::unrecoverable);
}

TEST_CASE("construct preconditions") {
    QuadPlanes q = one_quad(1, 2, 3);
    CHECK_THROWS_AS(construct(q, 0), InvalidArgument);
    CHECK_THROWS_AS(construct(q, 4096), InvalidArgument);
    q.extra2 = Plane<std::uint16_t>(2, 1, 0);
    CHECK_THROWS_AS(construct(q, 3400), InvalidArgument);
}

TEST_CASE("property: construct equals the brute-force merge") {
    std::mt19937 rng(1);
    std::uniform_int_distribution<int> dn(0, 4095);
    std::uniform_int_distribution<int> eol_dist(1000, 4000);
    for (int iter = 0; iter < 10000; ++iter) {
        const int eol = eol_dist(rng);
        const auto m = static_cast<std::uint16_t>(dn(rng));
        const auto a = static_cast<std::uint16_t>(dn(rng));
        const auto b = static_cast<std::uint16_t>(dn(rng));
        const SveImage s = construct(one_quad(m, a, b), eol);
        const auto expect = oracle::merge(m, a, b, static_cast<std::uint32_t>(eol));
        REQUIRE(s.values(0, 0) == expect.value);
        REQUIRE(static_cast<int>(s.provenance(0, 0)) == expect.tier);
    }
}

TEST_CASE("property: tier value ranges are disjoint and ordered") {
    std::mt19937 rng(2);
    std::uniform_int_distribution<int> dn(0, 4095);
    for (int iter = 0; iter < 2000; ++iter) {
        const int eol = std::uniform_int_distribution<int>(1000, 4000)(rng);
        const SveImage s = construct(one_quad(static_cast<std::uint16_t>(dn(rng)), static_cast<std::uint16_t>(dn(rng)),
                                              static_cast<std::uint16_t>(dn(rng))),
                                     eol);
        const int v = s.values(0, 0);
        const int t = static_cast<int>(s.provenance(0, 0));
        if (t < 3) {
            REQUIRE(v >= t * eol);
            REQUIRE(v < (t + 1) * eol);
        } else {
            REQUIRE(v == 3 * eol);
        }
        REQUIRE(provenance_of(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(eol)) == s.provenance(0, 0));
    }
}

TEST_CASE("construct leaves its input untouched and the value plane determines provenance") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> dn(0, 4095);
    QuadPlanes q{Plane<std::uint16_t>(16, 16), Plane<std::uint16_t>(16, 16), Plane<std::uint16_t>(16, 16), 12};
    for (auto* p : {&q.main, &q.extra1, &q.extra2})
        for (auto& v : p->pixels()) v = static_cast<std::uint16_t>(dn(rng));
    const QuadPlanes copy = q;
    const SveImage s = construct(q, 3400);
    CHECK(q.main == copy.main);
    CHECK(q.extra1 == copy.extra1);
    CHECK(q.extra2 == copy.extra2);
    const SveImage t = sve_from_values(s.values, 3400);
    CHECK(t.provenance == s.provenance);
    CHECK_THROWS_AS(sve_from_values(Plane<std::uint16_t>(1, 1, 10201), 3400), InvalidArgument);
}

TEST_CASE("usage fractions") {
    SveImage all_main = sve_from_values(Plane<std::uint16_t>(4, 4, 10), 3400);
    const auto u = usage_fractions(all_main);
    CHECK(u.main == 1.0);
    CHECK(u.extra1 == 0.0);

    Plane<std::uint16_t> values(10, 10, 100);
    for (int i = 0; i < 87; ++i) values.pixels()[static_cast<std::size_t>(i)] = 4000;
    const auto v = usage_fractions(sve_from_values(values, 3400));
    CHECK(v.extra1 == doctest::Approx(0.87));
    CHECK(v.main == doctest::Approx(0.13));
    CHECK(v.main + v.extra1 + v.extra2 + v.unrecoverable == doctest::Approx(1.0).epsilon(1e-12));

    const auto r = usage_fractions(sve_from_values(values, 3400), Rect{0, 0, 10, 1});
    CHECK(r.extra1 == 1.0);
    CHECK_THROWS_AS(usage_fractions(all_main, Rect{0, 0, 0, 1}), InvalidArgument);
    CHECK_THROWS_AS(usage_fractions(all_main, Rect{2, 2, 4, 4}), InvalidArgument);
}

TEST_CASE("over-exposed flat field lands entirely in the first extra tier") {
    // k*E*T = 10000: main saturates, extra1 reads 0.20 * 10000 = 2000 < eol.
    const auto roles = oracle::red();
    const RawFrame f = expose(make_flatfield(1.0, 32, 32), SensorModel{}, {}, roles, 10.0);
    const SveImage s = construct(decompose(f, {}, roles), 3400);
    const auto u = usage_fractions(s);
    CHECK(u.main == 0.0);
    CHECK(u.extra1 == 1.0);
    CHECK(u.extra2 == 0.0);
    CHECK(u.unrecoverable == 0.0);
    CHECK(s.values(3, 3) == 5400);
}
