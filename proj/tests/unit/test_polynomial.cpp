#include <doctest.h>

#include "svehdr/polynomial.hpp"

using namespace svehdr;

TEST_CASE("a polynomial is recovered exactly") {
    std::vector<double> x, y;
    for (int i = 0; i <= 10; ++i) {
        const double t = 0.5 + 0.3 * i;
        x.push_back(t);
        y.push_back(2 * t + 3 * t * t);
    }
    const PolynomialFit fit = fit_polynomial(x, y, 2);
    REQUIRE(fit.poly.coeffs.size() == 3);
    CHECK(fit.poly.coeffs[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(fit.poly.coeffs[0]) < 1e-9);
    CHECK(std::abs(fit.poly.coeffs[1] - 2.0) < 1e-9);
    CHECK(std::abs(fit.poly.coeffs[2] - 3.0) < 1e-9);
    CHECK(fit.rms < 1e-9);
    CHECK(fit.poly.domain_lo == 0.5);
    CHECK(fit.poly.domain_hi == doctest::Approx(3.5));
}

TEST_CASE("high orders on a shifted domain stay accurate") {
    std::vector<double> x, y;
    auto f = [](double t) { return 4000 + 300 * t - 20 * t * t + 0.5 * t * t * t; };
    for (int i = 0; i < 30; ++i) {
        x.push_back(3.4 + 0.5 * i);
        y.push_back(f(x.back()));
    }
    const PolynomialFit fit = fit_polynomial(x, y, 7);
    for (double t = 3.4; t <= 17.9; t += 0.1) CHECK(fit.poly(t) == doctest::Approx(f(t)).epsilon(1e-9));
}

TEST_CASE("fit preconditions") {
    const std::vector<double> x{1, 2, 3}, y{1, 2, 3};
    CHECK_THROWS_AS(fit_polynomial(x, y, 2), CalibrationError);  // needs order + 2 points
    CHECK_NOTHROW(fit_polynomial(x, y, 1));
    const std::vector<double> same{2, 2, 2, 2};
    CHECK_THROWS_AS(fit_polynomial(same, same, 1), CalibrationError);
    const std::vector<double> bad{1, 2, 3, 4};
    CHECK_THROWS_AS(fit_polynomial(bad, std::vector<double>{1, 2}, 1), InvalidArgument);
    std::vector<double> xs, ys;
    for (int i = 0; i < 12; ++i) {
        xs.push_back(i);
        ys.push_back(i * i);
    }
    CHECK_THROWS_WITH_AS(fit_polynomial(xs, ys, 3, 10.0), doctest::Contains("lower"), CalibrationError);
}

TEST_CASE("evaluation, derivative and monotonicity check") {
    const Polynomial p{{1.0, -2.0, 1.0}, 0.0, 3.0};  // (x - 1)^2
    CHECK(p(3.0) == 4.0);
    CHECK(p.derivative(3.0) == 4.0);
    CHECK(p.order() == 2);
    CHECK_FALSE(positive_nondecreasing(p, 0.0, 3.0));
    CHECK(positive_nondecreasing(p, 1.5, 3.0));
    CHECK_FALSE(positive_nondecreasing(Polynomial{{-1.0, 1.0}, 0, 1}, 0.0, 1.0));
}
