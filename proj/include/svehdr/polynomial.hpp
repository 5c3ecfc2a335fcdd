#pragma once

#include <span>
#include <vector>

#include "svehdr/error.hpp"

namespace svehdr {

/// Power-series polynomial sum_n coeffs[n] * x^n in physical units, with the
/// interval it was fitted on.
struct Polynomial {
    std::vector<double> coeffs;
    double domain_lo = 0.0;
    double domain_hi = 0.0;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    double operator()(double x) const;
    double derivative(double x) const;

    bool operator==(const Polynomial&) const = default;
};

struct PolynomialFit {
    Polynomial poly;
    double rms = 0.0;        ///< root-mean-square residual over the fitted points
    double condition = 0.0;  ///< 2-norm condition number of the normalized design matrix
};

/// Above this condition number a fit is rejected as ill-conditioned.
inline constexpr double kMaxCondition = 1e10;

/// Least-squares polynomial of the given order. Abscissae are mapped affinely
/// onto [0, 1] before solving; the returned coefficients are expanded back to
/// physical units. Throws CalibrationError with fewer than order + 2 points, a
/// degenerate abscissa range or a condition number above `max_condition`.
PolynomialFit fit_polynomial(std::span<const double> x, std::span<const double> y, int order,
                             double max_condition = kMaxCondition);

/// True when p is > 0 and non-decreasing at `grid_points` evenly spaced points
/// of [lo, hi].
bool positive_nondecreasing(const Polynomial& p, double lo, double hi, int grid_points = 1001);

}  // namespace svehdr
