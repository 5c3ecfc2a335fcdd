#include "svehdr/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "svehdr/error.hpp"

namespace svehdr {

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Polynomial::derivative(double x) const {
    double acc = 0.0;
    for (int n = order(); n >= 1; --n) acc = acc * x + n * coeffs[static_cast<std::size_t>(n)];
    return acc;
}

PolynomialFit fit_polynomial(std::span<const double> x, std::span<const double> y, int order,
                             double max_condition) {
    if (order < 0) throw InvalidArgument("polynomial order must be non-negative");
    if (x.size() != y.size()) throw InvalidArgument("abscissa and ordinate counts differ");
    const auto n = static_cast<Eigen::Index>(x.size());
    if (n < order + 2)
        throw CalibrationError("polynomial of order " + std::to_string(order) + " needs at least " +
                               std::to_string(order + 2) + " points, got " + std::to_string(n));

    const auto [min_it, max_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *min_it;
    const double hi = *max_it;
    if (!(hi > lo)) throw CalibrationError("all abscissae are equal");
    const double span = hi - lo;

    Eigen::MatrixXd design(n, order + 1);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = (x[static_cast<std::size_t>(i)] - lo) / span;
        double term = 1.0;
        for (int k = 0; k <= order; ++k) {
            design(i, k) = term;
            term *= u;
        }
        rhs(i) = y[static_cast<std::size_t>(i)];
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                     : std::numeric_limits<double>::infinity();
    if (!(condition <= max_condition))
        throw CalibrationError("ill-conditioned polynomial fit (condition " + std::to_string(condition) +
                               "); try a lower order than " + std::to_string(order));
    const Eigen::VectorXd c = svd.solve(rhs);

    // Expand sum_k c_k ((x - lo) / span)^k into powers of x.
    std::vector<long double> expanded(static_cast<std::size_t>(order) + 1, 0.0L);
    std::vector<long double> basis{1.0L};  // coefficients of ((x - lo)/span)^k
    for (int k = 0; k <= order; ++k) {
        for (std::size_t j = 0; j < basis.size(); ++j) expanded[j] += c(k) * basis[j];
        std::vector<long double> next(basis.size() + 1, 0.0L);
        for (std::size_t j = 0; j < basis.size(); ++j) {
            next[j + 1] += basis[j] / span;
            next[j] -= basis[j] * lo / span;
        }
        basis = std::move(next);
    }

    PolynomialFit fit;
    fit.poly.coeffs.assign(expanded.begin(), expanded.end());
    fit.poly.domain_lo = lo;
    fit.poly.domain_hi = hi;
    fit.condition = condition;
    double sq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = fit.poly(x[static_cast<std::size_t>(i)]) - y[static_cast<std::size_t>(i)];
        sq += r * r;
    }
    fit.rms = std::sqrt(sq / static_cast<double>(n));
    return fit;
}

bool positive_nondecreasing(const Polynomial& p, double lo, double hi, int grid_points) {
    if (grid_points < 2 || !(hi >= lo)) return false;
    double prev = p(lo);
    if (!(prev > 0.0)) return false;
    for (int i = 1; i < grid_points; ++i) {
        const double x = lo + (hi - lo) * i / (grid_points - 1);
        const double v = p(x);
        if (!(v > 0.0)) return false;
        // Allow round-off sized dips on flat stretches.
        if (v < prev - 1e-9 * std::max(1.0, std::abs(prev))) return false;
        prev = v;
    }
    return true;
}

}  // namespace svehdr
