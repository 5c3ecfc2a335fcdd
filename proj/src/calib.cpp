#include "svehdr/calib.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace svehdr {

namespace {

bool finite_all(const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

// Scans outward from `start` in `steps` steps towards `limit` looking for the
// point where the (assumed monotone) response crosses `target`. Returns
// nullopt when the response turns over or never reaches the target.
std::optional<double> extend_to_value(const Polynomial& f, double start, double limit, double target,
                                      int steps = 4000) {
    const bool upward = limit > start;
    double prev_t = start;
    double prev_v = f(start);
    if (upward ? prev_v >= target : prev_v <= target) return start;
    for (int i = 1; i <= steps; ++i) {
        const double t = start + (limit - start) * i / steps;
        const double v = f(t);
        if (!std::isfinite(v) || (upward ? v < prev_v : v > prev_v) || v <= 0.0) return std::nullopt;
        if (upward ? v >= target : v <= target) {
            double lo = std::min(prev_t, t);
            double hi = std::max(prev_t, t);
            for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
                const double mid = 0.5 * (lo + hi);
                if (f(mid) < target) lo = mid;
                else hi = mid;
            }
            return upward ? hi : lo;
        }
        prev_t = t;
        prev_v = v;
    }
    return std::nullopt;
}

// alpha(v) * v must not decrease across the segment domain.
bool linearized_monotone(const Polynomial& alpha, int grid_points = 1001) {
    const double lo = alpha.domain_lo;
    const double hi = alpha.domain_hi;
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_points; ++i) {
        const double v = lo + (hi - lo) * i / (grid_points - 1);
        const double a = alpha(v);
        if (!(a > 0.0)) return false;
        const double out = a * v;
        if (out < prev - 1e-9 * std::abs(prev)) return false;
        prev = out;
    }
    return true;
}

}  // namespace

ExposureSeries::ExposureSeries(std::vector<ExposureEntry> entries) : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!(e.exposure > 0.0) || !std::isfinite(e.exposure))
            throw InvalidArgument("exposure times must be positive");
        if (i > 0) {
            const auto& prev = entries_[i - 1];
            if (!(e.exposure > prev.exposure))
                throw InvalidArgument("exposure times must be strictly increasing");
            if (e.frame.width() != prev.frame.width() || e.frame.height() != prev.frame.height() ||
                e.frame.bit_depth() != prev.frame.bit_depth())
                throw InvalidArgument("all frames of a series must share dimensions and bit depth");
        }
    }
}

void ExposureSeries::require_coverage(std::size_t min_entries, double min_decades) const {
    if (entries_.size() < min_entries)
        throw CalibrationError("exposure series has " + std::to_string(entries_.size()) +
                               " frames, at least " + std::to_string(min_entries) + " required");
    const double decades = std::log10(entries_.back().exposure / entries_.front().exposure);
    if (decades + 1e-9 < min_decades)
        throw CalibrationError("exposure series spans " + std::to_string(decades) + " decades, at least " +
                               std::to_string(min_decades) + " required");
}

RadiometricFunction measure_radiometric(const ExposureSeries& series, std::optional<Rect> roi,
                                        const CfaLayout& layout, const PixelRoles& roles, int eol,
                                        GreenPolicy green_policy) {
    if (series.empty()) throw InvalidArgument("exposure series is empty");
    const int qw = series.entries().front().frame.width() / 2;
    const int qh = series.entries().front().frame.height() / 2;
    const Rect r = roi.value_or(centered_rect(qw, qh, kDefaultRoiSide, kDefaultRoiSide));
    if (r.empty() || !r.fits_in(qw, qh))
        throw InvalidArgument("ROI " + std::to_string(r.width) + "x" + std::to_string(r.height) +
                              " does not fit the " + std::to_string(qw) + "x" + std::to_string(qh) +
                              " quad plane");

    RadiometricFunction rf;
    for (const auto& entry : series.entries()) {
        const SveImage sve = construct(decompose(entry.frame, layout, roles, green_policy), eol);
        std::array<long long, 4> counts{};
        double sum = 0.0;
        for (int y = r.y; y < r.y + r.height; ++y) {
            for (int x = r.x; x < r.x + r.width; ++x) {
                const Provenance p = sve.provenance(x, y);
                ++counts[static_cast<std::size_t>(p)];
                if (p != Provenance::unrecoverable) sum += sve.values(x, y);
            }
        }
        const long long recoverable = counts[0] + counts[1] + counts[2];
        if (2 * counts[3] > r.area()) {
            rf.excluded_exposures.push_back(entry.exposure);
            rf.warnings.push_back("exposure " + std::to_string(entry.exposure) +
                                  " s excluded: more than half of the ROI is unrecoverable");
            continue;
        }
        const auto majority = static_cast<std::size_t>(
            std::max_element(counts.begin(), counts.begin() + 3) - counts.begin());
        rf.samples.push_back({entry.exposure, sum / static_cast<double>(recoverable),
                              static_cast<Provenance>(majority),
                              static_cast<double>(counts[majority]) / static_cast<double>(recoverable)});
    }

    for (std::size_t i = 1; i < rf.samples.size(); ++i) {
        if (rf.samples[i].mean < rf.samples[i - 1].mean * (1.0 - 0.005))
            throw CalibrationError("radiometric function decreases by more than 0.5% at " +
                                   std::to_string(rf.samples[i].exposure) + " s");
    }
    return rf;
}

std::pair<std::vector<RadiometricSample>, std::vector<RadiometricSample>> split_linear_region(
    const RadiometricFunction& rf, int eol, double margin) {
    if (rf.samples.empty()) throw InvalidArgument("radiometric function has no samples");
    if (!(margin > 0.0 && margin <= 1.0)) throw InvalidArgument("linear margin must be in (0, 1]");
    std::vector<RadiometricSample> linear;
    std::vector<RadiometricSample> nonlinear;
    const double threshold = margin * eol;
    for (const auto& s : rf.samples) (s.mean < threshold ? linear : nonlinear).push_back(s);
    if (linear.size() < 3 || nonlinear.size() < 3)
        throw CalibrationError("insufficient coverage: " + std::to_string(linear.size()) + " linear and " +
                               std::to_string(nonlinear.size()) +
                               " non-linear samples, at least 3 of each required");
    return {std::move(linear), std::move(nonlinear)};
}

LinearModel fit_linear(std::span<const RadiometricSample> samples, double b_max) {
    if (samples.size() < 3) throw CalibrationError("line fit needs at least 3 samples");
    if (!(b_max >= 0.0)) throw InvalidArgument("intercept bound must be non-negative");
    const double n = static_cast<double>(samples.size());
    double t_mean = 0.0;
    double v_mean = 0.0;
    double v_scale = 0.0;
    for (const auto& s : samples) {
        t_mean += s.exposure;
        v_mean += s.mean;
        v_scale = std::max(v_scale, std::abs(s.mean));
    }
    t_mean /= n;
    v_mean /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& s : samples) {
        sxx += (s.exposure - t_mean) * (s.exposure - t_mean);
        sxy += (s.exposure - t_mean) * (s.mean - v_mean);
    }
    if (!(sxx > 0.0)) throw CalibrationError("line fit needs at least two distinct exposure times");

    LinearModel m;
    m.a = sxy / sxx;
    m.b = v_mean - m.a * t_mean;
    if (std::abs(m.b) <= 1e-9 * std::max(v_scale, 1.0)) m.b = 0.0;

    // Re-fit the slope with the intercept pinned at the violated bound.
    const auto slope_through = [&](double b) {
        double stt = 0.0;
        double stv = 0.0;
        for (const auto& s : samples) {
            stt += s.exposure * s.exposure;
            stv += s.exposure * (s.mean - b);
        }
        return stv / stt;
    };
    if (m.b < 0.0) {
        m.b = 0.0;
        m.a = slope_through(0.0);
    } else if (m.b > b_max) {
        m.b = b_max;
        m.a = slope_through(b_max);
    }
    if (!(m.a > 0.0)) throw CalibrationError("fitted slope is not positive");

    double sq = 0.0;
    for (const auto& s : samples) {
        const double r = m(s.exposure) - s.mean;
        sq += r * r;
    }
    m.residual_rms = std::sqrt(sq / n);
    return m;
}

PolyModelFit fit_poly(std::span<const RadiometricSample> samples, int order) {
    if (order < 2) throw InvalidArgument("radiometric polynomial order must be at least 2");
    std::vector<double> t;
    std::vector<double> v;
    for (const auto& s : samples) {
        t.push_back(s.exposure);
        v.push_back(s.mean);
    }
    PolynomialFit fit = fit_polynomial(t, v, order);
    PolyModelFit out;
    out.rms = fit.rms;
    out.monotone = positive_nondecreasing(fit.poly, fit.poly.domain_lo, fit.poly.domain_hi);
    out.poly = std::move(fit.poly);
    return out;
}

std::vector<AlphaSample> compute_correction(const LinearModel& lin, const Polynomial& poly,
                                            std::span<const double> exposure_grid) {
    const double slack = 1e-9 * (poly.domain_hi - poly.domain_lo);
    std::vector<AlphaSample> out;
    out.reserve(exposure_grid.size());
    for (double t : exposure_grid) {
        if (t < poly.domain_lo - slack || t > poly.domain_hi + slack)
            throw InvalidArgument("exposure " + std::to_string(t) + " s lies outside the polynomial domain");
        const double f = poly(t);
        if (!(f > 0.0))
            throw CalibrationError("radiometric polynomial is not positive at " + std::to_string(t) + " s");
        out.push_back({t, lin(t) / f});
    }
    return out;
}

Polynomial fit_alpha_of_value(std::span<const AlphaSample> alpha_samples, const Polynomial& poly, int order) {
    if (order < 0) throw InvalidArgument("alpha polynomial order must be non-negative");
    std::vector<double> v;
    std::vector<double> alpha;
    for (const auto& s : alpha_samples) {
        v.push_back(poly(s.exposure));
        alpha.push_back(s.alpha);
    }
    return fit_polynomial(v, alpha, order).poly;
}

const CorrectionSegment* CorrectionProfile::segment(Provenance tier) const {
    for (const auto& s : segments)
        if (s.tier == tier) return &s;
    return nullptr;
}

void CorrectionProfile::validate() const {
    if (eol <= 0 || 3 * eol > 0xFFFF) throw InvalidArgument("eol out of range");
    roles.validate();
    if (!(linear.a > 0.0) || !std::isfinite(linear.a)) throw InvalidArgument("line slope must be positive");
    if (!(linear.b >= 0.0) || !std::isfinite(linear.b)) throw InvalidArgument("line intercept must be >= 0");
    int previous_tier = 0;
    for (const auto& s : segments) {
        const int tier = static_cast<int>(s.tier);
        if (tier <= previous_tier || tier > 2)
            throw InvalidArgument("segments must be distinct non-linear tiers in increasing order");
        previous_tier = tier;
        for (const Polynomial* p : {&s.response, &s.alpha_of_value}) {
            if (p->coeffs.empty() || !finite_all(p->coeffs) || !std::isfinite(p->domain_lo) ||
                !std::isfinite(p->domain_hi) || !(p->domain_hi > p->domain_lo))
                throw InvalidArgument("segment polynomial is empty, non-finite or has an empty domain");
        }
        if (!positive_nondecreasing(s.response, s.response.domain_lo, s.response.domain_hi))
            throw InvalidArgument(std::string("response of tier ") + to_string(s.tier) +
                                  " is not positive and non-decreasing");
        if (!linearized_monotone(s.alpha_of_value))
            throw InvalidArgument(std::string("alpha(v) of tier ") + to_string(s.tier) +
                                  " is not positive or alpha(v)*v decreases");
        for (const auto& a : s.alpha_samples)
            if (!(a.alpha > 0.0) || !std::isfinite(a.alpha) || !std::isfinite(a.exposure))
                throw InvalidArgument("correction coefficients must be positive and finite");
    }
}

AlphaGrid alpha_grid_from_string(std::string_view s) {
    if (s == "dense") return AlphaGrid::dense;
    if (s == "measured") return AlphaGrid::measured;
    throw InvalidArgument("alpha grid must be dense or measured");
}

CalibrationResult calibrate(const RadiometricFunction& rf, const PixelRoles& roles, int eol,
                            const CalibrationOptions& options) {
    roles.validate();
    if (options.poly_order < 2 || options.alpha_order < 1)
        throw InvalidArgument("polynomial orders must be N >= 2 and M >= 1");
    if (options.dense_grid_points < 4) throw InvalidArgument("dense alpha grid needs at least 4 points");

    CalibrationResult result;
    auto& profile = result.profile;
    profile.eol = eol;
    profile.roles = roles;

    const auto [linear, nonlinear] = split_linear_region(rf, eol, options.linear_margin);
    profile.linear = fit_linear(linear, options.intercept_max);

    for (const auto& s : linear) {
        // Below ~100 DN one count of quantisation already exceeds the 2% band.
        if (s.mean < 100.0) continue;
        const double alpha = profile.linear(s.exposure) / s.mean;
        if (std::abs(alpha - 1.0) > 0.02)
            throw CalibrationError("linear region deviates from aT+b by " + std::to_string(alpha - 1.0) +
                                   " at " + std::to_string(s.exposure) + " s");
    }

    for (int tier = 1; tier <= 2; ++tier) {
        const auto prov = static_cast<Provenance>(tier);
        std::vector<RadiometricSample> own;
        for (const auto& s : nonlinear) {
            if (s.tier != prov || provenance_of(static_cast<std::uint32_t>(s.mean), eol) != prov) continue;
            if (s.purity < options.min_tier_purity) {
                result.warnings.push_back("sample at " + std::to_string(s.exposure) +
                                          " s mixes tiers and is skipped");
                continue;
            }
            own.push_back(s);
        }
        if (own.size() < 4) {
            result.warnings.push_back(std::string("tier ") + to_string(prov) + " has " +
                                      std::to_string(own.size()) + " clean samples; no correction fitted");
            continue;
        }

        PolyModelFit fit;
        int order = std::min<int>(options.poly_order, static_cast<int>(own.size()) - 2);
        for (;; --order) {
            if (order < 2)
                throw CalibrationError(std::string("no monotone polynomial fits tier ") + to_string(prov));
            try {
                fit = fit_poly(own, order);
            } catch (const CalibrationError&) {
                continue;
            }
            if (fit.monotone) break;
        }
        if (order < std::min<int>(options.poly_order, static_cast<int>(own.size()) - 2))
            result.warnings.push_back(std::string("tier ") + to_string(prov) + " response order lowered to " +
                                      std::to_string(order));

        // Stretch the response to the full value range the tier can produce:
        // from the point where the previous tier saturates up to the next EOL.
        Polynomial response = fit.poly;
        const double ratio = roles.tier_transmittance(tier) / roles.tier_transmittance(tier - 1);
        const double v_lo = tier * eol + ratio * eol;
        const double v_hi = (tier + 1) * static_cast<double>(eol);
        const double t_min = fit.poly.domain_lo;
        const double t_max = fit.poly.domain_hi;
        if (auto t = extend_to_value(response, t_min, t_min / 4.0, v_lo)) response.domain_lo = *t;
        else result.warnings.push_back(std::string("tier ") + to_string(prov) + " response not extended downwards");
        if (auto t = extend_to_value(response, t_max, t_max * 4.0, v_hi)) response.domain_hi = *t;
        else result.warnings.push_back(std::string("tier ") + to_string(prov) + " response not extended upwards");

        std::vector<double> grid;
        if (options.alpha_grid == AlphaGrid::dense) {
            const int n = options.dense_grid_points;
            for (int i = 0; i < n; ++i)
                grid.push_back(response.domain_lo + (response.domain_hi - response.domain_lo) * i / (n - 1));
        } else {
            for (const auto& s : own) grid.push_back(s.exposure);
        }
        CorrectionSegment segment;
        segment.tier = prov;
        segment.alpha_samples = compute_correction(profile.linear, response, grid);

        int alpha_order = std::min<int>(options.alpha_order, static_cast<int>(grid.size()) - 2);
        for (;; --alpha_order) {
            if (alpha_order < 1)
                throw CalibrationError(std::string("cannot fit alpha(v) for tier ") + to_string(prov));
            try {
                segment.alpha_of_value = fit_alpha_of_value(segment.alpha_samples, response, alpha_order);
            } catch (const CalibrationError&) {
                continue;
            }
            if (linearized_monotone(segment.alpha_of_value)) break;
        }
        segment.response = std::move(response);
        result.diagnostics.push_back({prov, own.size(), order, fit.rms, alpha_order});
        profile.segments.push_back(std::move(segment));
    }

    if (profile.segments.empty())
        throw CalibrationError("no non-linear tier has enough samples for a correction");
    try {
        profile.validate();
    } catch (const InvalidArgument& e) {
        throw CalibrationError(std::string("calibrated profile violates an invariant: ") + e.what());
    }
    return result;
}

}  // namespace svehdr
