#pragma once

// Radiometric calibration of the SVE system from a flat-field exposure series:
// measure mean SVE value against exposure time, fit the ideal line aT + b to
// the linear part and a polynomial f(T) to each non-linear tier, and derive
// correction coefficients alpha = (aT + b) / f(T) as a function of SVE value.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "svehdr/cfa.hpp"
#include "svehdr/polynomial.hpp"
#include "svehdr/sve.hpp"

namespace svehdr {

struct ExposureEntry {
    double exposure = 0.0;  // seconds
    RawFrame frame;
};

/// Flat-field frames ordered by strictly increasing exposure time.
class ExposureSeries {
public:
    ExposureSeries() = default;
    explicit ExposureSeries(std::vector<ExposureEntry> entries);

    const std::vector<ExposureEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Throws CalibrationError unless the series has at least `min_entries`
    /// frames spanning `min_decades` decades of exposure time.
    void require_coverage(std::size_t min_entries = 8, double min_decades = 2.0) const;

private:
    std::vector<ExposureEntry> entries_;
};

struct RadiometricSample {
    double exposure = 0.0;   // seconds
    double mean = 0.0;       // mean SVE value over the ROI, DN
    Provenance tier = Provenance::main;  // majority tier in the ROI
    double purity = 1.0;     // share of ROI pixels in `tier`

    bool operator==(const RadiometricSample&) const = default;
};

struct RadiometricFunction {
    std::vector<RadiometricSample> samples;
    std::vector<double> excluded_exposures;  // dropped for > 50% unrecoverable pixels
    std::vector<std::string> warnings;
};

/// Default ROI side, in quad pixels.
inline constexpr int kDefaultRoiSide = 256;

/// Decomposes and merges every frame and averages the SVE value over `roi`
/// (quad coordinates; a centred 256x256 square when absent), ignoring
/// unrecoverable pixels. Throws InvalidArgument on an empty series or a ROI
/// that does not fit, CalibrationError when mean values fall by more than 0.5%.
RadiometricFunction measure_radiometric(const ExposureSeries& series, std::optional<Rect> roi,
                                        const CfaLayout& layout, const PixelRoles& roles, int eol,
                                        GreenPolicy green_policy = GreenPolicy::average);

/// Samples with mean < margin * eol are linear. Throws CalibrationError
/// ("insufficient coverage") when either side has fewer than 3 samples.
std::pair<std::vector<RadiometricSample>, std::vector<RadiometricSample>> split_linear_region(
    const RadiometricFunction& rf, int eol, double margin = 0.9);

struct LinearModel {
    double a = 0.0;  // DN per second
    double b = 0.0;  // DN
    double residual_rms = 0.0;

    double operator()(double t) const { return a * t + b; }
    bool operator==(const LinearModel& o) const { return a == o.a && b == o.b; }
};

inline constexpr double kDefaultInterceptMax = 2.0;

/// Least-squares line through (exposure, mean) with the intercept boxed into
/// [0, b_max]; an intercept that is zero up to round-off is reported as 0.
LinearModel fit_linear(std::span<const RadiometricSample> samples, double b_max = kDefaultInterceptMax);

struct PolyModelFit {
    Polynomial poly;  // f(T), physical units, domain = fitted exposure range
    double rms = 0.0;
    bool monotone = false;  // positive and non-decreasing over the domain
};

/// Least-squares f(T) = sum p_n T^n of order `order` (>= 2) through the samples.
PolyModelFit fit_poly(std::span<const RadiometricSample> samples, int order);

struct AlphaSample {
    double exposure = 0.0;
    double alpha = 0.0;
    bool operator==(const AlphaSample&) const = default;
};

/// alpha(T) = (aT + b) / f(T) on each grid point. Throws InvalidArgument when a
/// point lies outside the polynomial domain and CalibrationError when f <= 0.
std::vector<AlphaSample> compute_correction(const LinearModel& lin, const Polynomial& poly,
                                            std::span<const double> exposure_grid);

/// Least-squares alpha(v) of order `order` through (f(T_k), alpha_k); the
/// domain is the range of f(T_k).
Polynomial fit_alpha_of_value(std::span<const AlphaSample> alpha_samples, const Polynomial& poly,
                              int order);

/// Correction for one non-linear tier.
struct CorrectionSegment {
    Provenance tier = Provenance::extra1;
    Polynomial response;        // f(T) restricted to this tier
    Polynomial alpha_of_value;  // alpha(v), domain in SVE value
    std::vector<AlphaSample> alpha_samples;

    double linearize(double v) const { return alpha_of_value(v) * v; }
    bool operator==(const CorrectionSegment&) const = default;
};

inline constexpr int kProfileVersion = 1;

struct CorrectionProfile {
    int eol = kDefaultEol;
    PixelRoles roles;
    LinearModel linear;
    std::vector<CorrectionSegment> segments;  // ordered by tier

    const CorrectionSegment* segment(Provenance tier) const;
    /// Throws InvalidArgument describing the first broken invariant.
    void validate() const;
    bool operator==(const CorrectionProfile&) const = default;
};

enum class AlphaGrid { dense, measured };

AlphaGrid alpha_grid_from_string(std::string_view s);

struct CalibrationOptions {
    int poly_order = 7;
    int alpha_order = 7;
    double linear_margin = 0.9;
    double intercept_max = kDefaultInterceptMax;
    AlphaGrid alpha_grid = AlphaGrid::dense;
    int dense_grid_points = 64;
    double min_tier_purity = 0.95;
};

struct SegmentDiagnostics {
    Provenance tier = Provenance::extra1;
    std::size_t samples = 0;
    int poly_order = 0;
    double poly_rms = 0.0;
    int alpha_order = 0;
};

struct CalibrationResult {
    CorrectionProfile profile;
    std::vector<SegmentDiagnostics> diagnostics;
    std::vector<std::string> warnings;
};

/// Full fit from a measured radiometric function. Tiers with fewer than four
/// clean samples get no segment (with a warning); no segment at all is a
/// CalibrationError.
CalibrationResult calibrate(const RadiometricFunction& rf, const PixelRoles& roles, int eol,
                            const CalibrationOptions& options = {});

}  // namespace svehdr
