#include "svehdr/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace svehdr {

double nrms(const LinearHdrImage& reconstructed, const LinearHdrImage& reference, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("scale must be positive");
    if (!reconstructed.values.same_shape(reference.values))
        throw InvalidArgument("reconstructed and reference images differ in dimensions");

    const auto r = reconstructed.values.pixels();
    const auto o = reference.values.pixels();
    const auto rv = reconstructed.valid.pixels();
    const auto ov = reference.valid.pixels();
    double sq = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    long long n = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!rv[i] || !ov[i]) continue;
        const double ref = o[i];
        const double d = r[i] / scale - ref;
        sq += d * d;
        lo = std::min(lo, ref);
        hi = std::max(hi, ref);
        ++n;
    }
    if (n == 0) throw InvalidArgument("no pixel is valid in both images");
    if (!(hi > lo)) throw InvalidArgument("reference image is constant over the joint-valid pixels");
    return std::sqrt(sq / static_cast<double>(n)) / (hi - lo);
}

HalftoneReport halftone_stability(const LinearHdrImage& img, std::span<const Rect> regions, int white_index) {
    if (regions.empty()) throw InvalidArgument("no halftone regions given");
    if (white_index < 0 || static_cast<std::size_t>(white_index) >= regions.size())
        throw InvalidArgument("white region index out of range");

    HalftoneReport report;
    report.white_index = white_index;
    report.regions.assign(regions.begin(), regions.end());
    for (std::size_t k = 0; k < regions.size(); ++k) {
        const Rect& r = regions[k];
        if (r.empty() || !r.fits_in(img.width(), img.height()))
            throw InvalidArgument("halftone region " + std::to_string(k) + " lies outside the image");
        double sum = 0.0;
        long long n = 0;
        for (int y = r.y; y < r.y + r.height; ++y)
            for (int x = r.x; x < r.x + r.width; ++x)
                if (img.is_valid(x, y)) {
                    sum += img.values(x, y);
                    ++n;
                }
        if (n == 0) throw InvalidArgument("halftone region " + std::to_string(k) + " has no valid pixels");
        report.region_means.push_back(sum / static_cast<double>(n));
    }
    const double white = report.region_means[static_cast<std::size_t>(white_index)];
    if (!(white > 0.0)) throw InvalidArgument("white region mean is not positive");
    for (double m : report.region_means) report.ratios.push_back(m / white);
    return report;
}

EvaluationRecord evaluate_run(const LinearHdrImage& reconstructed, const LinearHdrImage& reference,
                              const SveImage& sve, std::span<const Rect> regions, double scale, double exposure,
                              const EvaluationOptions& options) {
    if (!reconstructed.values.same_shape(sve.values))
        throw InvalidArgument("SVE image and reconstruction differ in dimensions");
    EvaluationRecord rec;
    rec.exposure = exposure;
    rec.nrms = nrms(reconstructed, reference, scale);
    rec.dynamic_range_db = dynamic_range_db(reconstructed, options.noise_floor);
    rec.usage = usage_fractions(sve);
    rec.halftone = halftone_stability(reconstructed, regions, options.white_index);
    return rec;
}

std::string evaluation_csv_header(std::size_t halftone_count) {
    std::string s = "exposure_s,dr_db,nrms,main_frac,extra1_frac,extra2_frac,unrec_frac";
    for (std::size_t k = 1; k <= halftone_count; ++k) s += fmt::format(",h{}", k);
    return s;
}

std::string evaluation_csv_row(const EvaluationRecord& r) {
    std::string s = fmt::format("{},{},{},{},{},{},{}", r.exposure, r.dynamic_range_db, r.nrms, r.usage.main,
                                r.usage.extra1, r.usage.extra2, r.usage.unrecoverable);
    for (double h : r.halftone.ratios) s += fmt::format(",{}", h);
    return s;
}

}  // namespace svehdr
