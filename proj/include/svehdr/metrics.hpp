#pragma once

#include <span>
#include <string>
#include <vector>

#include "svehdr/linearize.hpp"
#include "svehdr/sve.hpp"

namespace svehdr {

/// Normalized RMS difference between a reconstruction and a reference.
///
/// NRMS = sqrt(mean((R / scale - O)^2)) / (max(O) - min(O)) over pixels valid
/// in both images, where `scale` is the exposure ratio between the captures.
/// The normalization uses the reference range only, so the metric is not
/// symmetric in R and O.
double nrms(const LinearHdrImage& reconstructed, const LinearHdrImage& reference, double scale);

struct HalftoneReport {
    std::vector<double> region_means;
    std::vector<double> ratios;  // region mean / white region mean
    std::vector<Rect> regions;
    int white_index = 0;
};

/// Mean of each region over valid pixels and its ratio to the region at
/// `white_index`. Throws InvalidArgument naming any region that lies outside
/// the image or has no valid pixel.
HalftoneReport halftone_stability(const LinearHdrImage& img, std::span<const Rect> regions, int white_index = 0);

struct EvaluationRecord {
    double exposure = 0.0;
    double nrms = 0.0;
    double dynamic_range_db = 0.0;
    UsageFractions usage;
    HalftoneReport halftone;
};

struct EvaluationOptions {
    double noise_floor = 1.0;
    int white_index = 0;
};

/// Bundles NRMS, dynamic range, tier usage and halftone ratios for one capture.
EvaluationRecord evaluate_run(const LinearHdrImage& reconstructed, const LinearHdrImage& reference,
                              const SveImage& sve, std::span<const Rect> regions, double scale,
                              double exposure = 0.0, const EvaluationOptions& options = {});

/// `exposure_s,dr_db,nrms,main_frac,extra1_frac,extra2_frac,unrec_frac,h1..hK`
std::string evaluation_csv_header(std::size_t halftone_count);
std::string evaluation_csv_row(const EvaluationRecord& record);

}  // namespace svehdr
