#pragma once

// Synthetic Bayer camera under narrow-band light: every site integrates
// gain * transmittance * irradiance * T, optionally bends above EOL towards the
// ADC limit, picks up seeded noise and is quantized.

#include <cstdint>
#include <vector>

#include "svehdr/cfa.hpp"
#include "svehdr/plane.hpp"

namespace svehdr {

/// Relative irradiance at full sensor resolution.
struct Scene {
    Plane<double> irradiance;

    int width() const { return irradiance.width(); }
    int height() const { return irradiance.height(); }
};

struct SensorModel {
    double gain = 1000.0;  // DN per (irradiance unit * second) on an e = 1 site
    int eol = 3400;
    int bit_depth = 12;
    double read_noise_sigma = 0.0;  // DN
    bool shot_noise = false;        // Poisson, one electron per DN
    bool shoulder = false;
    std::uint64_t seed = 0;

    int adc_max() const { return (1 << bit_depth) - 1; }
    void validate() const;
};

/// Response of one site before noise and quantization.
double ideal_response(double electrons, const SensorModel& sensor);

/// Renders one mosaic frame. Noise is drawn from a generator seeded by
/// (sensor.seed, T), so a frame depends only on its inputs.
RawFrame expose(const Scene& scene, const SensorModel& sensor, const CfaLayout& layout, const PixelRoles& roles,
                double exposure);

Scene make_flatfield(double level, int width, int height);

struct TestChart {
    Scene scene;
    std::vector<Rect> regions;        // halftone regions, quad coordinates
    std::vector<double> step_levels;  // irradiance of each gradient step, brightest first
};

inline constexpr int kHalftoneRegionSide = 15;

/// Dark background carrying a gradient bar of `steps` geometric steps from 1
/// down to 1/contrast_ratio, and bar patterns of several periods at full
/// brightness. All features are aligned to 2x2 quads. Returns a 15x15 region
/// centred in each step. Throws InvalidArgument when the geometry does not fit.
TestChart make_test_chart(int width, int height, int steps = 8, double contrast_ratio = 128.0,
                          int region_side = kHalftoneRegionSide);

}  // namespace svehdr
