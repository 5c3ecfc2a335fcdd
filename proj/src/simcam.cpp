#include "svehdr/simcam.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <string>

namespace svehdr {

void SensorModel::validate() const {
    if (bit_depth < 1 || bit_depth > 16) throw InvalidArgument("sensor bit depth must be in 1..16");
    if (!(gain > 0.0) || !std::isfinite(gain)) throw InvalidArgument("sensor gain must be positive");
    if (eol <= 0 || eol > adc_max()) throw InvalidArgument("sensor eol must be in (0, adc_max]");
    if (!(read_noise_sigma >= 0.0)) throw InvalidArgument("read noise must be non-negative");
}

double ideal_response(double electrons, const SensorModel& sensor) {
    if (!sensor.shoulder || electrons <= sensor.eol) return electrons;
    const double headroom = sensor.adc_max() - sensor.eol;
    return sensor.eol + headroom * (1.0 - std::exp(-(electrons - sensor.eol) / headroom));
}

RawFrame expose(const Scene& scene, const SensorModel& sensor, const CfaLayout& layout, const PixelRoles& roles,
                double exposure) {
    sensor.validate();
    roles.validate();
    if (!(exposure > 0.0) || !std::isfinite(exposure)) throw InvalidArgument("exposure time must be positive");
    const int w = scene.width();
    const int h = scene.height();
    if (w <= 0 || h <= 0 || w % 2 != 0 || h % 2 != 0)
        throw InvalidArgument("scene dimensions must be positive and even");

    const auto t_bits = std::bit_cast<std::uint64_t>(exposure);
    std::seed_seq seq{static_cast<std::uint32_t>(sensor.seed), static_cast<std::uint32_t>(sensor.seed >> 32),
                      static_cast<std::uint32_t>(t_bits), static_cast<std::uint32_t>(t_bits >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> read_noise(0.0, sensor.read_noise_sigma);

    std::array<double, 4> transmittance{};
    for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx)
            transmittance[static_cast<std::size_t>(dy * 2 + dx)] = roles.transmittance(layout.at(dx, dy));

    const double adc_max = sensor.adc_max();
    std::vector<std::uint16_t> samples(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double e = scene.irradiance(x, y);
            double u = ideal_response(sensor.gain * transmittance[static_cast<std::size_t>((y % 2) * 2 + x % 2)] * e *
                                          exposure,
                                      sensor);
            if (sensor.shot_noise && u > 0.0) {
                std::poisson_distribution<long long> shot(u);
                u = static_cast<double>(shot(rng));
            }
            if (sensor.read_noise_sigma > 0.0) u += read_noise(rng);
            samples[static_cast<std::size_t>(y) * w + x] =
                static_cast<std::uint16_t>(std::clamp(std::round(u), 0.0, adc_max));
        }
    }
    return RawFrame(w, h, sensor.bit_depth, std::move(samples), exposure);
}

Scene make_flatfield(double level, int width, int height) {
    if (!(level >= 0.0) || !std::isfinite(level)) throw InvalidArgument("flat-field level must be >= 0");
    return Scene{Plane<double>(width, height, level)};
}

TestChart make_test_chart(int width, int height, int steps, double contrast_ratio, int region_side) {
    if (steps < 2) throw InvalidArgument("gradient bar needs at least 2 steps");
    if (!(contrast_ratio > 1.0) || !std::isfinite(contrast_ratio))
        throw InvalidArgument("contrast ratio must be > 1");
    if (region_side < 1) throw InvalidArgument("region side must be positive");
    if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0)
        throw InvalidArgument("chart dimensions must be positive and even");

    constexpr int margin = 8;
    const int bar_height = 2 * (region_side + 4);
    const int block = ((width - 2 * margin) / steps) & ~1;
    const int pattern_top = margin + bar_height + margin;
    const int pattern_bottom = height - margin;
    if (block / 2 < region_side + 2 || pattern_bottom - pattern_top < 16)
        throw InvalidArgument("chart " + std::to_string(width) + "x" + std::to_string(height) + " is too small for " +
                              std::to_string(steps) + " steps with " + std::to_string(region_side) +
                              "-pixel regions");

    TestChart chart;
    chart.scene.irradiance = Plane<double>(width, height, 0.0);
    auto& e = chart.scene.irradiance;

    for (int i = 0; i < steps; ++i) {
        const double level = std::pow(contrast_ratio, -static_cast<double>(i) / (steps - 1));
        chart.step_levels.push_back(level);
        const int x0 = margin + i * block;
        for (int y = margin; y < margin + bar_height; ++y)
            for (int x = x0; x < x0 + block; ++x) e(x, y) = level;
        chart.regions.push_back(Rect{x0 / 2 + (block / 2 - region_side) / 2,
                                     margin / 2 + (bar_height / 2 - region_side) / 2, region_side, region_side});
    }

    // Bar groups with stripe widths 2, 4, 8 and 16 pixels.
    const int group = ((width - 2 * margin) / 4) & ~1;
    for (int g = 0; g < 4; ++g) {
        const int stripe = 2 << g;
        const int x0 = margin + g * group;
        for (int x = x0; x < x0 + group; ++x) {
            if (((x - x0) / stripe) % 2 != 0) continue;
            for (int y = pattern_top; y < pattern_bottom; ++y) e(x, y) = 1.0;
        }
    }
    return chart;
}

}  // namespace svehdr
