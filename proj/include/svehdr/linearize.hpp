#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "svehdr/calib.hpp"
#include "svehdr/sve.hpp"

namespace svehdr {

/// Values proportional to scene irradiance, in main-channel DN.
struct LinearHdrImage {
    Plane<float> values;
    Plane<std::uint8_t> valid;  // 1 where values holds a usable sample

    LinearHdrImage() = default;
    LinearHdrImage(int width, int height) : values(width, height, 0.0f), valid(width, height, 0) {}

    int width() const { return values.width(); }
    int height() const { return values.height(); }
    bool is_valid(int x, int y) const { return valid(x, y) != 0; }
    long long valid_count() const;

    bool operator==(const LinearHdrImage&) const = default;
};

enum class DomainPolicy { clamp, invalidate };

DomainPolicy domain_policy_from_string(std::string_view s);

/// Linearized value of one SVE sample, or nullopt when it has to be marked
/// invalid. Main-tier values are already linear (alpha = 1). Values of a
/// non-linear tier use that tier's alpha(v); outside its domain they are
/// clamped to the domain edge or rejected. A tier never maps below the top of
/// the calibrated ranges beneath it (at least eol), which keeps the result
/// monotone in v across tier boundaries; a tier without a segment maps to that
/// floor under `clamp`.
std::optional<double> linearize_value(std::uint32_t v, Provenance tier, const CorrectionProfile& profile,
                                      DomainPolicy policy = DomainPolicy::clamp);

/// Applies the profile pixel by pixel. Throws ProfileMismatch when the image
/// and profile disagree on eol.
LinearHdrImage linearize(const SveImage& sve, const CorrectionProfile& profile,
                         DomainPolicy policy = DomainPolicy::clamp);

/// Wraps a main-tier plane (no correction) as a linear image, e.g. to serve as
/// a reference.
LinearHdrImage linear_from_plane(const Plane<std::uint16_t>& plane);

/// 20*log10(max valid value / noise_floor), optionally over a region.
double dynamic_range_db(const LinearHdrImage& img, double noise_floor = 1.0,
                        std::optional<Rect> roi = std::nullopt);

}  // namespace svehdr
