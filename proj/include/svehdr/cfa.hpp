#pragma once

// Bayer mosaic seen as an array of neutral-density filters under narrow-band
// illumination, and its split into main / first-extra / second-extra planes.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "svehdr/plane.hpp"

namespace svehdr {

enum class Channel : std::uint8_t { R, G, B };

char to_char(Channel c);
Channel channel_from_char(char c);

/// One Bayer exposure. Samples are raw DN, row-major, full sensor resolution.
class RawFrame {
public:
    RawFrame() = default;
    RawFrame(int width, int height, int bit_depth, std::vector<std::uint16_t> samples,
             std::optional<double> exposure_time = std::nullopt);

    int width() const { return samples_.width(); }
    int height() const { return samples_.height(); }
    int bit_depth() const { return bit_depth_; }
    std::uint16_t max_value() const { return static_cast<std::uint16_t>((1u << bit_depth_) - 1u); }
    std::optional<double> exposure_time() const { return exposure_time_; }
    void set_exposure_time(std::optional<double> t);

    std::uint16_t operator()(int x, int y) const { return samples_(x, y); }
    const Plane<std::uint16_t>& samples() const { return samples_; }

    bool operator==(const RawFrame&) const = default;

private:
    Plane<std::uint16_t> samples_;
    int bit_depth_ = 12;
    std::optional<double> exposure_time_;
};

/// 2x2 colour filter arrangement, row-major: [top-left, top-right, bottom-left, bottom-right].
class CfaLayout {
public:
    /// RGGB.
    CfaLayout();
    explicit CfaLayout(std::array<Channel, 4> pattern);
    /// Parses a four-letter pattern such as "RGGB" or "GBRG".
    static CfaLayout parse(std::string_view pattern);

    Channel at(int dx, int dy) const { return pattern_[static_cast<std::size_t>(dy * 2 + dx)]; }
    const std::array<Channel, 4>& pattern() const { return pattern_; }
    std::string to_string() const;

    bool operator==(const CfaLayout&) const = default;

private:
    std::array<Channel, 4> pattern_;
};

/// Which channel acts as main / first extra / second extra for one illuminant,
/// with the relative transmittance of each filter to that light.
struct PixelRoles {
    double lambda_nm = 0.0;
    Channel main = Channel::R;
    Channel extra1 = Channel::G;
    Channel extra2 = Channel::B;
    double e1 = 1.0;
    double e2 = 0.0;
    double e3 = 0.0;

    /// Throws InvalidArgument unless e1 == 1 > e2 > e3 > 0 and the channels are distinct.
    void validate() const;
    /// Transmittance of the filter over channel `c`.
    double transmittance(Channel c) const;
    /// Channel by tier index 0 (main), 1 (extra1), 2 (extra2).
    Channel channel(int tier) const;
    double tier_transmittance(int tier) const;

    bool operator==(const PixelRoles&) const = default;
};

/// Measured transmittances for red (625 nm), green (520 nm) and blue (470 nm) LEDs
/// through a consumer DSLR Bayer mosaic.
const std::vector<PixelRoles>& default_roles_table();

inline constexpr double kWavelengthTolerance = 50.0;

/// Entry of `table` with the nearest dominant wavelength. Throws InvalidArgument
/// ("unknown illuminant") when nothing lies within 50 nm.
PixelRoles roles_for_wavelength(double lambda_nm,
                                std::span<const PixelRoles> table = default_roles_table());

enum class GreenPolicy { average, first, second };

GreenPolicy green_policy_from_string(std::string_view s);
std::string_view to_string(GreenPolicy p);

/// Quad-resolution planes in role order.
struct QuadPlanes {
    Plane<std::uint16_t> main;
    Plane<std::uint16_t> extra1;
    Plane<std::uint16_t> extra2;
    int bit_depth = 12;

    int width() const { return main.width(); }
    int height() const { return main.height(); }
    const Plane<std::uint16_t>& tier(int t) const;
};

/// Splits a mosaic into one sample per 2x2 quad for each role. For a role
/// backed by green, the two G sites are combined according to `green_policy`
/// (average rounds half up); "first" is the G site earlier in raster order.
QuadPlanes decompose(const RawFrame& frame, const CfaLayout& layout, const PixelRoles& roles,
                     GreenPolicy green_policy = GreenPolicy::average);

}  // namespace svehdr
