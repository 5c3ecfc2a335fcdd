#include "svehdr/cfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace svehdr {

char to_char(Channel c) {
    switch (c) {
        case Channel::R: return 'R';
        case Channel::G: return 'G';
        case Channel::B: return 'B';
    }
    return '?';
}

Channel channel_from_char(char c) {
    switch (c) {
        case 'R': case 'r': return Channel::R;
        case 'G': case 'g': return Channel::G;
        case 'B': case 'b': return Channel::B;
        default: throw InvalidArgument(std::string("unknown channel label '") + c + "'");
    }
}

RawFrame::RawFrame(int width, int height, int bit_depth, std::vector<std::uint16_t> samples,
                   std::optional<double> exposure_time)
    : bit_depth_(bit_depth) {
    if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0)
        throw InvalidArgument("raw frame dimensions must be positive and even");
    if (bit_depth < 1 || bit_depth > 16) throw InvalidArgument("bit depth must be in 1..16");
    if (samples.size() != static_cast<std::size_t>(width) * height)
        throw InvalidArgument("sample count does not match frame dimensions");
    const auto limit = static_cast<std::uint16_t>((1u << bit_depth) - 1u);
    if (std::any_of(samples.begin(), samples.end(), [&](std::uint16_t s) { return s > limit; }))
        throw InvalidArgument("sample exceeds 2^bit_depth - 1");
    samples_ = Plane<std::uint16_t>(width, height);
    std::copy(samples.begin(), samples.end(), samples_.pixels().begin());
    set_exposure_time(exposure_time);
}

void RawFrame::set_exposure_time(std::optional<double> t) {
    if (t && !(*t > 0.0 && std::isfinite(*t))) throw InvalidArgument("exposure time must be > 0");
    exposure_time_ = t;
}

CfaLayout::CfaLayout() : CfaLayout({Channel::R, Channel::G, Channel::G, Channel::B}) {}

CfaLayout::CfaLayout(std::array<Channel, 4> pattern) : pattern_(pattern) {
    const auto count = [&](Channel c) { return std::count(pattern_.begin(), pattern_.end(), c); };
    if (count(Channel::R) != 1 || count(Channel::B) != 1 || count(Channel::G) != 2)
        throw InvalidArgument("CFA quad must contain one R, one B and two G");
}

CfaLayout CfaLayout::parse(std::string_view pattern) {
    if (pattern.size() != 4) throw InvalidArgument("CFA pattern must have four letters");
    std::array<Channel, 4> p{};
    for (std::size_t i = 0; i < 4; ++i) p[i] = channel_from_char(pattern[i]);
    return CfaLayout(p);
}

std::string CfaLayout::to_string() const {
    std::string s;
    for (Channel c : pattern_) s.push_back(to_char(c));
    return s;
}

void PixelRoles::validate() const {
    if (main == extra1 || main == extra2 || extra1 == extra2)
        throw InvalidArgument("pixel roles must use three distinct channels");
    if (e1 != 1.0) throw InvalidArgument("main transmittance e1 must be exactly 1");
    if (!(e1 > e2 && e2 > e3 && e3 > 0.0))
        throw InvalidArgument("transmittances must satisfy e1 > e2 > e3 > 0");
}

double PixelRoles::transmittance(Channel c) const {
    if (c == main) return e1;
    if (c == extra1) return e2;
    return e3;
}

Channel PixelRoles::channel(int tier) const {
    switch (tier) {
        case 0: return main;
        case 1: return extra1;
        case 2: return extra2;
        default: throw InvalidArgument("tier must be 0, 1 or 2");
    }
}

double PixelRoles::tier_transmittance(int tier) const {
    switch (tier) {
        case 0: return e1;
        case 1: return e2;
        case 2: return e3;
        default: throw InvalidArgument("tier must be 0, 1 or 2");
    }
}

const std::vector<PixelRoles>& default_roles_table() {
    static const std::vector<PixelRoles> table = {
        {625.0, Channel::R, Channel::G, Channel::B, 1.00, 0.20, 0.09},
        {520.0, Channel::G, Channel::B, Channel::R, 1.00, 0.33, 0.15},
        {470.0, Channel::B, Channel::G, Channel::R, 1.00, 0.45, 0.08},
    };
    return table;
}

PixelRoles roles_for_wavelength(double lambda_nm, std::span<const PixelRoles> table) {
    if (table.empty()) throw InvalidArgument("illuminant table is empty");
    const PixelRoles* best = nullptr;
    double best_distance = std::numeric_limits<double>::infinity();
    for (const auto& entry : table) {
        const double d = std::abs(entry.lambda_nm - lambda_nm);
        if (d < best_distance) {
            best_distance = d;
            best = &entry;
        }
    }
    if (!(best_distance <= kWavelengthTolerance))
        throw InvalidArgument("unknown illuminant: no entry within 50 nm of " + std::to_string(lambda_nm) + " nm");
    return *best;
}

GreenPolicy green_policy_from_string(std::string_view s) {
    if (s == "average") return GreenPolicy::average;
    if (s == "first") return GreenPolicy::first;
    if (s == "second") return GreenPolicy::second;
    throw InvalidArgument("green policy must be average, first or second");
}

std::string_view to_string(GreenPolicy p) {
    switch (p) {
        case GreenPolicy::average: return "average";
        case GreenPolicy::first: return "first";
        case GreenPolicy::second: return "second";
    }
    return "average";
}

const Plane<std::uint16_t>& QuadPlanes::tier(int t) const {
    switch (t) {
        case 0: return main;
        case 1: return extra1;
        case 2: return extra2;
        default: throw InvalidArgument("tier must be 0, 1 or 2");
    }
}

namespace {

struct SiteOffsets {
    // Up to two (dx, dy) offsets inside the quad.
    std::array<std::array<int, 2>, 2> offsets{};
    int count = 0;
};

SiteOffsets sites_of(const CfaLayout& layout, Channel c) {
    SiteOffsets s;
    for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 2; ++dx)
            if (layout.at(dx, dy) == c) s.offsets[static_cast<std::size_t>(s.count++)] = {dx, dy};
    return s;
}

Plane<std::uint16_t> extract(const RawFrame& frame, const SiteOffsets& sites, GreenPolicy policy) {
    const int qw = frame.width() / 2;
    const int qh = frame.height() / 2;
    Plane<std::uint16_t> out(qw, qh);
    const auto& a = sites.offsets[0];
    const auto& b = sites.offsets[1];
    for (int y = 0; y < qh; ++y) {
        auto dst = out.row(y);
        for (int x = 0; x < qw; ++x) {
            const std::uint16_t first = frame(2 * x + a[0], 2 * y + a[1]);
            if (sites.count == 1) {
                dst[static_cast<std::size_t>(x)] = first;
                continue;
            }
            const std::uint16_t second = frame(2 * x + b[0], 2 * y + b[1]);
            switch (policy) {
                case GreenPolicy::first: dst[static_cast<std::size_t>(x)] = first; break;
                case GreenPolicy::second: dst[static_cast<std::size_t>(x)] = second; break;
                case GreenPolicy::average:
                    dst[static_cast<std::size_t>(x)] =
                        static_cast<std::uint16_t>((static_cast<unsigned>(first) + second + 1u) / 2u);
                    break;
            }
        }
    }
    return out;
}

}  // namespace

QuadPlanes decompose(const RawFrame& frame, const CfaLayout& layout, const PixelRoles& roles,
                     GreenPolicy green_policy) {
    roles.validate();
    if (frame.width() % 2 != 0 || frame.height() % 2 != 0 || frame.width() == 0)
        throw InvalidArgument("frame dimensions must be positive and even");
    QuadPlanes planes;
    planes.bit_depth = frame.bit_depth();
    planes.main = extract(frame, sites_of(layout, roles.main), green_policy);
    planes.extra1 = extract(frame, sites_of(layout, roles.extra1), green_policy);
    planes.extra2 = extract(frame, sites_of(layout, roles.extra2), green_policy);
    return planes;
}

}  // namespace svehdr
