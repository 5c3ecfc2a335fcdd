#include "svehdr/linearize.hpp"

#include <algorithm>
#include <cmath>

namespace svehdr {

long long LinearHdrImage::valid_count() const {
    const auto v = valid.pixels();
    return std::count_if(v.begin(), v.end(), [](std::uint8_t b) { return b != 0; });
}

DomainPolicy domain_policy_from_string(std::string_view s) {
    if (s == "clamp") return DomainPolicy::clamp;
    if (s == "invalidate") return DomainPolicy::invalidate;
    throw InvalidArgument("domain policy must be clamp or invalidate");
}

namespace {

// Lowest output a tier may produce: the top of every calibrated range below it.
double tier_floor(Provenance tier, const CorrectionProfile& profile) {
    double floor = profile.eol;
    for (const auto& s : profile.segments)
        if (s.tier < tier) floor = std::max(floor, s.linearize(s.alpha_of_value.domain_hi));
    return floor;
}

}  // namespace

std::optional<double> linearize_value(std::uint32_t v, Provenance tier, const CorrectionProfile& profile,
                                      DomainPolicy policy) {
    if (tier == Provenance::unrecoverable) return std::nullopt;
    if (tier == Provenance::main) return static_cast<double>(v);

    const CorrectionSegment* seg = profile.segment(tier);
    if (seg == nullptr) {
        if (policy == DomainPolicy::invalidate) return std::nullopt;
        return tier_floor(tier, profile);
    }
    const Polynomial& alpha = seg->alpha_of_value;
    double x = v;
    if (x < alpha.domain_lo || x > alpha.domain_hi) {
        if (policy == DomainPolicy::invalidate) return std::nullopt;
        x = std::clamp(x, alpha.domain_lo, alpha.domain_hi);
    }
    const double out = std::clamp(seg->linearize(x), seg->linearize(alpha.domain_lo), seg->linearize(alpha.domain_hi));
    return std::max(out, tier_floor(tier, profile));
}

LinearHdrImage linearize(const SveImage& sve, const CorrectionProfile& profile, DomainPolicy policy) {
    if (sve.eol != profile.eol)
        throw ProfileMismatch("image eol " + std::to_string(sve.eol) + " differs from profile eol " +
                              std::to_string(profile.eol));
    LinearHdrImage out(sve.width(), sve.height());
    const auto v = sve.values.pixels();
    const auto p = sve.provenance.pixels();
    auto dst = out.values.pixels();
    auto ok = out.valid.pixels();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (auto value = linearize_value(v[i], p[i], profile, policy)) {
            dst[i] = static_cast<float>(*value);
            ok[i] = 1;
        }
    }
    return out;
}

LinearHdrImage linear_from_plane(const Plane<std::uint16_t>& plane) {
    LinearHdrImage out(plane.width(), plane.height());
    const auto src = plane.pixels();
    auto dst = out.values.pixels();
    std::transform(src.begin(), src.end(), dst.begin(), [](std::uint16_t s) { return static_cast<float>(s); });
    std::fill(out.valid.pixels().begin(), out.valid.pixels().end(), std::uint8_t{1});
    return out;
}

double dynamic_range_db(const LinearHdrImage& img, double noise_floor, std::optional<Rect> roi) {
    if (!(noise_floor > 0.0)) throw InvalidArgument("noise floor must be positive");
    const Rect r = roi.value_or(Rect{0, 0, img.width(), img.height()});
    if (!r.fits_in(img.width(), img.height())) throw InvalidArgument("region lies outside the image");
    double peak = -1.0;
    for (int y = r.y; y < r.y + r.height; ++y)
        for (int x = r.x; x < r.x + r.width; ++x)
            if (img.is_valid(x, y)) peak = std::max(peak, static_cast<double>(img.values(x, y)));
    if (peak < 0.0) throw InvalidArgument("image has no valid pixels");
    return 20.0 * std::log10(peak / noise_floor);
}

}  // namespace svehdr
