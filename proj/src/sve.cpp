#include "svehdr/sve.hpp"

#include <array>

namespace svehdr {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::main: return "MAIN";
        case Provenance::extra1: return "EXTRA1";
        case Provenance::extra2: return "EXTRA2";
        case Provenance::unrecoverable: return "UNRECOVERABLE";
    }
    return "?";
}

SveImage construct(const QuadPlanes& planes, int eol) {
    const int max_dn = (1 << planes.bit_depth) - 1;
    if (eol <= 0 || eol > max_dn) throw InvalidArgument("eol must be in (0, 2^bit_depth - 1]");
    if (!planes.main.same_shape(planes.extra1) || !planes.main.same_shape(planes.extra2))
        throw InvalidArgument("quad planes differ in dimensions");
    if (3 * eol > 0xFFFF) throw InvalidArgument("eol too large for 16-bit extended values");

    const int w = planes.width();
    const int h = planes.height();
    SveImage out{Plane<std::uint16_t>(w, h), Plane<Provenance>(w, h), eol};
    const auto threshold = static_cast<std::uint16_t>(eol);

    const auto m = planes.main.pixels();
    const auto a = planes.extra1.pixels();
    const auto b = planes.extra2.pixels();
    auto v = out.values.pixels();
    auto p = out.provenance.pixels();
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < threshold) {
            v[i] = m[i];
            p[i] = Provenance::main;
        } else if (a[i] < threshold) {
            v[i] = static_cast<std::uint16_t>(eol + a[i]);
            p[i] = Provenance::extra1;
        } else if (b[i] < threshold) {
            v[i] = static_cast<std::uint16_t>(2 * eol + b[i]);
            p[i] = Provenance::extra2;
        } else {
            v[i] = static_cast<std::uint16_t>(3 * eol);
            p[i] = Provenance::unrecoverable;
        }
    }
    return out;
}

SveImage sve_from_values(Plane<std::uint16_t> values, int eol) {
    if (eol <= 0 || 3 * eol > 0xFFFF) throw InvalidArgument("eol out of range");
    SveImage out{std::move(values), Plane<Provenance>(), eol};
    out.provenance = Plane<Provenance>(out.values.width(), out.values.height());
    const auto v = out.values.pixels();
    auto p = out.provenance.pixels();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] > 3 * eol) throw InvalidArgument("SVE value exceeds 3*eol");
        p[i] = provenance_of(v[i], static_cast<std::uint32_t>(eol));
    }
    return out;
}

UsageFractions usage_fractions(const SveImage& sve, std::optional<Rect> roi) {
    const Rect r = roi.value_or(Rect{0, 0, sve.width(), sve.height()});
    if (r.empty()) throw InvalidArgument("usage fractions need a non-empty region");
    if (!r.fits_in(sve.width(), sve.height())) throw InvalidArgument("region lies outside the image");

    std::array<long long, 4> counts{};
    for (int y = r.y; y < r.y + r.height; ++y)
        for (int x = r.x; x < r.x + r.width; ++x)
            ++counts[static_cast<std::size_t>(sve.provenance(x, y))];
    const auto total = static_cast<double>(r.area());
    return {counts[0] / total, counts[1] / total, counts[2] / total, counts[3] / total};
}

}  // namespace svehdr
