#pragma once

#include <cstdint>
#include <optional>

#include "svehdr/cfa.hpp"
#include "svehdr/plane.hpp"

namespace svehdr {

/// Which tier of the quad supplied an SVE value.
enum class Provenance : std::uint8_t { main = 0, extra1 = 1, extra2 = 2, unrecoverable = 3 };

const char* to_string(Provenance p);

/// Extended-range, non-linear merge of the three role planes.
///
/// Values live in [0, 3*eol]: tier t contributes t*eol + I_t, and a quad with
/// every tier at or above eol is clamped to 3*eol and flagged unrecoverable.
/// The tier is therefore a pure function of the value (see provenance_of).
struct SveImage {
    Plane<std::uint16_t> values;
    Plane<Provenance> provenance;
    int eol = 0;

    int width() const { return values.width(); }
    int height() const { return values.height(); }
};

/// Tier implied by an extended value under the merge rule.
constexpr Provenance provenance_of(std::uint32_t value, std::uint32_t eol) {
    if (value < eol) return Provenance::main;
    if (value < 2 * eol) return Provenance::extra1;
    if (value < 3 * eol) return Provenance::extra2;
    return Provenance::unrecoverable;
}

inline constexpr int kDefaultEol = 3400;

/// Merges the planes with the end-of-linearity threshold:
/// main if I_main < eol, else eol + I_1 if I_1 < eol, else 2*eol + I_2 if
/// I_2 < eol, else 3*eol (unrecoverable).
SveImage construct(const QuadPlanes& planes, int eol = kDefaultEol);

/// Rebuilds an SveImage from its value plane alone.
SveImage sve_from_values(Plane<std::uint16_t> values, int eol);

struct UsageFractions {
    double main = 0.0;
    double extra1 = 0.0;
    double extra2 = 0.0;
    double unrecoverable = 0.0;
};

/// Share of pixels per tier over `roi` (whole image when absent).
UsageFractions usage_fractions(const SveImage& sve, std::optional<Rect> roi = std::nullopt);

}  // namespace svehdr
