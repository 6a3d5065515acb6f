#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <fpa/errors.hpp>
#include <fpa/plane.hpp>

namespace fpa {

/// Round half up: the unique integer n with x in [n, n+1) maps to n when the
/// fraction is below 0.5 and to n+1 otherwise, i.e. floor(x + 0.5). This is
/// deliberately not round-half-to-even; pixel quantization in this scheme
/// depends on the half-up tie rule for every real, negatives included.
inline std::int64_t round_half_up(double x) {
    if (!std::isfinite(x)) {
        throw NumericDomainError("round_half_up: non-finite input");
    }
    return static_cast<std::int64_t>(std::floor(x + 0.5));
}

/// Elementwise round_half_up. The result must stay inside the 16-bit working
/// range; values beyond it indicate a degenerate filter rather than a valid
/// intermediate image.
inline Image round_plane(const RealPlane& p) {
    Image out(p.height(), p.width());
    for (int r = 0; r < p.height(); ++r) {
        for (int c = 0; c < p.width(); ++c) {
            const std::int64_t v = round_half_up(p.at(r, c));
            if (v < -kWorkingMagnitude || v >= kWorkingMagnitude) {
                throw NumericDomainError("round_plane: value " + std::to_string(v) + " at (" +
                                         std::to_string(r) + "," + std::to_string(c) +
                                         ") exceeds the working range");
            }
            out.at(r, c) = static_cast<std::int32_t>(v);
        }
    }
    return out;
}

}  // namespace fpa
