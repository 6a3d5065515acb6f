#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <fpa/errors.hpp>
#include <fpa/plane.hpp>

namespace fpa {

/// Smallest permitted filter entry. Bounds the gain of deconvolution at 1e4.
inline constexpr double kMinFilterValue = 1e-4;

/// Filters smaller than this degenerate to a nearly constant response and the
/// scheme stops being meaningful.
inline constexpr int kMinFilterSide = 8;

/// Frequency-domain filter, stored center-shifted: the zero-frequency entry
/// sits at (height/2, width/2) and equals 1 unless a key modification
/// overwrote it. Entries are positive and never exceed 1.
class FrequencyFilter {
public:
    FrequencyFilter(RealPlane values, double sigma_prime)
        : values_(std::move(values)), sigma_prime_(sigma_prime) {
        min_value_ = values_.at(0, 0);
        for (int r = 0; r < values_.height(); ++r) {
            for (int c = 0; c < values_.width(); ++c) {
                double& v = values_.at(r, c);
                if (!std::isfinite(v) || v <= 0.0) {
                    throw ParameterError("filter entry at (" + std::to_string(r) + "," +
                                         std::to_string(c) + ") is not positive");
                }
                if (v > 1.0) {
                    if (v > 1.0 + 1e-12) {
                        throw ParameterError("filter entry at (" + std::to_string(r) + "," +
                                             std::to_string(c) + ") exceeds 1");
                    }
                    v = 1.0;  // forward-transform rounding fuzz on the peak
                }
                min_value_ = std::min(min_value_, v);
            }
        }
    }

    int height() const { return values_.height(); }
    int width() const { return values_.width(); }
    double at(int r, int c) const { return values_.at(r, c); }
    const RealPlane& values() const { return values_; }
    double min_value() const { return min_value_; }

    /// Standard deviation the filter was built with; 0 for filters sampled
    /// from a spatial kernel.
    double sigma_prime() const { return sigma_prime_; }

    int center_row() const { return values_.height() / 2; }
    int center_col() const { return values_.width() / 2; }

private:
    RealPlane values_;
    double sigma_prime_;
    double min_value_;
};

}  // namespace fpa
