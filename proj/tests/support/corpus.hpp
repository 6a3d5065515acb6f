#pragma once

// Deterministic test images: uniform noise planes and structured scenes with
// smooth shading, soft-edged shapes and mild texture.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <fpa/plane.hpp>
#include <fpa/rng.hpp>

namespace corpus {

inline fpa::Image random_image(int height, int width, int lo, int hi, std::uint64_t seed) {
    fpa::Rng rng(seed);
    fpa::Image img(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            img.at(r, c) = static_cast<std::int32_t>(rng.uniform_int(lo, hi));
        }
    }
    return img;
}

inline fpa::RealPlane random_plane(int height, int width, double lo, double hi,
                                   std::uint64_t seed) {
    fpa::Rng rng(seed);
    fpa::RealPlane p(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            p.at(r, c) = lo + (hi - lo) * rng.uniform01();
        }
    }
    return p;
}

/// Photograph-like synthetic scene: low-frequency shading, a few soft-edged
/// ellipses and a band of texture, clamped to [lo, hi].
inline fpa::Image natural_image(int height, int width, std::uint64_t seed, int lo = 0,
                                int hi = 255) {
    fpa::Rng rng(seed);
    fpa::RealPlane field(height, width, 0.0);

    // background shading
    const double fy = rng.uniform01() * 2.0 + 0.5;
    const double fx = rng.uniform01() * 2.0 + 0.5;
    const double phase_y = rng.uniform01() * 2.0 * std::numbers::pi;
    const double phase_x = rng.uniform01() * 2.0 * std::numbers::pi;
    const double base = 90.0 + rng.uniform01() * 70.0;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            field.at(r, c) = base +
                             45.0 * std::sin(2.0 * std::numbers::pi * fy * r / height + phase_y) +
                             35.0 * std::cos(2.0 * std::numbers::pi * fx * c / width + phase_x);
        }
    }

    // soft-edged ellipses
    const int shapes = 3 + static_cast<int>(rng.uniform_int(0, 2));
    for (int i = 0; i < shapes; ++i) {
        const double cy = rng.uniform01() * height;
        const double cx = rng.uniform01() * width;
        const double ry = 3.0 + rng.uniform01() * height / 4.0;
        const double rx = 3.0 + rng.uniform01() * width / 4.0;
        const double amp = (rng.uniform01() - 0.5) * 160.0;
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                const double dy = (r - cy) / ry;
                const double dx = (c - cx) / rx;
                const double d = dy * dy + dx * dx;
                field.at(r, c) += amp / (1.0 + std::exp(8.0 * (d - 1.0)));
            }
        }
    }

    // mild texture
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            field.at(r, c) += 3.0 * rng.gaussian();
        }
    }

    fpa::Image img(height, width);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            img.at(r, c) = static_cast<std::int32_t>(std::clamp(
                static_cast<long long>(std::llround(field.at(r, c))), static_cast<long long>(lo),
                static_cast<long long>(hi)));
        }
    }
    return img;
}

}  // namespace corpus
