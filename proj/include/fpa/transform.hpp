#pragma once

#include <cmath>
#include <string>
#include <utility>

#include <fpa/dft.hpp>
#include <fpa/errors.hpp>
#include <fpa/filter.hpp>
#include <fpa/plane.hpp>
#include <fpa/rounding.hpp>

namespace fpa {

/// Largest spatial standard deviation for which the fixed-point and
/// unit-step-distance guarantees of the scheme hold.
inline constexpr double kMaxSpatialSigma = 0.4246;

namespace detail {

/// Filter values mapped from the center-shifted layout onto the DFT's natural
/// DC-at-origin layout, averaged over each conjugate frequency pair.
///
/// Key modifications touch single entries, so a modified filter is not
/// centrally symmetric; multiplying a real image's spectrum by it directly
/// would yield a complex "image". Averaging each entry with its conjugate
/// mirror keeps products with real spectra conjugate-symmetric, makes
/// convolve and deconvolve exact inverses of each other for every filter, and
/// leaves unmodified Gaussian filters untouched.
inline RealPlane natural_effective_filter(const FrequencyFilter& filt) {
    const int h = filt.height();
    const int w = filt.width();
    const int ch = filt.center_row();
    const int cw = filt.center_col();
    RealPlane out(h, w);
    for (int u = 0; u < h; ++u) {
        const int su = (u + ch) % h;
        const int smu = ((h - u) % h + ch) % h;
        for (int v = 0; v < w; ++v) {
            const int sv = (v + cw) % w;
            const int smv = ((w - v) % w + cw) % w;
            out.at(u, v) = 0.5 * (filt.at(su, sv) + filt.at(smu, smv));
        }
    }
    return out;
}

}  // namespace detail

/// Frequency-domain convolution: pointwise product of the image spectrum with
/// the center-shifted filter, transformed back to a real plane.
inline RealPlane convolve(const RealPlane& img, const FrequencyFilter& filt) {
    require_same_shape(img.height(), img.width(), filt.height(), filt.width(), "convolve");
    ComplexPlane spec = dft2(img);
    const RealPlane g = detail::natural_effective_filter(filt);
    for (int u = 0; u < spec.height(); ++u) {
        for (int v = 0; v < spec.width(); ++v) {
            spec.at(u, v) *= g.at(u, v);
        }
    }
    return idft2(std::move(spec));
}

/// Frequency-domain deconvolution: pointwise division by the center-shifted
/// filter. Exact inverse of convolve with the same filter.
inline RealPlane deconvolve(const RealPlane& img, const FrequencyFilter& filt) {
    require_same_shape(img.height(), img.width(), filt.height(), filt.width(), "deconvolve");
    if (filt.min_value() < kMinFilterValue) {
        throw IllConditionedFilterError("deconvolve: smallest filter entry " +
                                        std::to_string(filt.min_value()) + " is below " +
                                        std::to_string(kMinFilterValue));
    }
    ComplexPlane spec = dft2(img);
    const RealPlane g = detail::natural_effective_filter(filt);
    for (int u = 0; u < spec.height(); ++u) {
        for (int v = 0; v < spec.width(); ++v) {
            spec.at(u, v) /= g.at(u, v);
        }
    }
    return idft2(std::move(spec));
}

/// One application of the Gaussian convolution-deconvolution operator:
/// convolve, round to integers, deconvolve, round again. The result may leave
/// [0, 255]; range handling belongs to the sealing loop.
inline Image gcd_apply(const Image& img, const FrequencyFilter& filt) {
    const Image blurred = round_plane(convolve(to_real(img), filt));
    return round_plane(deconvolve(to_real(blurred), filt));
}

/// Filter equivalent to circular convolution with a unit-sum spatial Gaussian
/// kernel of standard deviation sigma, sampled on the periodic grid. Used to
/// exercise the spatial-sigma guarantees; keyed filters are built in
/// keys.hpp directly in the frequency domain.
inline FrequencyFilter build_filter_from_spatial_sigma(int height, int width, double sigma) {
    if (height < kMinFilterSide || width < kMinFilterSide) {
        throw ParameterError("spatial filter: dimensions must be at least " +
                             std::to_string(kMinFilterSide) + "x" + std::to_string(kMinFilterSide));
    }
    if (!(sigma > 0.0) || sigma > kMaxSpatialSigma) {
        throw ParameterError("spatial filter: sigma must be in (0, " +
                             std::to_string(kMaxSpatialSigma) + "], got " + std::to_string(sigma));
    }

    RealPlane kernel(height, width);
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    double sum = 0.0;
    for (int s = 0; s < height; ++s) {
        const int dy = std::min(s, height - s);
        for (int t = 0; t < width; ++t) {
            const int dx = std::min(t, width - t);
            const double v = std::exp(-(static_cast<double>(dy) * dy + static_cast<double>(dx) * dx) *
                                      inv_two_sigma2);
            kernel.at(s, t) = v;
            sum += v;
        }
    }
    for (int s = 0; s < height; ++s) {
        for (int t = 0; t < width; ++t) {
            kernel.at(s, t) /= sum;
        }
    }

    const ComplexPlane spec = dft2(kernel);
    const int ch = height / 2;
    const int cw = width / 2;
    RealPlane shifted(height, width);
    for (int u = 0; u < height; ++u) {
        for (int v = 0; v < width; ++v) {
            const std::complex<double> bin = spec.at(u, v);
            if (std::abs(bin.imag()) > 1e-9) {
                throw InternalConsistencyError(
                    "spatial filter: symmetric kernel produced a complex spectrum");
            }
            if (bin.real() <= 0.0) {
                throw InternalConsistencyError("spatial filter: non-positive spectrum entry " +
                                               std::to_string(bin.real()));
            }
            shifted.at((u + ch) % height, (v + cw) % width) = bin.real();
        }
    }
    shifted.at(ch, cw) = 1.0;  // unit-sum kernel has unit zero-frequency gain
    return FrequencyFilter(std::move(shifted), 0.0);
}

}  // namespace fpa
