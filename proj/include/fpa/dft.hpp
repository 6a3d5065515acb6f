#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <fpa/errors.hpp>
#include <fpa/plane.hpp>

namespace fpa {

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place radix-2 transform, n a power of two. sign -1 is the forward
/// kernel exp(-2*pi*i*jk/n), sign +1 its conjugate. No normalization.
inline void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) {
        return;
    }
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    // One table of n/2 roots serves every stage via stride indexing.
    std::vector<std::complex<double>> roots(n / 2);
    const double base = static_cast<double>(sign) * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
        roots[k] = std::polar(1.0, base * static_cast<double>(k));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const std::complex<double> w = roots[k * stride];
                const std::complex<double> u = a[i + k];
                const std::complex<double> t = a[i + k + half] * w;
                a[i + k] = u + t;
                a[i + k + half] = u - t;
            }
        }
    }
}

/// Bluestein chirp transform for arbitrary n. Same kernel convention and
/// normalization as fft_pow2. The chirp angle uses t^2 mod 2n so the argument
/// stays small regardless of n.
inline void fft_bluestein(std::vector<std::complex<double>>& a, int sign) {
    const std::size_t n = a.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) {
        m <<= 1;
    }
    const double base = static_cast<double>(sign) * std::numbers::pi / static_cast<double>(n);
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::uint64_t q = (static_cast<std::uint64_t>(t) * t) % (2 * n);
        chirp[t] = std::polar(1.0, base * static_cast<double>(q));
    }

    std::vector<std::complex<double>> fa(m, {0.0, 0.0});
    std::vector<std::complex<double>> fb(m, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) {
        fa[j] = a[j] * chirp[j];
    }
    fb[0] = std::conj(chirp[0]);
    for (std::size_t t = 1; t < n; ++t) {
        fb[t] = std::conj(chirp[t]);
        fb[m - t] = std::conj(chirp[t]);
    }

    fft_pow2(fa, -1);
    fft_pow2(fb, -1);
    for (std::size_t i = 0; i < m; ++i) {
        fa[i] *= fb[i];
    }
    fft_pow2(fa, +1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = fa[k] * inv_m * chirp[k];
    }
}

inline void fft_1d(std::vector<std::complex<double>>& a, int sign) {
    if (is_pow2(a.size())) {
        fft_pow2(a, sign);
    } else {
        fft_bluestein(a, sign);
    }
}

/// Row-column 2-D transform, in place over a copy of the plane.
inline void fft_2d(ComplexPlane& p, int sign) {
    const int h = p.height();
    const int w = p.width();
    std::vector<std::complex<double>> line(static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            line[static_cast<std::size_t>(c)] = p.at(r, c);
        }
        fft_1d(line, sign);
        for (int c = 0; c < w; ++c) {
            p.at(r, c) = line[static_cast<std::size_t>(c)];
        }
    }
    line.assign(static_cast<std::size_t>(h), {0.0, 0.0});
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r) {
            line[static_cast<std::size_t>(r)] = p.at(r, c);
        }
        fft_1d(line, sign);
        for (int r = 0; r < h; ++r) {
            p.at(r, c) = line[static_cast<std::size_t>(r)];
        }
    }
}

/// Inverse transform to a real plane without the public residue gate.
/// Artifact filters are not conjugate-symmetric, so pipelines that apply them
/// define their result as the real part; see transform.hpp.
inline RealPlane idft2_real_part(ComplexPlane spec) {
    fft_2d(spec, +1);
    const double scale = 1.0 / (static_cast<double>(spec.height()) * static_cast<double>(spec.width()));
    RealPlane out(spec.height(), spec.width());
    for (int r = 0; r < spec.height(); ++r) {
        for (int c = 0; c < spec.width(); ++c) {
            out.at(r, c) = spec.at(r, c).real() * scale;
        }
    }
    return out;
}

}  // namespace detail

/// Forward unnormalized 2-D DFT of a real plane.
inline ComplexPlane dft2(const RealPlane& img) {
    ComplexPlane spec(img.height(), img.width());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const double v = img.at(r, c);
            if (!std::isfinite(v)) {
                throw NumericDomainError("dft2: non-finite input at (" + std::to_string(r) +
                                         "," + std::to_string(c) + ")");
            }
            spec.at(r, c) = {v, 0.0};
        }
    }
    detail::fft_2d(spec, -1);
    return spec;
}

/// Inverse 2-D DFT with 1/(M*N) normalization. The caller promises the
/// spectrum belongs to a real plane; a significant imaginary residue is
/// reported as an internal inconsistency rather than silently dropped.
inline RealPlane idft2(ComplexPlane spec) {
    detail::fft_2d(spec, +1);
    const double scale = 1.0 / (static_cast<double>(spec.height()) * static_cast<double>(spec.width()));
    RealPlane out(spec.height(), spec.width());
    double max_re = 0.0;
    double max_im = 0.0;
    for (int r = 0; r < spec.height(); ++r) {
        for (int c = 0; c < spec.width(); ++c) {
            const std::complex<double> v = spec.at(r, c) * scale;
            out.at(r, c) = v.real();
            max_re = std::max(max_re, std::abs(v.real()));
            max_im = std::max(max_im, std::abs(v.imag()));
        }
    }
    if (max_im > 1e-6 * std::max(1.0, max_re)) {
        throw InternalConsistencyError("idft2: imaginary residue " + std::to_string(max_im) +
                                       " on a plane that should be real");
    }
    return out;
}

}  // namespace fpa
