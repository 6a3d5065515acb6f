#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <fpa/errors.hpp>

namespace fpa {

/// Dense row-major matrix of T. Rows run top to bottom, columns left to
/// right; at(r, c) addresses row r, column c. An M x N image in the usual
/// matrix sense has height() == M and width() == N.
template <typename T>
class Plane {
public:
    Plane() = default;

    Plane(int height, int width, T fill = T{})
        : height_(height), width_(width) {
        if (height <= 0 || width <= 0) {
            throw ShapeError("plane dimensions must be positive, got " +
                             std::to_string(height) + "x" + std::to_string(width));
        }
        data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
    }

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int r, int c) { return data_[index(r, c)]; }
    const T& at(int r, int c) const { return data_[index(r, c)]; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

    bool same_shape(const Plane& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

    friend bool operator==(const Plane& a, const Plane& b) {
        return a.height_ == b.height_ && a.width_ == b.width_ && a.data_ == b.data_;
    }

private:
    std::size_t index(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(c);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<T> data_;
};

using Image = Plane<std::int32_t>;
using RealPlane = Plane<double>;
using ComplexPlane = Plane<std::complex<double>>;
using BoolPlane = Plane<std::uint8_t>;  // 0 or 1

/// Pixels of a sealed or to-be-sealed 8-bit image.
inline constexpr std::int32_t kPixelMin = 0;
inline constexpr std::int32_t kPixelMax = 255;

/// Working range for intermediate integer planes.
inline constexpr std::int32_t kWorkingMagnitude = 1 << 15;

inline void require_same_shape(int ah, int aw, int bh, int bw, const char* op) {
    if (ah != bh || aw != bw) {
        throw ShapeError(std::string(op) + ": shape mismatch, " + std::to_string(ah) + "x" +
                         std::to_string(aw) + " vs " + std::to_string(bh) + "x" +
                         std::to_string(bw));
    }
}

template <typename A, typename B>
void require_same_shape(const Plane<A>& a, const Plane<B>& b, const char* op) {
    require_same_shape(a.height(), a.width(), b.height(), b.width(), op);
}

inline RealPlane to_real(const Image& img) {
    RealPlane out(img.height(), img.width());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            out.at(r, c) = static_cast<double>(img.at(r, c));
        }
    }
    return out;
}

inline void require_byte_range(const Image& img, const char* op) {
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const auto p = img.at(r, c);
            if (p < kPixelMin || p > kPixelMax) {
                throw PixelRangeError(std::string(op) + ": pixel (" + std::to_string(r) + "," +
                                      std::to_string(c) + ") = " + std::to_string(p) +
                                      " outside [0,255]");
            }
        }
    }
}

template <typename T>
Plane<T> transpose(const Plane<T>& p) {
    Plane<T> out(p.width(), p.height());
    for (int r = 0; r < p.height(); ++r) {
        for (int c = 0; c < p.width(); ++c) {
            out.at(c, r) = p.at(r, c);
        }
    }
    return out;
}

/// Quarter turn clockwise.
template <typename T>
Plane<T> rotate90(const Plane<T>& p) {
    Plane<T> out(p.width(), p.height());
    for (int r = 0; r < p.height(); ++r) {
        for (int c = 0; c < p.width(); ++c) {
            out.at(c, p.height() - 1 - r) = p.at(r, c);
        }
    }
    return out;
}

template <typename T>
Plane<T> flip_horizontal(const Plane<T>& p) {
    Plane<T> out(p.height(), p.width());
    for (int r = 0; r < p.height(); ++r) {
        for (int c = 0; c < p.width(); ++c) {
            out.at(r, p.width() - 1 - c) = p.at(r, c);
        }
    }
    return out;
}

template <typename T>
Plane<T> flip_vertical(const Plane<T>& p) {
    Plane<T> out(p.height(), p.width());
    for (int r = 0; r < p.height(); ++r) {
        for (int c = 0; c < p.width(); ++c) {
            out.at(p.height() - 1 - r, c) = p.at(r, c);
        }
    }
    return out;
}

/// FNV-1a over the dimensions and pixel values. Used for iteration-cycle
/// detection and for pinning test corpora.
inline std::uint64_t content_hash(const Image& img) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (v >> (8 * byte)) & 0xffULL;
            h *= 1099511628211ULL;
        }
    };
    mix(static_cast<std::uint64_t>(img.height()));
    mix(static_cast<std::uint64_t>(img.width()));
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            mix(static_cast<std::uint64_t>(static_cast<std::uint32_t>(img.at(r, c))));
        }
    }
    return h;
}

}  // namespace fpa
