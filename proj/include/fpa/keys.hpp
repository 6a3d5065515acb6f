#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <fpa/errors.hpp>
#include <fpa/filter.hpp>
#include <fpa/plane.hpp>
#include <fpa/rng.hpp>

namespace fpa {

/// One keyed overwrite of a filter entry. Coordinates are 1-based, as written
/// in key strings; the value is a multiple of 0.1 in [0.1, 1.0].
struct KeyMod {
    int row = 0;
    int col = 0;
    int value_tenths = 0;

    double value() const { return static_cast<double>(value_tenths) / 10.0; }

    friend bool operator==(const KeyMod&, const KeyMod&) = default;
};

/// Secret key: the scale fraction r, held at exactly six decimals, plus an
/// ordered list of filter modifications.
class SecretKey {
public:
    SecretKey(int r_micro, std::vector<KeyMod> mods) : r_micro_(r_micro), mods_(std::move(mods)) {
        if (r_micro_ < 1 || r_micro_ > 999999) {
            throw ParameterError("key: r must lie strictly between 0 and 1");
        }
        std::set<std::pair<int, int>> seen;
        for (const KeyMod& m : mods_) {
            if (m.row < 1 || m.col < 1) {
                throw ParameterError("key: modification coordinates must be positive");
            }
            if (m.value_tenths < 1 || m.value_tenths > 10) {
                throw ParameterError("key: modification value must be in [0.1, 1.0]");
            }
            if (!seen.insert({m.row, m.col}).second) {
                throw ParameterError("key: duplicate modification coordinates");
            }
        }
    }

    /// r quantized to six decimals, in (0, 1).
    double r() const { return static_cast<double>(r_micro_) * 1e-6; }
    int r_micro() const { return r_micro_; }
    const std::vector<KeyMod>& mods() const { return mods_; }

    friend bool operator==(const SecretKey& a, const SecretKey& b) {
        return a.r_micro_ == b.r_micro_ && a.mods_ == b.mods_;
    }

private:
    int r_micro_;
    std::vector<KeyMod> mods_;
};

namespace detail {

inline double parse_real_token(const std::string& tok, int position, const char* what) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + tok.size() || !std::isfinite(v)) {
        throw KeyFormatError(std::string("key: ") + what + " '" + tok + "' is not a number",
                             position);
    }
    return v;
}

inline long long parse_int_token(const std::string& tok, int position, const char* what) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(begin, &end, 10);
    if (end != begin + tok.size() || tok.empty()) {
        throw KeyFormatError(std::string("key: ") + what + " '" + tok + "' is not an integer",
                             position);
    }
    return v;
}

}  // namespace detail

/// Parse a key string: one real r followed by zero or more
/// "row col value" triples, whitespace separated.
inline SecretKey parse_key(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> tokens;
    for (std::string tok; in >> tok;) {
        tokens.push_back(tok);
    }
    if (tokens.empty()) {
        throw KeyFormatError("key: empty key string", 0);
    }

    const double r = detail::parse_real_token(tokens[0], 1, "r");
    const long long micro = std::llround(r * 1e6);
    if (micro < 1 || micro > 999999) {
        throw KeyFormatError("key: r must lie strictly between 0 and 1", 1);
    }

    if ((tokens.size() - 1) % 3 != 0) {
        throw KeyFormatError("key: modifications must come as (row, col, value) triples",
                             static_cast<int>(tokens.size()));
    }

    std::vector<KeyMod> mods;
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 1; i < tokens.size(); i += 3) {
        const int pos = static_cast<int>(i) + 1;
        const long long row = detail::parse_int_token(tokens[i], pos, "row");
        const long long col = detail::parse_int_token(tokens[i + 1], pos + 1, "column");
        if (row < 1 || col < 1) {
            throw KeyFormatError("key: coordinates must be positive", row < 1 ? pos : pos + 1);
        }
        const double value = detail::parse_real_token(tokens[i + 2], pos + 2, "value");
        const long long tenths = std::llround(value * 10.0);
        if (std::abs(value * 10.0 - static_cast<double>(tenths)) > 1e-9 || tenths < 1 ||
            tenths > 10) {
            throw KeyFormatError("key: value must be a multiple of 0.1 in [0.1, 1]", pos + 2);
        }
        if (!seen.insert({static_cast<int>(row), static_cast<int>(col)}).second) {
            throw KeyFormatError("key: duplicate modification coordinates", pos);
        }
        mods.push_back({static_cast<int>(row), static_cast<int>(col), static_cast<int>(tenths)});
    }
    return SecretKey(static_cast<int>(micro), std::move(mods));
}

/// Canonical key string: single spaces, r with exactly six decimals, values
/// with minimal decimals. parse_key(serialize_key(k)) == k.
inline std::string serialize_key(const SecretKey& key) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "0.%06d", key.r_micro());
    std::string out(buf);
    for (const KeyMod& m : key.mods()) {
        out += ' ';
        out += std::to_string(m.row);
        out += ' ';
        out += std::to_string(m.col);
        out += ' ';
        if (m.value_tenths == 10) {
            out += "1";
        } else {
            out += "0.";
            out += static_cast<char>('0' + m.value_tenths);
        }
    }
    return out;
}

/// Build the keyed frequency-domain Gaussian filter for an image of
/// height x width pixels. sigma' = r * (height + width), kept at three
/// decimals; entries below kMinFilterValue are floored; modifications then
/// overwrite single entries.
inline FrequencyFilter build_filter(const SecretKey& key, int height, int width) {
    if (height < kMinFilterSide || width < kMinFilterSide) {
        throw ParameterError("build_filter: image must be at least " +
                             std::to_string(kMinFilterSide) + "x" +
                             std::to_string(kMinFilterSide));
    }
    // sigma' * 1000 = r_micro * (height + width) / 1000, rounded half up.
    const long long num = static_cast<long long>(key.r_micro()) * (height + width);
    const long long milli = (num + 500) / 1000;
    if (milli <= 0) {
        throw ParameterError("build_filter: sigma' rounds to zero for this image size");
    }
    const double sigma_prime = static_cast<double>(milli) / 1000.0;

    const int ch = height / 2;
    const int cw = width / 2;
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma_prime * sigma_prime);
    RealPlane values(height, width);
    for (int u = 0; u < height; ++u) {
        const double du = static_cast<double>(u - ch);
        for (int v = 0; v < width; ++v) {
            const double dv = static_cast<double>(v - cw);
            const double g = std::exp(-(du * du + dv * dv) * inv_two_sigma2);
            values.at(u, v) = std::max(g, kMinFilterValue);
        }
    }

    for (const KeyMod& m : key.mods()) {
        const int r = m.row - 1;
        const int c = m.col - 1;
        if (r >= height || c >= width) {
            throw KeyIncompatibleError("key modification (" + std::to_string(m.row) + "," +
                                       std::to_string(m.col) + ") is outside a " +
                                       std::to_string(height) + "x" + std::to_string(width) +
                                       " filter");
        }
        if (r == ch && c == cw) {
            throw KeyIncompatibleError(
                "key modification would overwrite the filter center for this image size");
        }
        values.at(r, c) = m.value();
    }
    return FrequencyFilter(std::move(values), sigma_prime);
}

/// Size of the key space in bits for n modification points on a
/// height x width filter.
inline double key_space_bits(int height, int width, int n_mods) {
    if (height < kMinFilterSide || width < kMinFilterSide) {
        throw ParameterError("key_space_bits: dimensions must be at least 8x8");
    }
    if (n_mods < 0) {
        throw ParameterError("key_space_bits: n_mods must be non-negative");
    }
    return 19.0 + static_cast<double>(n_mods) *
                      (std::log2(static_cast<double>(height)) +
                       std::log2(static_cast<double>(width)) + std::log2(10.0));
}

/// Draw a random key for a height x width image: r uniform over the six
/// decimal grid of (0, 1), modification points uniform over coordinates
/// farther than max(height, width)/4 from the filter center, values uniform
/// over {0.1, ..., 1.0}.
inline SecretKey generate_key(int height, int width, int n_mods, std::uint64_t seed) {
    if (height < kMinFilterSide || width < kMinFilterSide) {
        throw ParameterError("generate_key: dimensions must be at least 8x8");
    }
    if (n_mods < 0) {
        throw ParameterError("generate_key: n_mods must be non-negative");
    }
    Rng rng(seed);
    const int r_micro = static_cast<int>(rng.uniform_int(1, 999999));

    std::vector<KeyMod> mods;
    if (n_mods > 0) {
        const int ch = height / 2;
        const int cw = width / 2;
        const double threshold = static_cast<double>(std::max(height, width)) / 4.0;
        const double threshold2 = threshold * threshold;
        long long eligible = 0;
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                const double d2 = static_cast<double>(r - ch) * (r - ch) +
                                  static_cast<double>(c - cw) * (c - cw);
                if (d2 > threshold2) {
                    ++eligible;
                }
            }
        }
        if (n_mods > eligible) {
            throw CapacityError("generate_key: only " + std::to_string(eligible) +
                                " coordinates lie far enough from the center, " +
                                std::to_string(n_mods) + " requested");
        }
        std::set<std::pair<int, int>> used;
        while (static_cast<int>(mods.size()) < n_mods) {
            const int r = static_cast<int>(rng.uniform_int(0, height - 1));
            const int c = static_cast<int>(rng.uniform_int(0, width - 1));
            const double d2 = static_cast<double>(r - ch) * (r - ch) +
                              static_cast<double>(c - cw) * (c - cw);
            if (d2 <= threshold2 || !used.insert({r, c}).second) {
                continue;
            }
            const int tenths = static_cast<int>(rng.uniform_int(1, 10));
            mods.push_back({r + 1, c + 1, tenths});
        }
    }
    return SecretKey(r_micro, std::move(mods));
}

}  // namespace fpa
