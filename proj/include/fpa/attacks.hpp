#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fpa/authenticate.hpp>
#include <fpa/errors.hpp>
#include <fpa/keys.hpp>
#include <fpa/plane.hpp>
#include <fpa/rng.hpp>

namespace fpa {

enum class AttackKind {
    rewrite_other_key,
    flip_h,
    flip_v,
    transpose,
    rotate90,
    scale,
    histogram_stretch,
    crop_replace,
    salt_pepper_local,
    gauss_noise_local,
    median_local,
    gauss_filter_local,
    copy_internal,
    copy_external,
    cover_constant,
    collage,
    logo_overlay,
    quant_noise,
};

inline const char* to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::rewrite_other_key: return "REWRITE_OTHER_KEY";
        case AttackKind::flip_h: return "FLIP_H";
        case AttackKind::flip_v: return "FLIP_V";
        case AttackKind::transpose: return "TRANSPOSE";
        case AttackKind::rotate90: return "ROTATE90";
        case AttackKind::scale: return "SCALE";
        case AttackKind::histogram_stretch: return "HISTOGRAM_STRETCH";
        case AttackKind::crop_replace: return "CROP_REPLACE";
        case AttackKind::salt_pepper_local: return "SALT_PEPPER_LOCAL";
        case AttackKind::gauss_noise_local: return "GAUSS_NOISE_LOCAL";
        case AttackKind::median_local: return "MEDIAN_LOCAL";
        case AttackKind::gauss_filter_local: return "GAUSS_FILTER_LOCAL";
        case AttackKind::copy_internal: return "COPY_INTERNAL";
        case AttackKind::copy_external: return "COPY_EXTERNAL";
        case AttackKind::cover_constant: return "COVER_CONSTANT";
        case AttackKind::collage: return "COLLAGE";
        case AttackKind::logo_overlay: return "LOGO_OVERLAY";
        case AttackKind::quant_noise: return "QUANT_NOISE";
    }
    return "UNKNOWN";
}

inline AttackKind attack_kind_from_string(const std::string& name) {
    static const std::map<std::string, AttackKind> table = {
        {"REWRITE_OTHER_KEY", AttackKind::rewrite_other_key},
        {"FLIP_H", AttackKind::flip_h},
        {"FLIP_V", AttackKind::flip_v},
        {"TRANSPOSE", AttackKind::transpose},
        {"ROTATE90", AttackKind::rotate90},
        {"SCALE", AttackKind::scale},
        {"HISTOGRAM_STRETCH", AttackKind::histogram_stretch},
        {"CROP_REPLACE", AttackKind::crop_replace},
        {"SALT_PEPPER_LOCAL", AttackKind::salt_pepper_local},
        {"GAUSS_NOISE_LOCAL", AttackKind::gauss_noise_local},
        {"MEDIAN_LOCAL", AttackKind::median_local},
        {"GAUSS_FILTER_LOCAL", AttackKind::gauss_filter_local},
        {"COPY_INTERNAL", AttackKind::copy_internal},
        {"COPY_EXTERNAL", AttackKind::copy_external},
        {"COVER_CONSTANT", AttackKind::cover_constant},
        {"COLLAGE", AttackKind::collage},
        {"LOGO_OVERLAY", AttackKind::logo_overlay},
        {"QUANT_NOISE", AttackKind::quant_noise},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        throw ParameterError("unknown attack kind '" + name + "'");
    }
    return it->second;
}

/// 0-based rectangle.
struct Rect {
    int row = 0;
    int col = 0;
    int height = 0;
    int width = 0;
};

struct AttackSpec {
    AttackKind kind = AttackKind::flip_h;
    std::optional<Rect> region;
    std::map<std::string, double> params;  // kind-specific scalars
    std::uint64_t seed = 0;
    std::optional<Image> donor;            // COLLAGE, COPY_EXTERNAL
    std::optional<SecretKey> other_key;    // REWRITE_OTHER_KEY
};

struct AttackResult {
    Image attacked;
    BoolPlane truth_mask;  // every pixel the attack may have altered
};

namespace detail {

inline double param_or(const AttackSpec& spec, const std::string& name, double dflt) {
    const auto it = spec.params.find(name);
    return it == spec.params.end() ? dflt : it->second;
}

inline double required_param(const AttackSpec& spec, const std::string& name) {
    const auto it = spec.params.find(name);
    if (it == spec.params.end()) {
        throw ParameterError(std::string(to_string(spec.kind)) + ": missing parameter '" + name +
                             "'");
    }
    return it->second;
}

inline Rect required_region(const Image& img, const AttackSpec& spec) {
    if (!spec.region) {
        throw ParameterError(std::string(to_string(spec.kind)) + ": missing region");
    }
    const Rect r = *spec.region;
    if (r.height <= 0 || r.width <= 0 || r.row < 0 || r.col < 0 ||
        r.row + r.height > img.height() || r.col + r.width > img.width()) {
        throw ShapeError(std::string(to_string(spec.kind)) + ": region out of bounds");
    }
    return r;
}

inline BoolPlane full_mask(int height, int width) { return BoolPlane(height, width, 1); }

inline BoolPlane rect_mask(int height, int width, const Rect& rect) {
    BoolPlane mask(height, width, 0);
    for (int r = rect.row; r < rect.row + rect.height; ++r) {
        for (int c = rect.col; c < rect.col + rect.width; ++c) {
            mask.at(r, c) = 1;
        }
    }
    return mask;
}

inline std::int32_t clamp_byte(double v) {
    return static_cast<std::int32_t>(std::clamp(std::llround(v), 0LL, 255LL));
}

inline const Image& required_donor(const Image& img, const AttackSpec& spec) {
    if (!spec.donor) {
        throw ParameterError(std::string(to_string(spec.kind)) + ": missing donor image");
    }
    if (!spec.donor->same_shape(img)) {
        throw ShapeError(std::string(to_string(spec.kind)) + ": donor size mismatch");
    }
    return *spec.donor;
}

/// Bilinear resample with half-pixel centers and edge clamping.
inline RealPlane resample_bilinear(const RealPlane& src, int out_h, int out_w) {
    RealPlane out(out_h, out_w);
    const double sy = static_cast<double>(src.height()) / static_cast<double>(out_h);
    const double sx = static_cast<double>(src.width()) / static_cast<double>(out_w);
    for (int r = 0; r < out_h; ++r) {
        double y = (static_cast<double>(r) + 0.5) * sy - 0.5;
        y = std::clamp(y, 0.0, static_cast<double>(src.height() - 1));
        const int y0 = static_cast<int>(y);
        const int y1 = std::min(y0 + 1, src.height() - 1);
        const double fy = y - y0;
        for (int c = 0; c < out_w; ++c) {
            double x = (static_cast<double>(c) + 0.5) * sx - 0.5;
            x = std::clamp(x, 0.0, static_cast<double>(src.width() - 1));
            const int x0 = static_cast<int>(x);
            const int x1 = std::min(x0 + 1, src.width() - 1);
            const double fx = x - x0;
            out.at(r, c) = (1.0 - fy) * ((1.0 - fx) * src.at(y0, x0) + fx * src.at(y0, x1)) +
                           fy * ((1.0 - fx) * src.at(y1, x0) + fx * src.at(y1, x1));
        }
    }
    return out;
}

/// Blockwise 8x8 DCT quantization with a JPEG-style quality knob. Stands in
/// for a real JPEG round trip without pulling in a codec.
inline Image quantization_noise(const Image& img, double quality) {
    quality = std::clamp(quality, 1.0, 100.0);
    static constexpr std::array<int, 64> kLumaQ50 = {
        16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
        14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
        18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
        49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
    const double s = quality < 50.0 ? 5000.0 / quality : 200.0 - 2.0 * quality;
    std::array<double, 64> table{};
    for (int i = 0; i < 64; ++i) {
        table[i] = std::max(1.0, std::floor((kLumaQ50[i] * s + 50.0) / 100.0));
    }

    std::array<std::array<double, 8>, 8> basis{};
    for (int u = 0; u < 8; ++u) {
        const double a = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
        for (int x = 0; x < 8; ++x) {
            basis[u][x] = a * std::cos((2.0 * x + 1.0) * u * std::numbers::pi / 16.0);
        }
    }

    Image out = img;
    for (int br = 0; br < img.height(); br += 8) {
        for (int bc = 0; bc < img.width(); bc += 8) {
            double block[8][8];
            for (int r = 0; r < 8; ++r) {
                for (int c = 0; c < 8; ++c) {
                    const int sr = std::min(br + r, img.height() - 1);
                    const int sc = std::min(bc + c, img.width() - 1);
                    block[r][c] = static_cast<double>(img.at(sr, sc)) - 128.0;
                }
            }
            double coef[8][8];
            for (int u = 0; u < 8; ++u) {
                for (int v = 0; v < 8; ++v) {
                    double acc = 0.0;
                    for (int r = 0; r < 8; ++r) {
                        for (int c = 0; c < 8; ++c) {
                            acc += block[r][c] * basis[u][r] * basis[v][c];
                        }
                    }
                    const double q = table[u * 8 + v];
                    coef[u][v] = std::llround(acc / q) * q;
                }
            }
            for (int r = 0; r < 8 && br + r < img.height(); ++r) {
                for (int c = 0; c < 8 && bc + c < img.width(); ++c) {
                    double acc = 0.0;
                    for (int u = 0; u < 8; ++u) {
                        for (int v = 0; v < 8; ++v) {
                            acc += coef[u][v] * basis[u][r] * basis[v][c];
                        }
                    }
                    out.at(br + r, bc + c) = clamp_byte(acc + 128.0);
                }
            }
        }
    }
    return out;
}

inline void stretch_histogram(Image& img, const Rect& rect) {
    std::int32_t lo = 255, hi = 0;
    for (int r = rect.row; r < rect.row + rect.height; ++r) {
        for (int c = rect.col; c < rect.col + rect.width; ++c) {
            lo = std::min(lo, img.at(r, c));
            hi = std::max(hi, img.at(r, c));
        }
    }
    if (hi <= lo) {
        return;  // flat content, nothing to stretch
    }
    for (int r = rect.row; r < rect.row + rect.height; ++r) {
        for (int c = rect.col; c < rect.col + rect.width; ++c) {
            img.at(r, c) =
                clamp_byte((img.at(r, c) - lo) * 255.0 / static_cast<double>(hi - lo));
        }
    }
}

}  // namespace detail

/// Apply one deterministic attack. The truth mask covers every pixel the
/// attack may have altered (the whole image for global attacks).
inline AttackResult apply_attack(const Image& img, const AttackSpec& spec) {
    using detail::clamp_byte;
    Rng rng(spec.seed);

    switch (spec.kind) {
        case AttackKind::rewrite_other_key: {
            if (!spec.other_key) {
                throw ParameterError("REWRITE_OTHER_KEY: missing the other key");
            }
            const int max_iter = static_cast<int>(detail::param_or(spec, "max_iter", 64));
            Image resealed = seal(img, *spec.other_key, max_iter).fixed_point;
            return {std::move(resealed), detail::full_mask(img.height(), img.width())};
        }
        case AttackKind::flip_h:
            return {flip_horizontal(img), detail::full_mask(img.height(), img.width())};
        case AttackKind::flip_v:
            return {flip_vertical(img), detail::full_mask(img.height(), img.width())};
        case AttackKind::transpose:
            return {transpose(img), detail::full_mask(img.width(), img.height())};
        case AttackKind::rotate90:
            return {rotate90(img), detail::full_mask(img.width(), img.height())};
        case AttackKind::scale: {
            const double ratio = detail::param_or(spec, "ratio", 0.99);
            if (!(ratio > 0.0) || ratio > 1.0) {
                throw ParameterError("SCALE: ratio must be in (0, 1]");
            }
            const int dh = std::max(1, static_cast<int>(std::llround(img.height() * ratio)));
            const int dw = std::max(1, static_cast<int>(std::llround(img.width() * ratio)));
            const RealPlane down = detail::resample_bilinear(to_real(img), dh, dw);
            const RealPlane up = detail::resample_bilinear(down, img.height(), img.width());
            Image out(img.height(), img.width());
            for (int r = 0; r < out.height(); ++r) {
                for (int c = 0; c < out.width(); ++c) {
                    out.at(r, c) = clamp_byte(up.at(r, c));
                }
            }
            return {std::move(out), detail::full_mask(img.height(), img.width())};
        }
        case AttackKind::histogram_stretch: {
            Image out = img;
            if (spec.region) {
                const Rect rect = detail::required_region(img, spec);
                detail::stretch_histogram(out, rect);
                return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
            }
            detail::stretch_histogram(out, Rect{0, 0, img.height(), img.width()});
            return {std::move(out), detail::full_mask(img.height(), img.width())};
        }
        case AttackKind::crop_replace: {
            const Rect rect = detail::required_region(img, spec);
            Image out = img;
            for (int r = rect.row; r < rect.row + rect.height; ++r) {
                for (int c = rect.col; c < rect.col + rect.width; ++c) {
                    out.at(r, c) = static_cast<std::int32_t>(rng.uniform_int(0, 255));
                }
            }
            return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
        }
        case AttackKind::salt_pepper_local: {
            const Rect rect = detail::required_region(img, spec);
            const double density = detail::param_or(spec, "density", 0.05);
            if (density < 0.0 || density > 1.0) {
                throw ParameterError("SALT_PEPPER_LOCAL: density must be in [0, 1]");
            }
            Image out = img;
            for (int r = rect.row; r < rect.row + rect.height; ++r) {
                for (int c = rect.col; c < rect.col + rect.width; ++c) {
                    if (rng.uniform01() < density) {
                        out.at(r, c) = rng.uniform01() < 0.5 ? 0 : 255;
                    }
                }
            }
            return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
        }
        case AttackKind::gauss_noise_local: {
            const Rect rect = detail::required_region(img, spec);
            const double stddev = detail::param_or(spec, "stddev", 8.0);
            Image out = img;
            for (int r = rect.row; r < rect.row + rect.height; ++r) {
                for (int c = rect.col; c < rect.col + rect.width; ++c) {
                    out.at(r, c) = clamp_byte(out.at(r, c) + stddev * rng.gaussian());
                }
            }
            return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
        }
        case AttackKind::median_local: {
            const Rect rect = detail::required_region(img, spec);
            Image out = img;
            for (int r = rect.row; r < rect.row + rect.height; ++r) {
                for (int c = rect.col; c < rect.col + rect.width; ++c) {
                    std::array<std::int32_t, 9> window;
                    int i = 0;
                    for (int dr = -1; dr <= 1; ++dr) {
                        for (int dc = -1; dc <= 1; ++dc) {
                            const int nr = std::clamp(r + dr, 0, img.height() - 1);
                            const int nc = std::clamp(c + dc, 0, img.width() - 1);
                            window[i++] = img.at(nr, nc);
                        }
                    }
                    std::nth_element(window.begin(), window.begin() + 4, window.end());
                    out.at(r, c) = window[4];
                }
            }
            return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
        }
        case AttackKind::gauss_filter_local: {
            const Rect rect = detail::required_region(img, spec);
            static constexpr int kW[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
            Image out = img;
            for (int r = rect.row; r < rect.row + rect.height; ++r) {
                for (int c = rect.col; c < rect.col + rect.width; ++c) {
                    double acc = 0.0;
                    for (int dr = -1; dr <= 1; ++dr) {
                        for (int dc = -1; dc <= 1; ++dc) {
                            const int nr = std::clamp(r + dr, 0, img.height() - 1);
                            const int nc = std::clamp(c + dc, 0, img.width() - 1);
                            acc += kW[dr + 1][dc + 1] * img.at(nr, nc);
                        }
                    }
                    out.at(r, c) = clamp_byte(acc / 16.0);
                }
            }
            return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
        }
        case AttackKind::copy_internal: {
            const Rect rect = detail::required_region(img, spec);
            const int sr = static_cast<int>(detail::required_param(spec, "src_row"));
            const int sc = static_cast<int>(detail::required_param(spec, "src_col"));
            if (sr < 0 || sc < 0 || sr + rect.height > img.height() ||
                sc + rect.width > img.width()) {
                throw ShapeError("COPY_INTERNAL: source block out of bounds");
            }
            Image patch(rect.height, rect.width);
            for (int r = 0; r < rect.height; ++r) {
                for (int c = 0; c < rect.width; ++c) {
                    patch.at(r, c) = img.at(sr + r, sc + c);
                }
            }
            Image out = img;
            for (int r = 0; r < rect.height; ++r) {
                for (int c = 0; c < rect.width; ++c) {
                    out.at(rect.row + r, rect.col + c) = patch.at(r, c);
                }
            }
            return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
        }
        case AttackKind::copy_external:
        case AttackKind::collage: {
            const Rect rect = detail::required_region(img, spec);
            const Image& donor = detail::required_donor(img, spec);
            Image out = img;
            for (int r = rect.row; r < rect.row + rect.height; ++r) {
                for (int c = rect.col; c < rect.col + rect.width; ++c) {
                    out.at(r, c) = donor.at(r, c);
                }
            }
            return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
        }
        case AttackKind::cover_constant: {
            const Rect rect = detail::required_region(img, spec);
            const double value = detail::param_or(spec, "value", 128.0);
            if (value < 0.0 || value > 255.0) {
                throw ParameterError("COVER_CONSTANT: value must be in [0, 255]");
            }
            Image out = img;
            for (int r = rect.row; r < rect.row + rect.height; ++r) {
                for (int c = rect.col; c < rect.col + rect.width; ++c) {
                    out.at(r, c) = static_cast<std::int32_t>(std::llround(value));
                }
            }
            return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
        }
        case AttackKind::logo_overlay: {
            const Rect rect = detail::required_region(img, spec);
            const double alpha = detail::param_or(spec, "alpha", 0.6);
            if (alpha <= 0.0 || alpha > 1.0) {
                throw ParameterError("LOGO_OVERLAY: alpha must be in (0, 1]");
            }
            // Ring plus diagonal cross, scaled to the region.
            const double cy = rect.row + (rect.height - 1) / 2.0;
            const double cx = rect.col + (rect.width - 1) / 2.0;
            const double ay = std::max(1.0, (rect.height - 1) / 2.0);
            const double ax = std::max(1.0, (rect.width - 1) / 2.0);
            Image out = img;
            for (int r = rect.row; r < rect.row + rect.height; ++r) {
                for (int c = rect.col; c < rect.col + rect.width; ++c) {
                    const double ny = (r - cy) / ay;
                    const double nx = (c - cx) / ax;
                    const double d2 = nx * nx + ny * ny;
                    const bool ring = d2 >= 0.70 && d2 <= 1.0;
                    const bool cross = d2 < 0.70 && (std::abs(nx - ny) < 0.12 ||
                                                     std::abs(nx + ny) < 0.12);
                    if (ring || cross) {
                        out.at(r, c) = clamp_byte((1.0 - alpha) * out.at(r, c) + alpha * 255.0);
                    }
                }
            }
            return {std::move(out), detail::rect_mask(img.height(), img.width(), rect)};
        }
        case AttackKind::quant_noise: {
            const double quality = detail::param_or(spec, "quality", 95.0);
            return {detail::quantization_noise(img, quality),
                    detail::full_mask(img.height(), img.width())};
        }
    }
    throw ParameterError("apply_attack: unknown attack kind");
}

struct AttackOutcome {
    std::string kind;
    bool detected = false;
    long suspicious_count = 0;
    double recall = 0.0;
    double false_positive_rate = 0.0;
};

struct ExperimentReport {
    std::vector<AttackOutcome> outcomes;

    /// One key=value record per attack.
    std::string to_text() const {
        std::string out;
        char buf[160];
        for (const AttackOutcome& o : outcomes) {
            std::snprintf(buf, sizeof(buf),
                          "kind=%s detected=%d suspicious_count=%ld recall=%.6f fpr=%.6f\n",
                          o.kind.c_str(), o.detected ? 1 : 0, o.suspicious_count, o.recall,
                          o.false_positive_rate);
            out += buf;
        }
        return out;
    }
};

/// Attack a sealed image with every spec in order, verify each result, and
/// score localization against the attack's truth mask.
inline ExperimentReport run_experiment(const Image& sealed, const SecretKey& key,
                                       const std::vector<AttackSpec>& specs,
                                       int dilation_radius = 2) {
    if (!verify(sealed, key).authentic) {
        throw ParameterError("run_experiment: input image is not a fixed point under this key");
    }
    ExperimentReport report;
    report.outcomes.reserve(specs.size());
    for (const AttackSpec& spec : specs) {
        const AttackResult attacked = apply_attack(sealed, spec);
        const VerificationReport vr = verify(attacked.attacked, key);
        const LocalizationScore score =
            localization_score(attacked.truth_mask, vr, dilation_radius);
        report.outcomes.push_back({to_string(spec.kind), !vr.authentic, vr.suspicious_count,
                                   score.recall, score.false_positive_rate});
    }
    return report;
}

}  // namespace fpa
