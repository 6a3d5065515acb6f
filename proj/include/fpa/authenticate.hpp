#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <fpa/errors.hpp>
#include <fpa/keys.hpp>
#include <fpa/plane.hpp>
#include <fpa/transform.hpp>

namespace fpa {

/// Sealing did not reach a fixed point within the iteration budget. Carries
/// the last iterate and the per-iteration count of changed pixels.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(std::string what, Image last_iterate, std::vector<long> pixel_changes)
        : Error(std::move(what)),
          last_iterate_(std::move(last_iterate)),
          pixel_changes_(std::move(pixel_changes)) {}

    const Image& last_iterate() const { return last_iterate_; }
    const std::vector<long>& pixel_changes() const { return pixel_changes_; }

private:
    Image last_iterate_;
    std::vector<long> pixel_changes_;
};

/// The range-adjustment strength was escalated past its ceiling.
class AdjustmentFailureError : public Error {
public:
    using Error::Error;
};

struct SealResult {
    Image fixed_point;         // all pixels in [0, 255]
    int iterations = 0;        // number of operator applications
    int adjustments = 0;       // number of range-adjustment passes
    int final_adjust_strength = 1;
    double psnr_db = 0.0;      // versus the original; +inf when identical
};

/// Axis-aligned bounding box of a connected tamper-map component, 0-based.
struct HollowRegion {
    int row = 0;
    int col = 0;
    int height = 0;
    int width = 0;
};

struct VerificationReport {
    bool authentic = false;
    BoolPlane tamper_map;      // 1 where one operator application disagrees
    long suspicious_count = 0;
    std::vector<HollowRegion> hollow_regions;
};

/// Thresholds for the hollow-area signature of cover and collage attacks: a
/// rectangle whose boundary shell carries suspicious pixels on all four sides
/// while the eroded interior is almost empty. The shell is sparse at small
/// image sizes, so the test is density-per-side rather than a solid ring.
struct VerifyOptions {
    double interior_max_density = 0.10;    // eroded-interior density ceiling
    double shell_min_side_density = 0.05;  // per-side shell density floor
    double shell_ridge_min = 0.04;  // shell must exceed the strip beyond it by this much
    int shell_width = 3;            // half-width of the shell around the edge
    int min_box_side = 16;          // smallest hollow rectangle considered
    int max_regions = 8;
};

struct LocalizationScore {
    double recall = 1.0;
    double false_positive_rate = 0.0;
};

/// Peak signal-to-noise ratio in dB between two 8-bit images of equal size;
/// +inf when they are identical.
inline double psnr(const Image& a, const Image& b) {
    require_same_shape(a, b, "psnr");
    require_byte_range(a, "psnr");
    require_byte_range(b, "psnr");
    double sq = 0.0;
    for (int r = 0; r < a.height(); ++r) {
        for (int c = 0; c < a.width(); ++c) {
            const double d = static_cast<double>(a.at(r, c)) - static_cast<double>(b.at(r, c));
            sq += d * d;
        }
    }
    if (sq == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double mse = sq / static_cast<double>(a.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

/// Drive an image to a fixed point of the keyed operator. Out-of-range
/// outputs trigger the range adjustment: offending input pixels are pulled to
/// a (underflow) or 255 - a (overflow), with a escalated whenever an iterate
/// repeats.
inline SealResult seal(const Image& original, const SecretKey& key, int max_iterations = 64) {
    require_byte_range(original, "seal");
    if (max_iterations < 1) {
        throw ParameterError("seal: max_iterations must be at least 1");
    }
    const FrequencyFilter filt = build_filter(key, original.height(), original.width());

    Image current = original;
    std::unordered_set<std::uint64_t> seen;
    int strength = 1;
    int iterations = 0;
    int adjustments = 0;
    std::vector<long> pixel_changes;

    for (;;) {
        if (!seen.insert(content_hash(current)).second) {
            ++strength;
            if (strength >= 128) {
                throw AdjustmentFailureError(
                    "seal: range adjustment strength reached 128 without convergence");
            }
        }
        if (iterations >= max_iterations) {
            throw NonConvergenceError("seal: no fixed point within " +
                                          std::to_string(max_iterations) + " iterations",
                                      std::move(current), std::move(pixel_changes));
        }
        const Image next = gcd_apply(current, filt);
        ++iterations;

        long changed = 0;
        bool out_of_range = false;
        for (int r = 0; r < next.height(); ++r) {
            for (int c = 0; c < next.width(); ++c) {
                if (next.at(r, c) != current.at(r, c)) {
                    ++changed;
                }
                if (next.at(r, c) < kPixelMin || next.at(r, c) > kPixelMax) {
                    out_of_range = true;
                }
            }
        }
        pixel_changes.push_back(changed);

        if (out_of_range) {
            for (int r = 0; r < next.height(); ++r) {
                for (int c = 0; c < next.width(); ++c) {
                    if (next.at(r, c) < kPixelMin) {
                        current.at(r, c) = strength;
                    } else if (next.at(r, c) > kPixelMax) {
                        current.at(r, c) = 255 - strength;
                    }
                }
            }
            ++adjustments;
            continue;
        }
        if (changed == 0) {
            return SealResult{next, iterations, adjustments, strength, psnr(original, next)};
        }
        current = next;
    }
}

namespace detail {

/// Summed-area table of the tamper map; query rectangles in O(1).
class HitCounter {
public:
    explicit HitCounter(const BoolPlane& map)
        : h_(map.height()), w_(map.width()), sums_((h_ + 1) * (w_ + 1), 0) {
        for (int r = 0; r < h_; ++r) {
            for (int c = 0; c < w_; ++c) {
                sums_[idx(r + 1, c + 1)] = map.at(r, c) + sums_[idx(r, c + 1)] +
                                           sums_[idx(r + 1, c)] - sums_[idx(r, c)];
            }
        }
    }

    /// Hits in rows [r0, r1] x cols [c0, c1], clamped to the plane.
    long count(int r0, int c0, int r1, int c1) const {
        r0 = std::max(r0, 0);
        c0 = std::max(c0, 0);
        r1 = std::min(r1, h_ - 1);
        c1 = std::min(c1, w_ - 1);
        if (r0 > r1 || c0 > c1) {
            return 0;
        }
        return sums_[idx(r1 + 1, c1 + 1)] - sums_[idx(r0, c1 + 1)] - sums_[idx(r1 + 1, c0)] +
               sums_[idx(r0, c0)];
    }

    long area(int r0, int c0, int r1, int c1) const {
        r0 = std::max(r0, 0);
        c0 = std::max(c0, 0);
        r1 = std::min(r1, h_ - 1);
        c1 = std::min(c1, w_ - 1);
        if (r0 > r1 || c0 > c1) {
            return 0;
        }
        return static_cast<long>(r1 - r0 + 1) * (c1 - c0 + 1);
    }

private:
    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * (w_ + 1) + static_cast<std::size_t>(c);
    }

    int h_;
    int w_;
    std::vector<long> sums_;
};

struct HollowScore {
    double weakest_side = 0.0;   // smallest per-side shell density
    double weakest_ridge = 0.0;  // smallest (shell - strip beyond the shell)
    double interior = 1.0;       // eroded-interior density
};

/// Shell, ridge and interior statistics of one candidate rectangle
/// [r0..r1]x[c0..c1]. Each side's shell must stand out against the strip just
/// beyond it, so ambient scatter cannot pose as a boundary. Strips exclude the
/// corners, which belong to the perpendicular sides; control strips clipped
/// away by the image border fall back to the ambient density.
inline HollowScore hollow_score(const HitCounter& hits, int r0, int c0, int r1, int c1, int ws,
                                double ambient) {
    const auto strip_density = [&](int sr0, int sc0, int sr1, int sc1, double fallback) {
        const long area = hits.area(sr0, sc0, sr1, sc1);
        return area == 0 ? fallback
                         : static_cast<double>(hits.count(sr0, sc0, sr1, sc1)) /
                               static_cast<double>(area);
    };
    HollowScore s;
    const long interior_area = hits.area(r0 + ws, c0 + ws, r1 - ws, c1 - ws);
    if (interior_area <= 0) {
        return s;
    }
    s.interior = static_cast<double>(hits.count(r0 + ws, c0 + ws, r1 - ws, c1 - ws)) /
                 static_cast<double>(interior_area);

    const int ci0 = c0 + ws + 1;  // corner-free span along the horizontal sides
    const int ci1 = c1 - ws - 1;
    const int ri0 = r0 + ws + 1;
    const int ri1 = r1 - ws - 1;
    const double top = strip_density(r0 - ws, ci0, r0 + ws, ci1, 0.0);
    const double bottom = strip_density(r1 - ws, ci0, r1 + ws, ci1, 0.0);
    const double left = strip_density(ri0, c0 - ws, ri1, c0 + ws, 0.0);
    const double right = strip_density(ri0, c1 - ws, ri1, c1 + ws, 0.0);
    const double top_out = strip_density(r0 - 3 * ws, ci0, r0 - ws - 1, ci1, ambient);
    const double bottom_out = strip_density(r1 + ws + 1, ci0, r1 + 3 * ws, ci1, ambient);
    const double left_out = strip_density(ri0, c0 - 3 * ws, ri1, c0 - ws - 1, ambient);
    const double right_out = strip_density(ri0, c1 + ws + 1, ri1, c1 + 3 * ws, ambient);

    s.weakest_side = std::min(std::min(top, bottom), std::min(left, right));
    s.weakest_ridge = std::min(std::min(top - top_out, bottom - bottom_out),
                               std::min(left - left_out, right - right_out));
    return s;
}

/// Hollow-area scan. Cover and collage responses form a sparse band that
/// straddles the pasted rectangle's edges while the pasted interior stays
/// quiet, so every sufficiently large rectangle is scored on its boundary
/// shell versus its eroded interior: a coarse grid scan proposes candidates
/// and a local edge refinement tightens the survivors.
inline std::vector<HollowRegion> find_hollow_regions(const BoolPlane& map,
                                                     const VerifyOptions& opts) {
    const int h = map.height();
    const int w = map.width();
    const int ws = opts.shell_width;
    const int min_side = opts.min_box_side;
    if (h < min_side || w < min_side) {
        return {};
    }
    const HitCounter hits(map);
    const double ambient = static_cast<double>(hits.count(0, 0, h - 1, w - 1)) /
                           (static_cast<double>(h) * static_cast<double>(w));

    struct Candidate {
        double score;
        int r0, c0, r1, c1;
    };
    std::vector<Candidate> candidates;

    const int step = 2 * std::max(1, std::min(h, w) / 128);
    for (int r0 = 0; r0 < h - min_side + 1; r0 += step) {
        for (int r1 = r0 + min_side - 1; r1 < h; r1 += step) {
            for (int c0 = 0; c0 < w - min_side + 1; c0 += step) {
                for (int c1 = c0 + min_side - 1; c1 < w; c1 += step) {
                    const HollowScore s = hollow_score(hits, r0, c0, r1, c1, ws, ambient);
                    if (s.interior > opts.interior_max_density ||
                        s.weakest_side < 0.6 * opts.shell_min_side_density ||
                        s.weakest_ridge < 0.5 * opts.shell_ridge_min) {
                        continue;
                    }
                    candidates.push_back({s.weakest_ridge - s.interior, r0, c0, r1, c1});
                }
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& x, const Candidate& y) { return x.score > y.score; });
    if (candidates.size() > 64) {
        candidates.resize(64);
    }

    // refine each candidate edge by edge
    for (Candidate& cand : candidates) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const int delta : {-4, -2, -1, 1, 2, 4}) {
                const auto try_edges = [&](int dr0, int dc0, int dr1, int dc1) {
                    const int r0 = cand.r0 + dr0;
                    const int c0 = cand.c0 + dc0;
                    const int r1 = cand.r1 + dr1;
                    const int c1 = cand.c1 + dc1;
                    if (r0 < 0 || c0 < 0 || r1 >= h || c1 >= w ||
                        r1 - r0 + 1 < min_side || c1 - c0 + 1 < min_side) {
                        return;
                    }
                    const HollowScore s = hollow_score(hits, r0, c0, r1, c1, ws, ambient);
                    const double score = s.weakest_ridge - s.interior;
                    if (score > cand.score && s.interior <= opts.interior_max_density) {
                        cand = {score, r0, c0, r1, c1};
                    }
                };
                try_edges(delta, 0, 0, 0);
                try_edges(0, delta, 0, 0);
                try_edges(0, 0, delta, 0);
                try_edges(0, 0, 0, delta);
            }
        }
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& x, const Candidate& y) { return x.score > y.score; });
    std::vector<HollowRegion> out;
    for (const Candidate& cand : candidates) {
        const HollowScore s = hollow_score(hits, cand.r0, cand.c0, cand.r1, cand.c1, ws, ambient);
        if (s.weakest_side < opts.shell_min_side_density ||
            s.weakest_ridge < opts.shell_ridge_min ||
            s.interior > opts.interior_max_density || s.weakest_side < 2.0 * s.interior) {
            continue;
        }
        bool overlaps = false;
        for (const HollowRegion& kept : out) {
            if (cand.r0 < kept.row + kept.height && kept.row <= cand.r1 &&
                cand.c0 < kept.col + kept.width && kept.col <= cand.c1) {
                overlaps = true;
                break;
            }
        }
        if (!overlaps) {
            out.push_back({cand.r0, cand.c0, cand.r1 - cand.r0 + 1, cand.c1 - cand.c0 + 1});
            if (static_cast<int>(out.size()) >= opts.max_regions) {
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

/// Receiver-side check: one operator application. The image is authentic iff
/// it is left unchanged; disagreeing pixels form the tamper map.
inline VerificationReport verify(const Image& suspicious, const SecretKey& key,
                                 const VerifyOptions& opts = {}) {
    require_byte_range(suspicious, "verify");
    const FrequencyFilter filt = build_filter(key, suspicious.height(), suspicious.width());
    const Image recomputed = gcd_apply(suspicious, filt);

    VerificationReport report;
    report.tamper_map = BoolPlane(suspicious.height(), suspicious.width(), 0);
    for (int r = 0; r < suspicious.height(); ++r) {
        for (int c = 0; c < suspicious.width(); ++c) {
            if (recomputed.at(r, c) != suspicious.at(r, c)) {
                report.tamper_map.at(r, c) = 1;
                ++report.suspicious_count;
            }
        }
    }
    report.authentic = report.suspicious_count == 0;
    if (!report.authentic) {
        report.hollow_regions = detail::find_hollow_regions(report.tamper_map, opts);
    }
    return report;
}

/// Compare a tamper map against the ground-truth mask of an attack, allowing
/// detections within a Chebyshev dilation radius of the truth.
inline LocalizationScore localization_score(const BoolPlane& truth_mask,
                                            const VerificationReport& report,
                                            int dilation_radius = 2) {
    require_same_shape(truth_mask, report.tamper_map, "localization_score");
    if (dilation_radius < 0) {
        throw ParameterError("localization_score: dilation_radius must be non-negative");
    }
    const int h = truth_mask.height();
    const int w = truth_mask.width();
    const auto dilate = [&](const BoolPlane& src) {
        BoolPlane out(h, w, 0);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                if (!src.at(r, c)) {
                    continue;
                }
                for (int dr = -dilation_radius; dr <= dilation_radius; ++dr) {
                    for (int dc = -dilation_radius; dc <= dilation_radius; ++dc) {
                        const int nr = r + dr;
                        const int nc = c + dc;
                        if (nr >= 0 && nr < h && nc >= 0 && nc < w) {
                            out.at(nr, nc) = 1;
                        }
                    }
                }
            }
        }
        return out;
    };

    const BoolPlane near_suspicious = dilate(report.tamper_map);
    const BoolPlane near_truth = dilate(truth_mask);

    long truth_total = 0, truth_found = 0, susp_total = 0, susp_far = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (truth_mask.at(r, c)) {
                ++truth_total;
                truth_found += near_suspicious.at(r, c);
            }
            if (report.tamper_map.at(r, c)) {
                ++susp_total;
                susp_far += near_truth.at(r, c) ? 0 : 1;
            }
        }
    }
    LocalizationScore score;
    score.recall = truth_total == 0
                       ? 1.0
                       : static_cast<double>(truth_found) / static_cast<double>(truth_total);
    score.false_positive_rate =
        susp_total == 0 ? 0.0 : static_cast<double>(susp_far) / static_cast<double>(susp_total);
    return score;
}

}  // namespace fpa
