#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include <fpa/attacks.hpp>
#include <fpa/authenticate.hpp>

#include "support/corpus.hpp"
#include "support/oracle.hpp"

using namespace fpa;

TEST(Psnr, IdenticalImagesAreInfinite) {
    const Image img = corpus::random_image(16, 16, 0, 255, 1);
    EXPECT_TRUE(std::isinf(psnr(img, img)));
}

TEST(Psnr, OnePixelOffClosedForm) {
    Image a(400, 600, 77);
    Image b = a;
    b.at(123, 456) += 1;
    EXPECT_NEAR(psnr(a, b), 101.932916, 1e-3);
}

TEST(Psnr, Errors) {
    EXPECT_THROW(psnr(Image(8, 8, 0), Image(8, 9, 0)), ShapeError);
    EXPECT_THROW(psnr(Image(8, 8, 300), Image(8, 8, 0)), PixelRangeError);
}

TEST(Seal, ConstantImageReturnsImmediately) {
    const SecretKey key = parse_key("0.500000 1 20 0.6 30 60 0.5");
    const SealResult res = seal(Image(64, 64, 128), key);
    EXPECT_EQ(res.fixed_point, Image(64, 64, 128));
    EXPECT_EQ(res.iterations, 1);
    EXPECT_EQ(res.adjustments, 0);
    EXPECT_TRUE(std::isinf(res.psnr_db));
}

TEST(Seal, ResealingAFixedPointIsIdentity) {
    const SecretKey key = parse_key("0.450000");
    const Image sealed = seal(corpus::random_image(48, 48, 0, 255, 2), key).fixed_point;
    const SealResult again = seal(sealed, key);
    EXPECT_EQ(again.fixed_point, sealed);
    EXPECT_EQ(again.iterations, 1);
}

TEST(Seal, ProducesAnExactFixedPointCrossCheckedWithTheOracle) {
    const SecretKey key = parse_key("0.500000");
    const Image img = corpus::random_image(16, 16, 1, 254, 3);
    const SealResult res = seal(img, key);
    EXPECT_LE(res.iterations, 64);
    const FrequencyFilter f = build_filter(key, 16, 16);
    EXPECT_EQ(gcd_apply(res.fixed_point, f), res.fixed_point);
    EXPECT_EQ(oracle::naive_gcd_apply(res.fixed_point, f), res.fixed_point);
    EXPECT_GE(res.psnr_db, 40.0);
    for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
            EXPECT_GE(res.fixed_point.at(r, c), 0);
            EXPECT_LE(res.fixed_point.at(r, c), 255);
        }
    }
}

TEST(Seal, RangeAdjustmentPathConverges) {
    // this seed drives pixels out of [0, 255] and exercises the adjustment
    const SecretKey key = parse_key("0.500000");
    const Image img = corpus::random_image(64, 64, 0, 255, 7001);
    const SealResult res = seal(img, key);
    EXPECT_GE(res.adjustments, 1);
    EXPECT_EQ(res.final_adjust_strength, 1);
    EXPECT_EQ(gcd_apply(res.fixed_point, build_filter(key, 64, 64)), res.fixed_point);
}

TEST(Seal, NonConvergenceCarriesDiagnostics) {
    const SecretKey key = parse_key("0.500000");
    const Image img = corpus::random_image(64, 64, 0, 255, 7000);  // needs 2 iterations
    try {
        seal(img, key, 1);
        FAIL() << "expected NonConvergenceError";
    } catch (const NonConvergenceError& e) {
        EXPECT_EQ(e.pixel_changes().size(), 1u);
        EXPECT_GT(e.pixel_changes()[0], 0);
        EXPECT_EQ(e.last_iterate().height(), 64);
    }
}

TEST(Seal, InputValidation) {
    const SecretKey key = parse_key("0.500000");
    EXPECT_THROW(seal(Image(16, 16, -1), key), PixelRangeError);
    EXPECT_THROW(seal(Image(16, 16, 128), key, 0), ParameterError);
}

TEST(Verify, SealedImageIsAuthentic) {
    const SecretKey key = parse_key("0.400000 1 5 0.6 40 60 0.5");
    const Image sealed = seal(corpus::random_image(64, 64, 0, 255, 4), key).fixed_point;
    const VerificationReport rep = verify(sealed, key);
    EXPECT_TRUE(rep.authentic);
    EXPECT_EQ(rep.suspicious_count, 0);
    EXPECT_TRUE(rep.hollow_regions.empty());
}

TEST(Verify, SinglePixelTamperIsDetectedNearTheTamper) {
    const SecretKey key = parse_key("0.150000 1 5 0.6 40 60 0.5");
    Image sealed = seal(corpus::random_image(64, 64, 0, 255, 5), key).fixed_point;
    const int tr = 31;
    const int tc = 17;
    sealed.at(tr, tc) += sealed.at(tr, tc) < 255 ? 1 : -1;
    const VerificationReport rep = verify(sealed, key);
    EXPECT_FALSE(rep.authentic);
    EXPECT_GE(rep.suspicious_count, 1);
    bool near = false;
    for (int r = tr - 3; r <= tr + 3; ++r) {
        for (int c = tc - 3; c <= tc + 3; ++c) {
            near = near || rep.tamper_map.at(r, c);
        }
    }
    EXPECT_TRUE(near);
}

TEST(Verify, TamperMapMatchesOneOperatorApplicationExactly) {
    const SecretKey key = parse_key("0.350000");
    Image img = corpus::natural_image(48, 48, 6);
    img.at(10, 10) = 255 - img.at(10, 10);
    img.at(30, 20) = 255 - img.at(30, 20);
    const VerificationReport rep = verify(img, key);
    const Image recomputed = oracle::naive_gcd_apply(img, build_filter(key, 48, 48));
    long count = 0;
    for (int r = 0; r < 48; ++r) {
        for (int c = 0; c < 48; ++c) {
            const bool differs = recomputed.at(r, c) != img.at(r, c);
            EXPECT_EQ(static_cast<bool>(rep.tamper_map.at(r, c)), differs);
            count += differs;
        }
    }
    EXPECT_EQ(rep.suspicious_count, count);
    EXPECT_EQ(rep.authentic, count == 0);
}

TEST(Verify, CoverAttackShowsAHollowRegionOverTheCover) {
    Rng rng(77);
    const SecretKey key(static_cast<int>(rng.uniform_int(300000, 450000)), {});
    const Image sealed = seal(corpus::natural_image(64, 64, 7), key).fixed_point;
    AttackSpec spec;
    spec.kind = AttackKind::cover_constant;
    spec.region = Rect{20, 16, 28, 30};
    spec.params["value"] = 224.0;
    const VerificationReport rep = verify(apply_attack(sealed, spec).attacked, key);
    ASSERT_FALSE(rep.authentic);
    bool overlaps = false;
    for (const HollowRegion& hr : rep.hollow_regions) {
        overlaps = overlaps || (hr.row < 20 + 28 && 20 < hr.row + hr.height &&
                                hr.col < 16 + 30 && 16 < hr.col + hr.width);
    }
    EXPECT_TRUE(overlaps);
}

TEST(Verify, WrongKeyRejectsSealedImages) {
    int authentic = 0;
    for (int t = 0; t < 20; ++t) {
        Rng rng(8000 + t);
        const SecretKey key(static_cast<int>(rng.uniform_int(300000, 700000)),
                            generate_key(48, 48, 2, 8100 + t).mods());
        const SecretKey other(static_cast<int>(rng.uniform_int(300000, 700000)),
                              generate_key(48, 48, 2, 8200 + t).mods());
        const Image sealed = seal(corpus::random_image(48, 48, 0, 255, 8300 + t), key).fixed_point;
        authentic += verify(sealed, other).authentic ? 1 : 0;
    }
    EXPECT_EQ(authentic, 0);
}

TEST(Verify, KeyIncompatibleWithImageSize) {
    const SecretKey key = parse_key("0.500000 1 100 0.6");
    EXPECT_THROW(verify(Image(64, 64, 128), key), KeyIncompatibleError);
}

TEST(LocalizationScore, Trivials) {
    VerificationReport rep;
    rep.tamper_map = BoolPlane(16, 16, 0);
    rep.authentic = true;
    const LocalizationScore empty = localization_score(BoolPlane(16, 16, 0), rep, 2);
    EXPECT_DOUBLE_EQ(empty.recall, 1.0);
    EXPECT_DOUBLE_EQ(empty.false_positive_rate, 0.0);

    BoolPlane mask(16, 16, 0);
    mask.at(3, 4) = 1;
    mask.at(9, 9) = 1;
    rep.tamper_map = mask;
    const LocalizationScore same = localization_score(mask, rep, 0);
    EXPECT_DOUBLE_EQ(same.recall, 1.0);
    EXPECT_DOUBLE_EQ(same.false_positive_rate, 0.0);
}

TEST(LocalizationScore, DilationCountsNearbyDetections) {
    BoolPlane truth(16, 16, 0);
    truth.at(8, 8) = 1;
    VerificationReport rep;
    rep.tamper_map = BoolPlane(16, 16, 0);
    rep.tamper_map.at(8, 10) = 1;   // within radius 2 of the truth
    rep.tamper_map.at(0, 0) = 1;    // far away
    const LocalizationScore sc = localization_score(truth, rep, 2);
    EXPECT_DOUBLE_EQ(sc.recall, 1.0);
    EXPECT_DOUBLE_EQ(sc.false_positive_rate, 0.5);
    const LocalizationScore tight = localization_score(truth, rep, 1);
    EXPECT_DOUBLE_EQ(tight.recall, 0.0);
}

TEST(LocalizationScore, BlockTamperEndToEnd) {
    // 20x20 block on a sealed 64x64 image; the response covers the block
    Rng rng(44);
    const SecretKey key(static_cast<int>(rng.uniform_int(400000, 500000)), {});
    const Image sealed = seal(corpus::random_image(64, 64, 0, 255, 45), key).fixed_point;
    AttackSpec spec;
    spec.kind = AttackKind::crop_replace;
    spec.region = Rect{22, 22, 20, 20};
    spec.seed = 46;
    const AttackResult res = apply_attack(sealed, spec);
    const LocalizationScore sc =
        localization_score(res.truth_mask, verify(res.attacked, key), 2);
    EXPECT_GT(sc.recall, 0.5);
    EXPECT_GE(sc.false_positive_rate, 0.0);
    EXPECT_LE(sc.false_positive_rate, 1.0);
}

TEST(LocalizationScore, Errors) {
    VerificationReport rep;
    rep.tamper_map = BoolPlane(8, 8, 0);
    EXPECT_THROW(localization_score(BoolPlane(8, 9, 0), rep, 2), ShapeError);
    EXPECT_THROW(localization_score(BoolPlane(8, 8, 0), rep, -1), ParameterError);
}
