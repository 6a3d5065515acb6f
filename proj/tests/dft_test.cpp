#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include <fpa/dft.hpp>

#include "support/corpus.hpp"
#include "support/oracle.hpp"

using namespace fpa;

TEST(Dft2, AllZeros) {
    const ComplexPlane spec = dft2(RealPlane(8, 8, 0.0));
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            EXPECT_EQ(spec.at(r, c), (std::complex<double>{0.0, 0.0}));
        }
    }
}

TEST(Dft2, ConstantConcentratesAtZeroFrequency) {
    const ComplexPlane spec = dft2(RealPlane(12, 9, 41.0));
    EXPECT_NEAR(spec.at(0, 0).real(), 41.0 * 12 * 9, 1e-8);
    EXPECT_NEAR(spec.at(0, 0).imag(), 0.0, 1e-9);
    for (int r = 0; r < 12; ++r) {
        for (int c = 0; c < 9; ++c) {
            if (r == 0 && c == 0) continue;
            EXPECT_LT(std::abs(spec.at(r, c)), 1e-9);
        }
    }
}

TEST(Dft2, MatchesDirectSummation) {
    for (const auto [h, w] : {std::pair{8, 8}, {5, 7}, {12, 20}, {15, 9}, {16, 16}, {1, 13}}) {
        const RealPlane p = corpus::random_plane(h, w, -100.0, 100.0, 42 + h * 100 + w);
        const ComplexPlane fast = dft2(p);
        const ComplexPlane slow = oracle::naive_dft2(p);
        double scale = 0.0;
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                scale = std::max(scale, std::abs(slow.at(r, c)));
            }
        }
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                EXPECT_LT(std::abs(fast.at(r, c) - slow.at(r, c)), 1e-9 * std::max(1.0, scale))
                    << h << "x" << w << " at " << r << "," << c;
            }
        }
    }
}

TEST(Dft2, RoundTripWithinBudget) {
    // seeded random planes up to the full working magnitude
    for (const auto [h, w] : {std::pair{8, 8}, {10, 6}, {25, 16}, {32, 32}}) {
        const RealPlane p = corpus::random_plane(h, w, -32768.0, 32767.0, 7 + h + w);
        const RealPlane back = idft2(dft2(p));
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                EXPECT_LT(std::abs(back.at(r, c) - p.at(r, c)), 1e-9);
            }
        }
    }
}

TEST(Dft2, Linearity) {
    const RealPlane a = corpus::random_plane(9, 14, 0.0, 255.0, 100);
    const RealPlane b = corpus::random_plane(9, 14, 0.0, 255.0, 101);
    RealPlane sum(9, 14);
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 14; ++c) {
            sum.at(r, c) = a.at(r, c) + b.at(r, c);
        }
    }
    const ComplexPlane sa = dft2(a);
    const ComplexPlane sb = dft2(b);
    const ComplexPlane ss = dft2(sum);
    for (int r = 0; r < 9; ++r) {
        for (int c = 0; c < 14; ++c) {
            EXPECT_LT(std::abs(ss.at(r, c) - sa.at(r, c) - sb.at(r, c)), 1e-8);
        }
    }
}

TEST(Dft2, RejectsNonFiniteInput) {
    RealPlane p(4, 4, 0.0);
    p.at(2, 2) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(dft2(p), NumericDomainError);
}

TEST(Idft2, FlagsSpectraThatAreNotReal) {
    // a lone impulse without its conjugate mirror cannot come from a real plane
    ComplexPlane spec(8, 8, {0.0, 0.0});
    spec.at(1, 2) = {64.0, 0.0};
    EXPECT_THROW(idft2(spec), InternalConsistencyError);
}
