// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "metrics/metrics.hpp"
#include "support/oracles.hpp"

namespace ivb {
namespace {

RDCurve curve(std::vector<double> sizes, std::vector<double> quality) {
    RDCurve c;
    for (std::size_t i = 0; i < sizes.size(); ++i) c.points.push_back({sizes[i], quality[i]});
    return c;
}

const RDCurve kAnchor = curve({3107e3, 297e3, 184e3, 111e3, 59e3}, {24.20, 24.41, 24.43, 24.36, 23.97});
const RDCurve kCurveA = curve({1000, 2100, 4500, 9000, 20000}, {30.0, 32.5, 34.8, 36.1, 38.0});

TEST(Metrics, PsnrIdenticalIsCap) {
    const ImageU8 a = testing::random_image(1, 16, 16);
    EXPECT_EQ(psnr(a, a), 100.0);
}

TEST(Metrics, PsnrUniformOffset) {
    ImageU8 a(32, 16, 3, 100), b(32, 16, 3, 116);
    EXPECT_NEAR(psnr(a, b), 10 * std::log10(255.0 * 255.0 / 256.0), 1e-6);
    EXPECT_NEAR(psnr(a, b), 24.0484, 1e-4);
}

TEST(Metrics, PsnrSinglePixel) {
    ImageU8 a(2, 2, 3, 128), b = a;
    a.at(0, 0, 0) = 0;
    b.at(0, 0, 0) = 255;
    EXPECT_NEAR(psnr(a, b), 10 * std::log10(12.0), 1e-9);
    EXPECT_NEAR(psnr(a, b), 10.79, 0.005);
}

TEST(Metrics, PsnrMatchesBruteForceAndIsSymmetric) {
    const ImageU8 a = testing::random_image(2, 40, 30), b = testing::random_image(3, 40, 30);
    EXPECT_NEAR(psnr(a, b), testing::psnr_bruteforce(a, b), 1e-9);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
    EXPECT_THROW(psnr(a, testing::random_image(3, 30, 40)), ConfigError);
}

TEST(Metrics, PsnrFloat) {
    ImageF a(4, 4, 1, 0.5f), b(4, 4, 1, 0.6f);
    EXPECT_NEAR(psnr(a, b, 1.0), 20.0, 1e-5);
}

TEST(Metrics, SsimIdentical) {
    const ImageU8 a = testing::random_image(4, 32, 24);
    EXPECT_NEAR(ssim(a, a), 1.0, 1e-12);
}

TEST(Metrics, SsimMatchesBruteForce) {
    const ImageU8 a = testing::random_image(5, 37, 29);
    ImageU8 b = a;
    std::mt19937_64 rng(6);
    for (auto& v : b.data) v = static_cast<std::uint8_t>(std::clamp<int>(v + static_cast<int>(rng() % 41) - 20, 0, 255));
    EXPECT_NEAR(ssim(a, b), testing::ssim_bruteforce(a, b), 1e-5);
    EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-12);
}

TEST(Metrics, SsimNegative) {
    ImageU8 a(48, 48, 3);
    for (int y = 0; y < 48; ++y) {
        for (int x = 0; x < 48; ++x) {
            for (int c = 0; c < 3; ++c) a.at(x, y, c) = static_cast<std::uint8_t>(((x / 3 + y / 5) % 2) ? 230 : 20);
        }
    }
    ImageU8 neg = a;
    for (auto& v : neg.data) v = static_cast<std::uint8_t>(255 - v);
    const double s = ssim(a, neg);
    EXPECT_LT(s, 0.5);
    EXPECT_NEAR(s, testing::ssim_bruteforce(a, neg), 1e-5);
}

TEST(Metrics, SsimConstantWithTinyNoise) {
    ImageU8 a(40, 40, 3, 120), b = a;
    std::mt19937_64 rng(7);
    for (auto& v : b.data) v = static_cast<std::uint8_t>(v + static_cast<int>(rng() % 3) - 1);
    EXPECT_GT(ssim(a, b), 0.9);
}

TEST(Metrics, InterviewDelta) {
    const std::vector<double> same{30, 30, 30};
    EXPECT_EQ(interview_delta(same), 0.0);
    const std::vector<double> spread{24.1, 30.5, 41.3};
    EXPECT_EQ(interview_delta(spread), 41.3 - 24.1);
    EXPECT_NEAR(interview_delta(spread), 17.2, 1e-12);
    const std::vector<double> reordered{41.3, 24.1, 30.5};
    EXPECT_EQ(interview_delta(reordered), interview_delta(spread));
    const std::vector<double> one{33.0};
    EXPECT_EQ(interview_delta(one), 0.0);
    EXPECT_THROW(interview_delta(std::vector<double>{}), ConfigError);
}

TEST(Metrics, EvaluateViews) {
    std::vector<ImageU8> r{testing::random_image(8, 24, 24), testing::random_image(9, 24, 24)};
    std::vector<ImageU8> t{r[0], testing::random_image(10, 24, 24)};
    const std::vector<int> ids{3, 7};
    const QualityVector q = evaluate_views(r, t, ids);
    EXPECT_EQ(q.view_ids, ids);
    EXPECT_EQ(q.psnr_db[0], 100.0);
    EXPECT_NEAR(q.ssim[0], 1.0, 1e-12);
    EXPECT_EQ(interview_delta(q).psnr, 100.0 - q.psnr_db[1]);
}

TEST(Metrics, BdIdenticalIsZero) {
    EXPECT_EQ(bd_quality(kAnchor, kAnchor), 0.0);
    EXPECT_EQ(bd_rate(kCurveA, kCurveA), 0.0);
}

TEST(Metrics, BdConstantOffset) {
    for (const RDCurve& base : {kAnchor, kCurveA}) {
        RDCurve t = base;
        for (auto& p : t.points) p.quality += 2.0;
        EXPECT_NEAR(bd_quality(base, t), 2.0, 1e-9);
        EXPECT_NEAR(bd_quality(t, base), -2.0, 1e-9);
    }
}

TEST(Metrics, BdRateHalvedSizes) {
    RDCurve t = kCurveA;
    for (auto& p : t.points) p.size_bytes /= 2;
    EXPECT_NEAR(bd_rate(kCurveA, t), -50.0, 1e-6);
}

TEST(Metrics, BdAntisymmetric) {
    const RDCurve b = curve({1200, 2000, 5000, 8000, 25000}, {29.0, 31.0, 34.0, 36.5, 37.0});
    EXPECT_NEAR(bd_quality(kCurveA, b), -bd_quality(b, kCurveA), 1e-9);
    EXPECT_NE(bd_quality(kCurveA, b), 0.0);
}

TEST(Metrics, BdMonotoneResponse) {
    const RDCurve b = curve({1200, 2000, 5000, 8000, 25000}, {29.0, 31.0, 34.0, 36.5, 37.0});
    const double base = bd_quality(kCurveA, b);
    RDCurve worse = b;
    for (auto& p : worse.points) p.quality -= 0.75;
    EXPECT_NEAR(bd_quality(kCurveA, worse), base - 0.75, 1e-9);
}

TEST(Metrics, BdErrors) {
    const RDCurve three = curve({1, 2, 3}, {1, 2, 3});
    EXPECT_THROW(bd_quality(three, three), ConfigError);
    const RDCurve far = curve({1e9, 2e9, 3e9, 4e9}, {30, 31, 32, 33});
    EXPECT_THROW(bd_quality(kCurveA, far), NoOverlapError);
    const RDCurve high = curve({1000, 2100, 4500, 9000}, {50, 51, 52, 53});
    EXPECT_THROW(bd_rate(kCurveA, high), NoOverlapError);
}

} // namespace
} // namespace ivb
