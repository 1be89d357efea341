// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "dsde/dsde.hpp"
#include "metrics/metrics.hpp"
#include "rasterizer/rasterizer.hpp"
#include "scenegen/scenegen.hpp"

namespace ivb {
namespace {

const Dataset& plane_dataset() {
    static const Dataset ds = [] {
        SceneSpec s;
        s.kind = SceneKind::TexturedPlane;
        s.rig = RigKind::Linear9;
        s.width = 192;
        s.height = 108;
        s.splat_count = 15000;
        return generate(s);
    }();
    return ds;
}

DepthMap oracle_depth(const Dataset& ds, int view) {
    const RenderOutput r = render(ds.scene, ds.cameras[view]);
    return depth_from_render(r.depth, r.alpha);
}

int nearest_plane(const std::vector<double>& planes, double depth) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(planes.size()); ++i) {
        if (std::abs(planes[i] - depth) < std::abs(planes[best] - depth)) best = i;
    }
    return best;
}

TEST(Dsde, InverseDepthPlanes) {
    const auto p = inverse_depth_planes(64, 1.0, 4.0);
    ASSERT_EQ(p.size(), 64u);
    EXPECT_NEAR(p.front(), 1.0, 1e-12);
    EXPECT_NEAR(p.back(), 4.0, 1e-12);
    for (std::size_t i = 1; i < p.size(); ++i) {
        EXPECT_GT(p[i], p[i - 1]);
        if (i > 1) EXPECT_NEAR(1 / p[i - 2] - 1 / p[i - 1], 1 / p[i - 1] - 1 / p[i], 1e-12);
    }
    EXPECT_THROW(inverse_depth_planes(1, 1, 4), ConfigError);
    EXPECT_THROW(inverse_depth_planes(8, 4, 1), ConfigError);
}

TEST(Dsde, IdentityWarpHasNoCost) {
    const Dataset& ds = plane_dataset();
    const ImageF ref = to_float(ds.views[4]);
    const std::vector<ImageF> src{ref};
    const std::vector<CameraParams> cams{ds.cameras[4]};
    const CostVolume vol = build_cost_volume(ref, ds.cameras[4], src, cams, 16, 1.0, 4.0);
    for (float c : vol.costs) ASSERT_LT(c, 1e-5f);
}

TEST(Dsde, CostVolumeErrors) {
    const Dataset& ds = plane_dataset();
    const ImageF ref = to_float(ds.views[0]);
    const std::vector<ImageF> none;
    const std::vector<CameraParams> no_cams;
    EXPECT_THROW(build_cost_volume(ref, ds.cameras[0], none, no_cams, 16, 1, 4), ConfigError);
    const std::vector<ImageF> one{ref};
    const std::vector<CameraParams> one_cam{ds.cameras[1]};
    EXPECT_THROW(build_cost_volume(ref, ds.cameras[0], one, one_cam, 16, 4, 1), ConfigError);
}

TEST(Dsde, PlaneSweepFindsThePlane) {
    const Dataset& ds = plane_dataset();
    std::vector<ImageF> src;
    std::vector<CameraParams> cams;
    for (int i : {0, 3, 5, 8}) {
        src.push_back(to_float(ds.views[i]));
        cams.push_back(ds.cameras[i]);
    }
    const CostVolume vol = build_cost_volume(to_float(ds.views[4]), ds.cameras[4], src, cams, 64, 1.0, 4.0);
    const int target = nearest_plane(vol.planes, 2.0);
    int hits = 0;
    for (int y = 0; y < vol.height; ++y) {
        for (int x = 0; x < vol.width; ++x) {
            int best = 0;
            for (int d = 1; d < 64; ++d) {
                if (vol.at(x, y, d) < vol.at(x, y, best)) best = d;
            }
            hits += best == target;
        }
    }
    EXPECT_GE(hits, 0.90 * vol.width * vol.height);

    const DepthMap dm = estimate_depth(vol);
    const double spacing = vol.planes[target + 1] - vol.planes[target];
    double err = 0;
    int valid = 0;
    for (std::size_t i = 0; i < dm.depth.data.size(); ++i) {
        if (dm.valid.data[i]) {
            err += std::abs(dm.depth.data[i] - 2.0);
            ++valid;
            EXPECT_GT(dm.depth.data[i], 0.0f);
        } else {
            EXPECT_EQ(dm.conf.data[i], 0.0f);
        }
    }
    ASSERT_GT(valid, 0);
    EXPECT_LT(err / valid, spacing);
}

TEST(Dsde, UniformCostsAreInvalid) {
    CostVolume vol;
    vol.width = 20;
    vol.height = 10;
    vol.planes = inverse_depth_planes(8, 1, 4);
    vol.costs.assign(8 * 200, 0.3f);
    const DepthMap dm = estimate_depth(vol);
    for (std::size_t i = 0; i < 200; ++i) {
        EXPECT_EQ(dm.valid.data[i], 0);
        EXPECT_EQ(dm.conf.data[i], 0.0f);
    }
}

TEST(Dsde, ParabolaVertex) {
    for (double t0 : {0.0, 0.13, 0.37, -0.21, 0.49}) {
        auto c = [&](double t) { return 2.5 * (t - t0) * (t - t0) + 0.1; };
        EXPECT_NEAR(parabola_offset(c(-1), c(0), c(1)), t0, 1e-6);
    }
    EXPECT_EQ(parabola_offset(1.0, 0.5, 1.0), 0.0);
    EXPECT_EQ(parabola_offset(0.0, 1.0, 0.0), 0.0);
}

TEST(Dsde, DibrIdentity) {
    const Dataset& ds = plane_dataset();
    const DepthMap dm = oracle_depth(ds, 4);
    const DibrSource src{&ds.views[4], &ds.cameras[4], &dm};
    const ImageU8 out = dibr_synthesize(std::span(&src, 1), ds.cameras[4]);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            if (!dm.valid.at(x, y)) continue;
            for (int c = 0; c < 3; ++c) ASSERT_LE(std::abs(out.at(x, y, c) - ds.views[4].at(x, y, c)), 1);
        }
    }
}

TEST(Dsde, OracleDibrQualityAndUpperBound) {
    const Dataset& ds = plane_dataset();
    const std::vector<int> tx{0, 3, 5, 8};
    std::vector<DepthMap> oracle;
    for (int i : tx) oracle.push_back(oracle_depth(ds, i));
    std::vector<DibrSource> src;
    for (std::size_t k = 0; k < tx.size(); ++k) src.push_back({&ds.views[tx[k]], &ds.cameras[tx[k]], &oracle[k]});
    const double with_oracle = psnr(dibr_synthesize(src, ds.cameras[4]), ds.truth[4]);
    EXPECT_GT(with_oracle, 30.0);

    std::vector<ImageU8> views;
    std::vector<CameraParams> cams;
    for (int i : tx) {
        views.push_back(ds.views[i]);
        cams.push_back(ds.cameras[i]);
    }
    const std::vector<CameraParams> target{ds.cameras[4]};
    const DsdeResult est = dsde_pipeline(views, cams, target, DsdeParams{});
    EXPECT_LE(psnr(est.synthesized[0], ds.truth[4]), with_oracle);
}

TEST(Dsde, AllInvalidDepthDoesNotCrash) {
    const Dataset& ds = plane_dataset();
    DepthMap dm{ImageF(ds.views[0].width, ds.views[0].height, 1, 2.0f),
                ImageU8(ds.views[0].width, ds.views[0].height, 1, 0),
                ImageF(ds.views[0].width, ds.views[0].height, 1, 0.0f)};
    const DibrSource src{&ds.views[0], &ds.cameras[0], &dm};
    const ImageU8 out = dibr_synthesize(std::span(&src, 1), ds.cameras[1]);
    EXPECT_EQ(out.width, ds.views[0].width);
    EXPECT_TRUE(std::all_of(out.data.begin(), out.data.end(), [](std::uint8_t v) { return v == 0; }));
}

TEST(Dsde, DeterministicAcrossWorkers) {
    const Dataset& ds = plane_dataset();
    const std::vector<ImageU8> views{ds.views[0], ds.views[3], ds.views[5], ds.views[8]};
    const std::vector<CameraParams> cams{ds.cameras[0], ds.cameras[3], ds.cameras[5], ds.cameras[8]};
    const std::vector<CameraParams> targets{ds.cameras[1], ds.cameras[4]};
    DsdeParams a, b;
    a.workers = 1;
    b.workers = 3;
    const DsdeResult ra = dsde_pipeline(views, cams, targets, a);
    const DsdeResult rb = dsde_pipeline(views, cams, targets, b);
    EXPECT_EQ(ra.synthesized, rb.synthesized);
    for (std::size_t i = 0; i < ra.depths.size(); ++i) EXPECT_EQ(ra.depths[i].depth, rb.depths[i].depth);
}

} // namespace
} // namespace ivb
