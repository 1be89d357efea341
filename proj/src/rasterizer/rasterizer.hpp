// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "camera/camera.hpp"
#include "common/image.hpp"
#include "rasterizer/gaussian.hpp"

namespace ivb {

struct RasterOptions {
    int tile = 16;
    int workers = 0; // 0: hardware concurrency
    float aa_floor = 0.3f; // px^2 added to the projected covariance
    float near_plane = 0.01f;
    std::array<float, 3> background{0, 0, 0};
};

/// Contributions stop once a pixel's transmittance drops below this.
inline constexpr float kMinTransmittance = 1e-4f;
/// Squared Mahalanobis radius of the footprint (3 sigma).
inline constexpr float kFootprintSigma2 = 9.0f;

/// Screen-space splat. Bounds are inclusive pixel ranges of the 3-sigma box,
/// already clipped to the image.
struct ProjectedSplat {
    float mean_x = 0, mean_y = 0;
    float cov_xx = 0, cov_xy = 0, cov_yy = 0;
    float conic_a = 0, conic_b = 0, conic_c = 0; // inverse covariance
    float depth = 0;
    float opacity = 0;
    std::array<float, 3> color{0, 0, 0};
    int x_min = 0, x_max = -1, y_min = 0, y_max = -1;
    std::uint32_t index = 0; // position in the source scene
};

/// Per-camera constants shared by all splats of one projection pass.
struct ViewTransform {
    Eigen::Matrix3d world_to_cam;
    Eigen::Vector3d center;
    Intrinsics intrinsics;

    explicit ViewTransform(const CameraParams& camera);
};

/// EWA projection; std::nullopt when behind the near plane or off-image.
/// Color is left at zero; render() fills it from SH.
std::optional<ProjectedSplat> project_gaussian(const Gaussian& g, const CameraParams& camera,
                                               const RasterOptions& options = {});
std::optional<ProjectedSplat> project_gaussian(const Gaussian& g, const ViewTransform& view,
                                               const RasterOptions& options);

/// Tile -> splat lists; entries index the projected array.
struct TileBins {
    int tile = 16;
    int tiles_x = 0;
    int tiles_y = 0;
    std::vector<std::uint32_t> offsets; // tiles_x * tiles_y + 1
    std::vector<std::uint32_t> entries;

    std::span<const std::uint32_t> list(int tx, int ty) const {
        const std::size_t t = static_cast<std::size_t>(ty) * tiles_x + tx;
        return {entries.data() + offsets[t], entries.data() + offsets[t + 1]};
    }
};

/// Each splat lands in every tile its pixel bounds touch; lists are sorted by
/// ascending depth, ties broken by scene index.
TileBins bin_tiles(std::span<const ProjectedSplat> splats, int width, int height, int tile = 16);

struct RenderOutput {
    ImageF color;  // 3 channels
    ImageF alpha;  // 1 channel
    ImageF depth;  // 1 channel, expected depth in meters
    Image<std::int32_t> contrib_count;
};

RenderOutput composite(const TileBins& bins, std::span<const ProjectedSplat> splats, int width, int height,
                       const std::array<float, 3>& background, int workers = 0);

/// A projected + binned view, reusable for compositing and feedback passes.
struct PreparedView {
    int width = 0;
    int height = 0;
    std::vector<ProjectedSplat> splats;
    TileBins bins;
};

PreparedView prepare_view(const GaussianScene& scene, const CameraParams& camera, const RasterOptions& options = {});
RenderOutput composite(const PreparedView& view, const RasterOptions& options = {});
RenderOutput render(const GaussianScene& scene, const CameraParams& camera, const RasterOptions& options = {});

/// Per-splat sums of compositing weights w = alpha' * T over one view.
struct SplatFeedback {
    float weight = 0;
    std::array<float, 3> residual{0, 0, 0}; // sum of w * residual
    float sq_residual = 0;                  // sum of w * |residual|^2
};

/// Distributes a per-pixel residual image (3 channels) onto the splats that
/// composited each pixel. Returned vector is indexed by scene index.
/// Deterministic for any worker count: per-tile partials are reduced in tile order.
std::vector<SplatFeedback> accumulate_feedback(const PreparedView& view, const ImageF& residual,
                                               std::size_t scene_size, int workers = 0);

} // namespace ivb
