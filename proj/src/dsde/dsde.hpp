// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "camera/camera.hpp"
#include "common/image.hpp"

namespace ivb {

struct DsdeParams {
    int planes = 64;
    double depth_min = 1.0;
    double depth_max = 4.0;
    /// Sources per reference view (nearest camera centers first).
    int max_sources = 2;
    int workers = 0;
};

/// Matching cost weights and the penalty for warps leaving the source frame.
inline constexpr float kSadWeight = 0.8f;
inline constexpr float kCensusWeight = 0.2f;
inline constexpr float kOutOfFramePenalty = 0.25f;
inline constexpr double kFrameSlack = 1e-6;
inline constexpr float kMinConfidence = 0.05f;

/// n depths, uniform in inverse depth, strictly increasing.
std::vector<double> inverse_depth_planes(int n, double depth_min, double depth_max);

struct CostVolume {
    int ref_view = 0;
    int width = 0;
    int height = 0;
    std::vector<double> planes;
    std::vector<float> costs; // [plane][y][x]

    float at(int x, int y, int d) const {
        return costs[(static_cast<std::size_t>(d) * height + y) * width + x];
    }
    float& at(int x, int y, int d) { return costs[(static_cast<std::size_t>(d) * height + y) * width + x]; }
};

/// Images are RGB float in [0, 1].
CostVolume build_cost_volume(const ImageF& ref, const CameraParams& ref_camera, std::span<const ImageF> sources,
                             std::span<const CameraParams> source_cameras, int planes, double depth_min,
                             double depth_max, int workers = 0);

struct DepthMap {
    ImageF depth;  // meters along the forward axis
    ImageU8 valid; // 0 or 1
    ImageF conf;   // [0, 1], 0 where invalid
};

/// Offset of the parabola vertex through (-1, cm), (0, c0), (1, cp), clamped
/// to [-0.5, 0.5]; 0 when the parabola does not open upward.
double parabola_offset(double cm, double c0, double cp);

DepthMap estimate_depth(const CostVolume& volume, int workers = 0);

/// Ground-truth style depth map: every pixel with positive depth is valid at
/// confidence 1.
DepthMap depth_from_render(const ImageF& depth, const ImageF& alpha, float min_alpha = 0.5f);

struct DibrSource {
    const ImageU8* image;
    const CameraParams* camera;
    const DepthMap* depth;
};

inline constexpr double kZTolerance = 0.01;
inline constexpr int kInpaintPasses = 64;

ImageU8 dibr_synthesize(std::span<const DibrSource> sources, const CameraParams& target);

/// Full decoder-side pipeline: depth per transmitted view, then DIBR to each target.
struct DsdeResult {
    std::vector<DepthMap> depths;
    std::vector<ImageU8> synthesized;
};
DsdeResult dsde_pipeline(std::span<const ImageU8> views, std::span<const CameraParams> cameras,
                         std::span<const CameraParams> targets, const DsdeParams& params);

} // namespace ivb
