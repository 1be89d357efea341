// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "camera/camera.hpp"
#include "common/image.hpp"
#include "rasterizer/gaussian.hpp"

namespace ivb {

struct PredictorConfig {
    int subsample = 2;
    int init_planes = 32;
    int refine_iters = 8;
    float opacity_init = 0.8f;
    float prune_alpha = 0.05f;
    int sh_degree = 0;
    std::uint64_t seed = 1;
    double depth_min = 1.0;
    double depth_max = 4.0;
    int workers = 0;
};

void validate(const PredictorConfig& config);

struct TraceRow {
    int iter = 0;
    std::vector<double> residual_view; // mean squared RGB residual per input view
    double residual = 0;               // mean over views
    std::size_t splats = 0;
    std::size_t accepted = 0; // splat updates in accepted proposal classes
    std::size_t rejected = 0; // splat updates in rejected proposal classes
};

struct RefineTrace {
    std::vector<TraceRow> rows;
};

/// Columns: iter, residual_view_0.., residual, splats, accepted, rejected.
std::string trace_csv(const RefineTrace& trace);

/// Where each splat came from; refinement moves splats along this ray.
struct SplatOrigin {
    int view = 0;
    float pixel_x = 0, pixel_y = 0; // full-resolution seeding pixel
    double depth = 0;               // along the seeding camera's forward axis
};

struct SeededScene {
    GaussianScene scene;
    std::vector<SplatOrigin> origins;
};

/// Cameras must use the CV convention; views are 8-bit RGB of equal size.
SeededScene init_splats(std::span<const ImageU8> views, std::span<const CameraParams> cameras,
                        const PredictorConfig& config);

struct RefineResult {
    GaussianScene scene;
    std::vector<SplatOrigin> origins;
    RefineTrace trace;
};

RefineResult refine_splats(const SeededScene& seeded, std::span<const ImageU8> views,
                           std::span<const CameraParams> cameras, const PredictorConfig& config);

struct Prediction {
    GaussianScene scene;
    RefineTrace trace;
};

Prediction predict(std::span<const ImageU8> views, std::span<const CameraParams> cameras,
                   const PredictorConfig& config);

inline constexpr double kFloaterResidual = 0.2;
inline constexpr double kFloaterIsolation = 3.0;

struct FloaterReport {
    std::size_t count = 0;
    std::vector<std::uint32_t> ids;
};

FloaterReport floater_census(const GaussianScene& scene, std::span<const ImageU8> views,
                             std::span<const CameraParams> cameras, int workers = 0);

} // namespace ivb
