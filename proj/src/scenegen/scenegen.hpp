// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "camera/camera.hpp"
#include "common/image.hpp"
#include "rasterizer/gaussian.hpp"

namespace ivb {

enum class SceneKind { TexturedPlane, BoxRoom, SphereField, SpecularSphere, NoiseAugmented };
enum class RigKind { Linear4, Linear9, Grid8 };

std::string_view to_string(SceneKind k);
std::string_view to_string(RigKind r);
SceneKind parse_scene_kind(std::string_view s);
RigKind parse_rig_kind(std::string_view s);

struct SceneSpec {
    std::uint64_t seed = 1;
    SceneKind kind = SceneKind::TexturedPlane;
    int splat_count = 60000;
    RigKind rig = RigKind::Linear4;
    double baseline_m = 0.1;
    int width = 960;
    int height = 540;
    double noise_sigma = 0.0;
    /// Content underneath the noise for NoiseAugmented scenes.
    SceneKind base_kind = SceneKind::BoxRoom;

    friend bool operator==(const SceneSpec&, const SceneSpec&) = default;
};

void to_json(nlohmann::json& j, const SceneSpec& s);
void from_json(const nlohmann::json& j, SceneSpec& s);
void validate(const SceneSpec& spec);

/// views[i] is the (possibly noisy) capture of cameras[i]; truth[i] is the
/// clean render used as the evaluation reference at the same camera.
struct Dataset {
    SceneSpec spec;
    GaussianScene scene;
    std::vector<CameraParams> cameras;
    std::vector<ImageU8> views;
    std::vector<ImageU8> truth;
};

Dataset generate(const SceneSpec& spec);

std::vector<CameraParams> make_rig(const SceneSpec& spec);

/// Spread rule: round(k (n-1) / (m-1)) for k in [0, m), deduplicated.
std::vector<int> spread_indices(int total, int wanted);

struct ViewSplit {
    std::vector<int> transmitted;
    std::vector<int> evaluation;
};

/// atlas_count 1 keeps at most 4 views, 2 keeps at most 8; evaluation is every camera.
ViewSplit split_transmitted(const Dataset& dataset, int atlas_count);

/// Directory layout: manifest.json, view_####.ppm, truth_####.ppm (noisy kinds
/// only), scene.gsc1.
void save_dataset(const Dataset& dataset, const std::string& dir);
Dataset load_dataset(const std::string& dir);

nlohmann::json camera_to_json(const CameraParams& cam);
CameraParams camera_from_json(const nlohmann::json& j);

} // namespace ivb
