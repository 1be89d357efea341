// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ivb {

inline constexpr int kMaxShDegree = 2;
inline constexpr int kMaxShCoeffs = (kMaxShDegree + 1) * (kMaxShDegree + 1);

constexpr int sh_coeff_count(int degree) { return (degree + 1) * (degree + 1); }

/// One splat: center, covariance factored as rotation + per-axis log standard
/// deviation, opacity and spherical-harmonics color.
/// sh is coefficient-major: sh[k * 3 + channel].
struct Gaussian {
    std::array<float, 3> mu{0, 0, 0};
    std::array<float, 4> rot{1, 0, 0, 0}; // w, x, y, z
    std::array<float, 3> log_scale{0, 0, 0};
    float opacity = 0.5f;
    std::array<float, kMaxShCoeffs * 3> sh{};

    Eigen::Vector3d center() const { return {mu[0], mu[1], mu[2]}; }
};

struct GaussianScene {
    std::vector<Gaussian> gaussians;
    int sh_degree = 0;
    Eigen::Vector3d bbox_min = Eigen::Vector3d::Zero();
    Eigen::Vector3d bbox_max = Eigen::Vector3d::Zero();

    void update_bounds();
};

/// Log-scale bounds; quaternion norm tolerance reflects f32 storage.
inline constexpr float kMinLogScale = -12.0f;
inline constexpr float kMaxLogScale = 4.0f;
inline constexpr double kQuatNormTolerance = 1e-6;

/// Throws ConfigError on the first violated invariant.
void validate(const Gaussian& g);
void validate(const GaussianScene& scene);

std::array<float, 4> normalized_quat(const std::array<float, 4>& q);

/// Sigma = R diag(exp(2 log_scale)) R^T.
Eigen::Matrix3d covariance_of(const Gaussian& g);

/// Real SH basis (degree <= 2) along a unit direction, before clamping.
std::array<float, 3> eval_sh_raw(std::span<const float> coeffs, int degree, const Eigen::Vector3d& dir);
/// Same, clamped to [0, 1]. Throws ConfigError on a zero direction.
std::array<float, 3> eval_sh(std::span<const float> coeffs, int degree, const Eigen::Vector3d& dir);
/// Basis values Y_k(dir) for k < (degree+1)^2.
void sh_basis(int degree, const Eigen::Vector3d& dir, float* out);

inline constexpr double kShC0 = 0.28209479177387814;

/// GSC1 little-endian scene file.
std::vector<std::uint8_t> encode_gsc1(const GaussianScene& scene);
GaussianScene decode_gsc1(std::span<const std::uint8_t> bytes);
void write_gsc1(const std::string& path, const GaussianScene& scene);
GaussianScene read_gsc1(const std::string& path);

} // namespace ivb
