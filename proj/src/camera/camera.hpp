// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace ivb {

/// Axis convention of a pose.
///   MIV: x forward, y left, z up; Euler angles compose yaw (z), pitch (y),
///        roll (x) into the camera-to-world rotation.
///   CV:  x right, y down, z forward; rotation is world-to-camera.
/// Both share the same world frame, so only the camera-side basis differs.
enum class Convention { MIV, CV };

std::string_view to_string(Convention c);
/// Throws ParseError on unknown tags.
Convention parse_convention(std::string_view tag);

struct Intrinsics {
    double focal_x = 0;
    double focal_y = 0;
    double principal_x = 0;
    double principal_y = 0;
    int width = 0;
    int height = 0;
};

struct Pose {
    double yaw_deg = 0;
    double pitch_deg = 0;
    double roll_deg = 0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Convention convention = Convention::MIV;
};

struct CameraParams {
    int id = 0;
    Intrinsics intrinsics;
    Pose pose;
};

struct EulerAngles {
    double yaw_deg = 0;
    double pitch_deg = 0;
    double roll_deg = 0;
};

/// Pixel coordinates address pixel centers: pixel (i, j) sits at (i, j).
struct Projection {
    Eigen::Vector2d pixel;
    double depth = 0;
};

/// Pitch magnitude at which poses are rejected as degenerate.
inline constexpr double kGimbalGuardDeg = 89.9;

/// Basis change from MIV camera axes to CV camera axes.
Eigen::Matrix3d miv_to_cv_basis();

Eigen::Matrix3d euler_to_rotation(double yaw_deg, double pitch_deg, double roll_deg, Convention convention);
EulerAngles rotation_to_euler(const Eigen::Matrix3d& rotation, Convention convention);

Eigen::Matrix3d pose_rotation(const Pose& pose);

CameraParams convert_convention(const CameraParams& camera, Convention target);

/// Throws ConfigError if intrinsics or pose violate their invariants.
void validate(const CameraParams& camera);

/// std::nullopt marks a point at or behind the camera plane.
std::optional<Projection> project(const Eigen::Vector3d& world, const CameraParams& camera);
Eigen::Vector3d unproject(const Eigen::Vector2d& pixel, double depth, const CameraParams& camera);

/// World-to-camera rotation expressed in CV camera axes, for any convention.
Eigen::Matrix3d world_to_cv_camera(const CameraParams& camera);
/// Unit optical axis in world coordinates.
Eigen::Vector3d forward_axis(const CameraParams& camera);

/// Matrix form x ~ K (R (X - C)) in CV camera axes, valid for both conventions.
struct PinholeCV {
    Eigen::Matrix3d K;
    Eigen::Matrix3d R;
    Eigen::Vector3d C;
};
PinholeCV to_pinhole(const CameraParams& camera);

/// Same camera viewed at a different image scale (pixel grid divided by factor).
CameraParams scaled(const CameraParams& camera, int factor);

} // namespace ivb
