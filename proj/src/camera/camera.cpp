// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "camera/camera.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "common/error.hpp"

namespace ivb {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Eigen::Matrix3d rot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d m;
    m << 1, 0, 0, 0, c, -s, 0, s, c;
    return m;
}

Eigen::Matrix3d rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d m;
    m << c, 0, s, 0, 1, 0, -s, 0, c;
    return m;
}

Eigen::Matrix3d rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d m;
    m << c, -s, 0, s, c, 0, 0, 0, 1;
    return m;
}

Eigen::Matrix3d miv_rotation(double yaw_deg, double pitch_deg, double roll_deg) {
    return rot_z(yaw_deg * kDeg) * rot_y(pitch_deg * kDeg) * rot_x(roll_deg * kDeg);
}

EulerAngles decompose_miv(const Eigen::Matrix3d& r) {
    const double pitch = std::atan2(-r(2, 0), std::hypot(r(2, 1), r(2, 2)));
    if (std::abs(pitch) >= kGimbalGuardDeg * kDeg) {
        throw DegeneratePoseError("degenerate pose: pitch " + std::to_string(pitch / kDeg) +
                                  " deg is within the gimbal-lock guard");
    }
    const double yaw = std::atan2(r(1, 0), r(0, 0));
    const double roll = std::atan2(r(2, 1), r(2, 2));
    return {yaw / kDeg, pitch / kDeg, roll / kDeg};
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ConfigError(std::string("non-finite ") + what);
    }
}

} // namespace

std::string_view to_string(Convention c) { return c == Convention::MIV ? "MIV" : "CV"; }

Convention parse_convention(std::string_view tag) {
    if (tag == "MIV") return Convention::MIV;
    if (tag == "CV") return Convention::CV;
    throw ParseError("unknown camera convention '" + std::string(tag) + "'");
}

Eigen::Matrix3d miv_to_cv_basis() {
    Eigen::Matrix3d b;
    // rows: CV x = -MIV y (right), CV y = -MIV z (down), CV z = MIV x (forward)
    b << 0, -1, 0, 0, 0, -1, 1, 0, 0;
    return b;
}

Eigen::Matrix3d euler_to_rotation(double yaw_deg, double pitch_deg, double roll_deg, Convention convention) {
    require_finite(yaw_deg, "yaw");
    require_finite(pitch_deg, "pitch");
    require_finite(roll_deg, "roll");
    const Eigen::Matrix3d r = miv_rotation(yaw_deg, pitch_deg, roll_deg);
    if (convention == Convention::MIV) {
        return r;
    }
    return miv_to_cv_basis() * r.transpose();
}

EulerAngles rotation_to_euler(const Eigen::Matrix3d& rotation, Convention convention) {
    if (!rotation.allFinite()) {
        throw ConfigError("non-finite rotation matrix");
    }
    const double ortho_err = (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho_err > 1e-6 || rotation.determinant() < 0) {
        throw ConfigError("rotation matrix is not a proper orthonormal matrix");
    }
    if (convention == Convention::MIV) {
        return decompose_miv(rotation);
    }
    return decompose_miv(rotation.transpose() * miv_to_cv_basis());
}

Eigen::Matrix3d pose_rotation(const Pose& pose) {
    return euler_to_rotation(pose.yaw_deg, pose.pitch_deg, pose.roll_deg, pose.convention);
}

CameraParams convert_convention(const CameraParams& camera, Convention target) {
    if (camera.pose.convention == target) {
        return camera;
    }
    const Eigen::Matrix3d src = pose_rotation(camera.pose);
    Eigen::Matrix3d dst;
    if (target == Convention::CV) {
        dst = miv_to_cv_basis() * src.transpose();
    } else {
        dst = (miv_to_cv_basis().transpose() * src).transpose();
    }
    CameraParams out = camera;
    const EulerAngles e = rotation_to_euler(dst, target);
    out.pose.yaw_deg = e.yaw_deg;
    out.pose.pitch_deg = e.pitch_deg;
    out.pose.roll_deg = e.roll_deg;
    out.pose.convention = target;
    return out;
}

void validate(const CameraParams& camera) {
    const auto& k = camera.intrinsics;
    if (!(k.focal_x > 0) || !(k.focal_y > 0) || !std::isfinite(k.focal_x) || !std::isfinite(k.focal_y)) {
        throw ConfigError("camera " + std::to_string(camera.id) + ": focal lengths must be positive");
    }
    if (k.width < 8 || k.height < 8) {
        throw ConfigError("camera " + std::to_string(camera.id) + ": image must be at least 8x8");
    }
    if (!(k.principal_x >= 0 && k.principal_x <= k.width) || !(k.principal_y >= 0 && k.principal_y <= k.height)) {
        throw ConfigError("camera " + std::to_string(camera.id) + ": principal point outside image");
    }
    require_finite(camera.pose.yaw_deg, "yaw");
    require_finite(camera.pose.pitch_deg, "pitch");
    require_finite(camera.pose.roll_deg, "roll");
    if (!camera.pose.position.allFinite()) {
        throw ConfigError("camera " + std::to_string(camera.id) + ": non-finite position");
    }
}

std::optional<Projection> project(const Eigen::Vector3d& world, const CameraParams& camera) {
    const auto& k = camera.intrinsics;
    const Eigen::Matrix3d r = pose_rotation(camera.pose);
    const Eigen::Vector3d d = world - camera.pose.position;
    if (camera.pose.convention == Convention::MIV) {
        const Eigen::Vector3d p = r.transpose() * d;
        if (!(p.x() > 0)) {
            return std::nullopt;
        }
        return Projection{{k.principal_x - k.focal_x * p.y() / p.x(), k.principal_y - k.focal_y * p.z() / p.x()},
                          p.x()};
    }
    const Eigen::Vector3d p = r * d;
    if (!(p.z() > 0)) {
        return std::nullopt;
    }
    return Projection{{k.principal_x + k.focal_x * p.x() / p.z(), k.principal_y + k.focal_y * p.y() / p.z()},
                      p.z()};
}

Eigen::Vector3d unproject(const Eigen::Vector2d& pixel, double depth, const CameraParams& camera) {
    if (!(depth > 0) || !std::isfinite(depth)) {
        throw ConfigError("unproject requires positive finite depth");
    }
    const auto& k = camera.intrinsics;
    const Eigen::Matrix3d r = pose_rotation(camera.pose);
    const double a = (pixel.x() - k.principal_x) / k.focal_x * depth;
    const double b = (pixel.y() - k.principal_y) / k.focal_y * depth;
    if (camera.pose.convention == Convention::MIV) {
        return camera.pose.position + r * Eigen::Vector3d(depth, -a, -b);
    }
    return camera.pose.position + r.transpose() * Eigen::Vector3d(a, b, depth);
}

Eigen::Matrix3d world_to_cv_camera(const CameraParams& camera) {
    const Eigen::Matrix3d r = pose_rotation(camera.pose);
    if (camera.pose.convention == Convention::CV) {
        return r;
    }
    return miv_to_cv_basis() * r.transpose();
}

Eigen::Vector3d forward_axis(const CameraParams& camera) {
    return world_to_cv_camera(camera).row(2).transpose();
}

PinholeCV to_pinhole(const CameraParams& camera) {
    const auto& k = camera.intrinsics;
    PinholeCV p;
    p.K << k.focal_x, 0, k.principal_x, 0, k.focal_y, k.principal_y, 0, 0, 1;
    p.R = world_to_cv_camera(camera);
    p.C = camera.pose.position;
    return p;
}

CameraParams scaled(const CameraParams& camera, int factor) {
    CameraParams out = camera;
    if (factor <= 1) {
        return out;
    }
    auto& k = out.intrinsics;
    const double f = static_cast<double>(factor);
    // pixel centers: fine pixel i maps to coarse (i - (f-1)/2) / f
    k.focal_x /= f;
    k.focal_y /= f;
    k.principal_x = (k.principal_x - (f - 1) / 2) / f;
    k.principal_y = (k.principal_y - (f - 1) / 2) / f;
    k.width /= factor;
    k.height /= factor;
    return out;
}

} // namespace ivb
