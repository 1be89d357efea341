// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasterizer/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "common/bytes.hpp"
#include "common/error.hpp"

namespace ivb {

void GaussianScene::update_bounds() {
    if (gaussians.empty()) {
        bbox_min.setZero();
        bbox_max.setZero();
        return;
    }
    bbox_min = gaussians.front().center();
    bbox_max = bbox_min;
    for (const auto& g : gaussians) {
        bbox_min = bbox_min.cwiseMin(g.center());
        bbox_max = bbox_max.cwiseMax(g.center());
    }
}

void validate(const Gaussian& g) {
    for (float v : g.mu) {
        if (!std::isfinite(v)) throw ConfigError("gaussian center is not finite");
    }
    double n2 = 0;
    for (float v : g.rot) n2 += static_cast<double>(v) * v;
    if (std::abs(std::sqrt(n2) - 1.0) > kQuatNormTolerance) {
        throw ConfigError("gaussian rotation is not a unit quaternion");
    }
    for (float s : g.log_scale) {
        if (!(s >= kMinLogScale && s <= kMaxLogScale)) throw ConfigError("gaussian log_scale out of range");
    }
    if (!(g.opacity > 0.0f && g.opacity < 1.0f)) {
        throw ConfigError("gaussian opacity must lie strictly inside (0, 1)");
    }
    for (float v : g.sh) {
        if (!std::isfinite(v)) throw ConfigError("gaussian SH coefficient is not finite");
    }
}

void validate(const GaussianScene& scene) {
    if (scene.sh_degree < 0 || scene.sh_degree > kMaxShDegree) {
        throw ConfigError("sh_degree must be in [0, 2]");
    }
    const int used = sh_coeff_count(scene.sh_degree) * 3;
    for (const auto& g : scene.gaussians) {
        validate(g);
        for (int i = used; i < kMaxShCoeffs * 3; ++i) {
            if (g.sh[i] != 0.0f) throw ConfigError("gaussian carries SH coefficients above the scene degree");
        }
        const Eigen::Vector3d c = g.center();
        if ((c.array() < scene.bbox_min.array()).any() || (c.array() > scene.bbox_max.array()).any()) {
            throw ConfigError("scene bbox does not contain all centers");
        }
    }
}

std::array<float, 4> normalized_quat(const std::array<float, 4>& q) {
    double n = 0;
    for (float v : q) n += static_cast<double>(v) * v;
    n = std::sqrt(n);
    if (!(n > 0)) return {1, 0, 0, 0};
    return {static_cast<float>(q[0] / n), static_cast<float>(q[1] / n), static_cast<float>(q[2] / n),
            static_cast<float>(q[3] / n)};
}

Eigen::Matrix3d covariance_of(const Gaussian& g) {
    Eigen::Quaterniond q(g.rot[0], g.rot[1], g.rot[2], g.rot[3]);
    q.normalize();
    const Eigen::Matrix3d r = q.toRotationMatrix();
    const Eigen::Vector3d var(std::exp(2.0 * g.log_scale[0]), std::exp(2.0 * g.log_scale[1]),
                              std::exp(2.0 * g.log_scale[2]));
    return r * var.asDiagonal() * r.transpose();
}

void sh_basis(int degree, const Eigen::Vector3d& dir, float* out) {
    constexpr double c1 = 0.4886025119029199;
    constexpr double c2[] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005, -1.0925484305920792,
                             0.5462742152960396};
    const double x = dir.x(), y = dir.y(), z = dir.z();
    out[0] = static_cast<float>(kShC0);
    if (degree < 1) return;
    out[1] = static_cast<float>(-c1 * y);
    out[2] = static_cast<float>(c1 * z);
    out[3] = static_cast<float>(-c1 * x);
    if (degree < 2) return;
    out[4] = static_cast<float>(c2[0] * x * y);
    out[5] = static_cast<float>(c2[1] * y * z);
    out[6] = static_cast<float>(c2[2] * (2 * z * z - x * x - y * y));
    out[7] = static_cast<float>(c2[3] * x * z);
    out[8] = static_cast<float>(c2[4] * (x * x - y * y));
}

std::array<float, 3> eval_sh_raw(std::span<const float> coeffs, int degree, const Eigen::Vector3d& dir) {
    float basis[kMaxShCoeffs];
    sh_basis(degree, dir, basis);
    std::array<float, 3> rgb{0, 0, 0};
    const int n = sh_coeff_count(degree);
    for (int k = 0; k < n; ++k) {
        for (int c = 0; c < 3; ++c) rgb[c] += basis[k] * coeffs[k * 3 + c];
    }
    return rgb;
}

std::array<float, 3> eval_sh(std::span<const float> coeffs, int degree, const Eigen::Vector3d& dir) {
    const double n = dir.norm();
    if (!(n > 0) || !std::isfinite(n)) {
        throw ConfigError("eval_sh: view direction must be non-zero");
    }
    if (degree < 0 || degree > kMaxShDegree || coeffs.size() < static_cast<std::size_t>(sh_coeff_count(degree) * 3)) {
        throw ConfigError("eval_sh: coefficient count does not match degree");
    }
    auto rgb = eval_sh_raw(coeffs, degree, dir / n);
    for (auto& v : rgb) v = std::clamp(v, 0.0f, 1.0f);
    return rgb;
}

std::vector<std::uint8_t> encode_gsc1(const GaussianScene& scene) {
    ByteWriter w;
    w.text("GSC1");
    w.u32(static_cast<std::uint32_t>(scene.gaussians.size()));
    w.u8(static_cast<std::uint8_t>(scene.sh_degree));
    const int ncoef = sh_coeff_count(scene.sh_degree) * 3;
    for (const auto& g : scene.gaussians) {
        for (float v : g.mu) w.f32(v);
        for (float v : g.rot) w.f32(v);
        for (float v : g.log_scale) w.f32(v);
        w.f32(g.opacity);
        for (int i = 0; i < ncoef; ++i) w.f32(g.sh[i]);
    }
    return w.take();
}

GaussianScene decode_gsc1(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    const auto magic = r.bytes(4, "magic");
    if (!std::equal(magic.begin(), magic.end(), "GSC1")) {
        throw ParseError("bad GSC1 magic at byte offset 0");
    }
    const std::uint32_t count = r.u32("splat count");
    GaussianScene scene;
    scene.sh_degree = r.u8("sh_degree");
    if (scene.sh_degree > kMaxShDegree) {
        throw ParseError("GSC1 sh_degree " + std::to_string(scene.sh_degree) + " unsupported");
    }
    const int ncoef = sh_coeff_count(scene.sh_degree) * 3;
    const std::size_t per = static_cast<std::size_t>(11 + ncoef) * 4;
    if (r.remaining() / per < count) {
        throw ParseError("GSC1 truncated: header declares " + std::to_string(count) + " splats, " +
                         std::to_string(r.remaining()) + " bytes available");
    }
    scene.gaussians.resize(count);
    for (auto& g : scene.gaussians) {
        for (float& v : g.mu) v = r.f32("mu");
        for (float& v : g.rot) v = r.f32("rot");
        for (float& v : g.log_scale) v = r.f32("log_scale");
        g.opacity = r.f32("opacity");
        for (int i = 0; i < ncoef; ++i) g.sh[i] = r.f32("sh");
    }
    if (r.remaining() != 0) {
        throw ParseError("GSC1 has " + std::to_string(r.remaining()) + " trailing bytes at offset " +
                         std::to_string(r.offset()));
    }
    scene.update_bounds();
    try {
        validate(scene);
    } catch (const ConfigError& e) {
        throw ParseError(std::string("GSC1 content invalid: ") + e.what());
    }
    return scene;
}

void write_gsc1(const std::string& path, const GaussianScene& scene) { write_file(path, encode_gsc1(scene)); }

GaussianScene read_gsc1(const std::string& path) { return decode_gsc1(read_file(path)); }

} // namespace ivb
