// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasterizer/rasterizer.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "common/parallel.hpp"

namespace ivb {

ViewTransform::ViewTransform(const CameraParams& camera)
    : world_to_cam(world_to_cv_camera(camera)), center(camera.pose.position), intrinsics(camera.intrinsics) {}

std::optional<ProjectedSplat> project_gaussian(const Gaussian& g, const CameraParams& camera,
                                               const RasterOptions& options) {
    return project_gaussian(g, ViewTransform(camera), options);
}

std::optional<ProjectedSplat> project_gaussian(const Gaussian& g, const ViewTransform& view,
                                               const RasterOptions& options) {
    const auto& k = view.intrinsics;
    const Eigen::Vector3d p = view.world_to_cam * (g.center() - view.center);
    if (!(p.z() > options.near_plane)) {
        return std::nullopt;
    }
    const double z = p.z();
    // Keep the Jacobian well conditioned for splats far outside the frustum.
    const double lim_x = 1.3 * std::max(k.principal_x, k.width - k.principal_x) / k.focal_x;
    const double lim_y = 1.3 * std::max(k.principal_y, k.height - k.principal_y) / k.focal_y;
    const double tx = std::clamp(p.x() / z, -lim_x, lim_x) * z;
    const double ty = std::clamp(p.y() / z, -lim_y, lim_y) * z;

    Eigen::Matrix<double, 2, 3> jac;
    jac << k.focal_x / z, 0, -k.focal_x * tx / (z * z), 0, k.focal_y / z, -k.focal_y * ty / (z * z);
    const Eigen::Matrix3d cov_cam = view.world_to_cam * covariance_of(g) * view.world_to_cam.transpose();
    Eigen::Matrix2d cov2d = jac * cov_cam * jac.transpose();
    cov2d(0, 0) += options.aa_floor;
    cov2d(1, 1) += options.aa_floor;

    const double det = cov2d(0, 0) * cov2d(1, 1) - cov2d(0, 1) * cov2d(1, 0);
    if (!(det > 0)) {
        return std::nullopt;
    }
    ProjectedSplat s;
    const double mx = k.principal_x + k.focal_x * p.x() / z;
    const double my = k.principal_y + k.focal_y * p.y() / z;
    const double rx = std::sqrt(kFootprintSigma2 * cov2d(0, 0));
    const double ry = std::sqrt(kFootprintSigma2 * cov2d(1, 1));
    const double x0 = std::ceil(mx - rx), x1 = std::floor(mx + rx);
    const double y0 = std::ceil(my - ry), y1 = std::floor(my + ry);
    if (x1 < 0 || y1 < 0 || x0 > k.width - 1 || y0 > k.height - 1 || x0 > x1 || y0 > y1) {
        return std::nullopt;
    }
    s.x_min = static_cast<int>(std::max(x0, 0.0));
    s.x_max = static_cast<int>(std::min(x1, static_cast<double>(k.width - 1)));
    s.y_min = static_cast<int>(std::max(y0, 0.0));
    s.y_max = static_cast<int>(std::min(y1, static_cast<double>(k.height - 1)));
    s.mean_x = static_cast<float>(mx);
    s.mean_y = static_cast<float>(my);
    s.cov_xx = static_cast<float>(cov2d(0, 0));
    s.cov_xy = static_cast<float>(cov2d(0, 1));
    s.cov_yy = static_cast<float>(cov2d(1, 1));
    s.conic_a = static_cast<float>(cov2d(1, 1) / det);
    s.conic_b = static_cast<float>(-cov2d(0, 1) / det);
    s.conic_c = static_cast<float>(cov2d(0, 0) / det);
    s.depth = static_cast<float>(z);
    s.opacity = g.opacity;
    return s;
}

TileBins bin_tiles(std::span<const ProjectedSplat> splats, int width, int height, int tile) {
    if (tile <= 0 || width <= 0 || height <= 0) {
        throw ConfigError("bin_tiles: tile size and image size must be positive");
    }
    TileBins bins;
    bins.tile = tile;
    bins.tiles_x = (width + tile - 1) / tile;
    bins.tiles_y = (height + tile - 1) / tile;
    const std::size_t tile_count = static_cast<std::size_t>(bins.tiles_x) * bins.tiles_y;
    std::vector<std::uint32_t> counts(tile_count + 1, 0);
    for (const auto& s : splats) {
        for (int ty = s.y_min / tile; ty <= s.y_max / tile; ++ty) {
            for (int tx = s.x_min / tile; tx <= s.x_max / tile; ++tx) {
                ++counts[static_cast<std::size_t>(ty) * bins.tiles_x + tx];
            }
        }
    }
    bins.offsets.assign(tile_count + 1, 0);
    for (std::size_t t = 0; t < tile_count; ++t) {
        bins.offsets[t + 1] = bins.offsets[t] + counts[t];
    }
    bins.entries.resize(bins.offsets[tile_count]);
    std::vector<std::uint32_t> cursor(bins.offsets.begin(), bins.offsets.end() - 1);
    for (std::uint32_t i = 0; i < splats.size(); ++i) {
        const auto& s = splats[i];
        for (int ty = s.y_min / tile; ty <= s.y_max / tile; ++ty) {
            for (int tx = s.x_min / tile; tx <= s.x_max / tile; ++tx) {
                bins.entries[cursor[static_cast<std::size_t>(ty) * bins.tiles_x + tx]++] = i;
            }
        }
    }
    auto before = [&](std::uint32_t a, std::uint32_t b) {
        if (splats[a].depth != splats[b].depth) return splats[a].depth < splats[b].depth;
        return splats[a].index < splats[b].index;
    };
    for (std::size_t t = 0; t < tile_count; ++t) {
        std::sort(bins.entries.begin() + bins.offsets[t], bins.entries.begin() + bins.offsets[t + 1], before);
    }
    return bins;
}

namespace {

// Visits the splats compositing pixel (px, py) in front-to-back order, calling
// visit(entry, weight) for each contribution. Returns final transmittance.
template <typename Visit>
inline float traverse_pixel(std::span<const std::uint32_t> list, std::span<const ProjectedSplat> splats, int px,
                            int py, Visit&& visit) {
    float transmittance = 1.0f;
    const float fx = static_cast<float>(px);
    const float fy = static_cast<float>(py);
    for (std::uint32_t e : list) {
        const ProjectedSplat& s = splats[e];
        if (px < s.x_min || px > s.x_max || py < s.y_min || py > s.y_max) {
            continue;
        }
        const float dx = fx - s.mean_x;
        const float dy = fy - s.mean_y;
        const float power = 0.5f * (s.conic_a * dx * dx + s.conic_c * dy * dy) + s.conic_b * dx * dy;
        if (power > 0.5f * kFootprintSigma2 || power < 0.0f) {
            continue;
        }
        const float a = s.opacity * std::exp(-power);
        visit(e, a * transmittance);
        transmittance *= 1.0f - a;
        if (transmittance < kMinTransmittance) {
            break;
        }
    }
    return transmittance;
}

} // namespace

RenderOutput composite(const TileBins& bins, std::span<const ProjectedSplat> splats, int width, int height,
                       const std::array<float, 3>& background, int workers) {
    RenderOutput out;
    out.color = ImageF(width, height, 3);
    out.alpha = ImageF(width, height, 1);
    out.depth = ImageF(width, height, 1);
    out.contrib_count = Image<std::int32_t>(width, height, 1);
    const std::size_t tile_count = static_cast<std::size_t>(bins.tiles_x) * bins.tiles_y;
    parallel_for(tile_count, workers, [&](std::size_t t) {
        const int tx = static_cast<int>(t % bins.tiles_x);
        const int ty = static_cast<int>(t / bins.tiles_x);
        const auto list = bins.list(tx, ty);
        const int x_end = std::min(width, (tx + 1) * bins.tile);
        const int y_end = std::min(height, (ty + 1) * bins.tile);
        for (int py = ty * bins.tile; py < y_end; ++py) {
            for (int px = tx * bins.tile; px < x_end; ++px) {
                float c[3] = {0, 0, 0};
                float d = 0;
                std::int32_t n = 0;
                const float t_final = traverse_pixel(list, splats, px, py, [&](std::uint32_t e, float w) {
                    const ProjectedSplat& s = splats[e];
                    c[0] += w * s.color[0];
                    c[1] += w * s.color[1];
                    c[2] += w * s.color[2];
                    d += w * s.depth;
                    ++n;
                });
                const float alpha = 1.0f - t_final;
                for (int ch = 0; ch < 3; ++ch) {
                    out.color.at(px, py, ch) = c[ch] + background[ch] * t_final;
                }
                out.alpha.at(px, py) = alpha;
                out.depth.at(px, py) = n > 0 ? d / std::max(alpha, 1e-6f) : 0.0f;
                out.contrib_count.at(px, py) = n;
            }
        }
    });
    return out;
}

PreparedView prepare_view(const GaussianScene& scene, const CameraParams& camera, const RasterOptions& options) {
    PreparedView view;
    view.width = camera.intrinsics.width;
    view.height = camera.intrinsics.height;
    const ViewTransform transform(camera);
    const std::size_t n = scene.gaussians.size();
    std::vector<std::optional<ProjectedSplat>> projected(n);
    constexpr std::size_t kChunk = 4096;
    parallel_for((n + kChunk - 1) / kChunk, options.workers, [&](std::size_t chunk) {
        const std::size_t end = std::min(n, (chunk + 1) * kChunk);
        for (std::size_t i = chunk * kChunk; i < end; ++i) {
            const Gaussian& g = scene.gaussians[i];
            auto s = project_gaussian(g, transform, options);
            if (!s) continue;
            s->index = static_cast<std::uint32_t>(i);
            const Eigen::Vector3d dir = (g.center() - transform.center).normalized();
            auto rgb = eval_sh_raw(g.sh, scene.sh_degree, dir);
            for (int c = 0; c < 3; ++c) s->color[c] = std::clamp(rgb[c], 0.0f, 1.0f);
            projected[i] = *s;
        }
    });
    view.splats.reserve(n);
    for (auto& s : projected) {
        if (s) view.splats.push_back(*s);
    }
    view.bins = bin_tiles(view.splats, view.width, view.height, options.tile);
    return view;
}

RenderOutput composite(const PreparedView& view, const RasterOptions& options) {
    return composite(view.bins, view.splats, view.width, view.height, options.background, options.workers);
}

RenderOutput render(const GaussianScene& scene, const CameraParams& camera, const RasterOptions& options) {
    return composite(prepare_view(scene, camera, options), options);
}

std::vector<SplatFeedback> accumulate_feedback(const PreparedView& view, const ImageF& residual,
                                               std::size_t scene_size, int workers) {
    if (residual.width != view.width || residual.height != view.height || residual.channels != 3) {
        throw ConfigError("accumulate_feedback: residual image does not match the view");
    }
    const auto& bins = view.bins;
    std::vector<SplatFeedback> partial(bins.entries.size());
    const std::size_t tile_count = static_cast<std::size_t>(bins.tiles_x) * bins.tiles_y;
    parallel_for(tile_count, workers, [&](std::size_t t) {
        const int tx = static_cast<int>(t % bins.tiles_x);
        const int ty = static_cast<int>(t / bins.tiles_x);
        const auto list = bins.list(tx, ty);
        const std::uint32_t base = bins.offsets[t];
        const int x_end = std::min(view.width, (tx + 1) * bins.tile);
        const int y_end = std::min(view.height, (ty + 1) * bins.tile);
        // entry -> slot in this tile's list
        for (int py = ty * bins.tile; py < y_end; ++py) {
            for (int px = tx * bins.tile; px < x_end; ++px) {
                const float r0 = residual.at(px, py, 0);
                const float r1 = residual.at(px, py, 1);
                const float r2 = residual.at(px, py, 2);
                const float sq = r0 * r0 + r1 * r1 + r2 * r2;
                std::uint32_t slot = 0;
                traverse_pixel(list, view.splats, px, py, [&](std::uint32_t e, float w) {
                    while (list[slot] != e) ++slot;
                    SplatFeedback& f = partial[base + slot];
                    f.weight += w;
                    f.residual[0] += w * r0;
                    f.residual[1] += w * r1;
                    f.residual[2] += w * r2;
                    f.sq_residual += w * sq;
                });
            }
        }
    });
    std::vector<SplatFeedback> out(scene_size);
    for (std::size_t i = 0; i < bins.entries.size(); ++i) {
        const auto& p = partial[i];
        if (p.weight == 0.0f) continue;
        SplatFeedback& f = out[view.splats[bins.entries[i]].index];
        f.weight += p.weight;
        for (int c = 0; c < 3; ++c) f.residual[c] += p.residual[c];
        f.sq_residual += p.sq_residual;
    }
    return out;
}

} // namespace ivb
