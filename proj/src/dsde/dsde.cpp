// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "dsde/dsde.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "common/error.hpp"
#include "common/parallel.hpp"

namespace ivb {

namespace {

ImageF luma_plane(const ImageF& rgb) {
    ImageF out(rgb.width, rgb.height, 1);
    for (std::size_t p = 0; p < rgb.pixel_count(); ++p) {
        const float* px = rgb.data.data() + p * 3;
        out.data[p] = 0.299f * px[0] + 0.587f * px[1] + 0.114f * px[2];
    }
    return out;
}

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

/// Bilinear sample of `channels` values at (x, y), which must lie inside the image.
inline void bilinear(const ImageF& img, float x, float y, float* out) {
    const int x0 = std::min(static_cast<int>(x), img.width - 1), y0 = std::min(static_cast<int>(y), img.height - 1);
    const int x1 = std::min(x0 + 1, img.width - 1), y1 = std::min(y0 + 1, img.height - 1);
    const float fx = x - x0, fy = y - y0;
    const int c = img.channels;
    const float* p00 = &img.data[img.index(x0, y0)];
    const float* p10 = &img.data[img.index(x1, y0)];
    const float* p01 = &img.data[img.index(x0, y1)];
    const float* p11 = &img.data[img.index(x1, y1)];
    for (int k = 0; k < c; ++k) {
        const float top = p00[k] + fx * (p10[k] - p00[k]);
        const float bot = p01[k] + fx * (p11[k] - p01[k]);
        out[k] = top + fy * (bot - top);
    }
}

constexpr int kDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

struct SourceData {
    const ImageF* rgb;
    ImageF luma;
    Eigen::Matrix3d h;  // maps ref homogeneous pixel to source ray direction
    Eigen::Vector3d b;  // source translation term
};

} // namespace

std::vector<double> inverse_depth_planes(int n, double depth_min, double depth_max) {
    if (n < 2) throw ConfigError("cost volume needs at least 2 planes");
    if (!(depth_min > 0) || !(depth_max > depth_min)) throw ConfigError("depth range must satisfy 0 < min < max");
    std::vector<double> planes(static_cast<std::size_t>(n));
    const double inv_near = 1.0 / depth_min, inv_far = 1.0 / depth_max;
    for (int i = 0; i < n; ++i) {
        // i = 0 is the nearest plane
        const double inv = inv_near + (inv_far - inv_near) * i / (n - 1);
        planes[static_cast<std::size_t>(i)] = 1.0 / inv;
    }
    return planes;
}

CostVolume build_cost_volume(const ImageF& ref, const CameraParams& ref_camera, std::span<const ImageF> sources,
                             std::span<const CameraParams> source_cameras, int planes, double depth_min,
                             double depth_max, int workers) {
    if (sources.empty()) throw ConfigError("cost volume needs at least one source view");
    if (sources.size() != source_cameras.size()) throw ConfigError("source images and cameras differ in count");
    if (ref.channels != 3) throw ConfigError("cost volume expects RGB images");
    CostVolume vol;
    vol.ref_view = ref_camera.id;
    vol.width = ref.width;
    vol.height = ref.height;
    vol.planes = inverse_depth_planes(planes, depth_min, depth_max);
    vol.costs.assign(static_cast<std::size_t>(planes) * ref.pixel_count(), 0.0f);

    const PinholeCV pr = to_pinhole(ref_camera);
    const Eigen::Matrix3d kr_inv = pr.K.inverse();
    std::vector<SourceData> src;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (sources[i].channels != 3) throw ConfigError("cost volume expects RGB images");
        const PinholeCV ps = to_pinhole(source_cameras[i]);
        src.push_back({&sources[i], luma_plane(sources[i]), ps.K * ps.R * pr.R.transpose() * kr_inv,
                       ps.K * ps.R * (pr.C - ps.C)});
    }
    const ImageF ref_luma = luma_plane(ref);
    const int w = ref.width, h = ref.height;
    const float inv_sources = 1.0f / static_cast<float>(src.size());

    parallel_for(static_cast<std::size_t>(h), workers, [&](std::size_t row) {
        const int y = static_cast<int>(row);
        std::array<float, 27> ref_win;
        for (int x = 0; x < w; ++x) {
            // reference window and census
            for (int k = 0; k < 9; ++k) {
                const int xx = clampi(x + k % 3 - 1, 0, w - 1), yy = clampi(y + k / 3 - 1, 0, h - 1);
                for (int c = 0; c < 3; ++c) ref_win[k * 3 + c] = ref.at(xx, yy, c);
            }
            std::uint32_t ref_census = 0;
            const float rc = ref_luma.at(x, y);
            for (int k = 0; k < 8; ++k) {
                const float v = ref_luma.at(clampi(x + kDx[k], 0, w - 1), clampi(y + kDy[k], 0, h - 1));
                ref_census |= static_cast<std::uint32_t>(v < rc) << k;
            }
            const Eigen::Vector3d pix(x, y, 1.0);
            for (const auto& s : src) {
                const Eigen::Vector3d a = s.h * pix;
                const int sw = s.rgb->width, sh = s.rgb->height;
                for (int d = 0; d < planes; ++d) {
                    const Eigen::Vector3d hp = a * vol.planes[static_cast<std::size_t>(d)] + s.b;
                    float cost = kOutOfFramePenalty;
                    if (hp.z() > 0) {
                        const double us = hp.x() / hp.z(), vs = hp.y() / hp.z();
                        if (us >= -kFrameSlack && vs >= -kFrameSlack && us <= sw - 1 + kFrameSlack && vs <= sh - 1 + kFrameSlack) {
                            float sad = 0;
                            std::array<float, 9> lum;
                            for (int k = 0; k < 9; ++k) {
                                const float sx = std::clamp(static_cast<float>(us) + (k % 3 - 1), 0.0f, sw - 1.0f);
                                const float sy = std::clamp(static_cast<float>(vs) + (k / 3 - 1), 0.0f, sh - 1.0f);
                                float px[3];
                                bilinear(*s.rgb, sx, sy, px);
                                for (int c = 0; c < 3; ++c) sad += std::abs(px[c] - ref_win[k * 3 + c]);
                                lum[k] = 0.299f * px[0] + 0.587f * px[1] + 0.114f * px[2];
                            }
                            std::uint32_t census = 0;
                            for (int k = 0; k < 8; ++k) {
                                const int idx = (kDy[k] + 1) * 3 + (kDx[k] + 1);
                                census |= static_cast<std::uint32_t>(lum[idx] < lum[4]) << k;
                            }
                            cost = kSadWeight * sad / 27.0f +
                                   kCensusWeight * static_cast<float>(std::popcount(census ^ ref_census)) / 8.0f;
                        }
                    }
                    vol.at(x, y, d) += cost * inv_sources;
                }
            }
        }
    });
    return vol;
}

double parabola_offset(double cm, double c0, double cp) {
    const double denom = cm - 2 * c0 + cp;
    if (!(denom > 0)) return 0.0;
    return std::clamp(0.5 * (cm - cp) / denom, -0.5, 0.5);
}

DepthMap estimate_depth(const CostVolume& volume, int workers) {
    const int w = volume.width, h = volume.height, n = static_cast<int>(volume.planes.size());
    if (n < 2 || w <= 0 || h <= 0) throw ConfigError("estimate_depth: empty cost volume");
    // 3x3 box aggregation, averaging only in-image neighbors
    std::vector<float> agg(volume.costs.size());
    parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t d) {
        const float* src = volume.costs.data() + d * w * h;
        float* dst = agg.data() + d * w * h;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                float s = 0;
                int cnt = 0;
                for (int yy = std::max(0, y - 1); yy <= std::min(h - 1, y + 1); ++yy) {
                    for (int xx = std::max(0, x - 1); xx <= std::min(w - 1, x + 1); ++xx) {
                        s += src[yy * w + xx];
                        ++cnt;
                    }
                }
                dst[y * w + x] = s / static_cast<float>(cnt);
            }
        }
    });
    DepthMap out{ImageF(w, h, 1), ImageU8(w, h, 1), ImageF(w, h, 1)};
    const double inv_near = 1.0 / volume.planes.front(), inv_far = 1.0 / volume.planes.back();
    parallel_for(static_cast<std::size_t>(h), workers, [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < w; ++x) {
            const std::size_t p = static_cast<std::size_t>(y) * w + x;
            auto c = [&](int d) { return static_cast<double>(agg[static_cast<std::size_t>(d) * w * h + p]); };
            int best = 0;
            for (int d = 1; d < n; ++d) {
                if (c(d) < c(best)) best = d;
            }
            double second = std::numeric_limits<double>::infinity();
            for (int d = 0; d < n; ++d) {
                if (std::abs(d - best) > 1) second = std::min(second, c(d));
            }
            double offset = 0;
            if (best > 0 && best < n - 1) offset = parabola_offset(c(best - 1), c(best), c(best + 1));
            const double idx = best + offset;
            const double inv = inv_near + (inv_far - inv_near) * idx / (n - 1);
            out.depth.data[p] = static_cast<float>(1.0 / inv);
            double conf = 0;
            if (std::isfinite(second) && second > 0) conf = std::clamp(1.0 - c(best) / second, 0.0, 1.0);
            const bool ok = conf >= kMinConfidence;
            out.valid.data[p] = ok ? 1 : 0;
            out.conf.data[p] = ok ? static_cast<float>(conf) : 0.0f;
        }
    });
    return out;
}

DepthMap depth_from_render(const ImageF& depth, const ImageF& alpha, float min_alpha) {
    DepthMap out{depth, ImageU8(depth.width, depth.height, 1), ImageF(depth.width, depth.height, 1)};
    for (std::size_t p = 0; p < depth.pixel_count(); ++p) {
        const bool ok = alpha.data[p] >= min_alpha && depth.data[p] > 0;
        out.valid.data[p] = ok ? 1 : 0;
        out.conf.data[p] = ok ? 1.0f : 0.0f;
    }
    return out;
}

ImageU8 dibr_synthesize(std::span<const DibrSource> sources, const CameraParams& target) {
    const int w = target.intrinsics.width, h = target.intrinsics.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const PinholeCV pt = to_pinhole(target);

    struct Candidate {
        int pixel;
        float z;
        float weight;
        std::array<float, 3> color;
    };
    std::vector<Candidate> cands;
    for (const auto& s : sources) {
        const ImageU8& img = *s.image;
        const DepthMap& dm = *s.depth;
        const PinholeCV ps = to_pinhole(*s.camera);
        const Eigen::Matrix3d back = ps.R.transpose() * ps.K.inverse();
        const Eigen::Matrix3d kr = pt.K * pt.R;
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                const std::size_t p = static_cast<std::size_t>(y) * img.width + x;
                if (!dm.valid.data[p]) continue;
                const double d = dm.depth.data[p];
                const Eigen::Vector3d world = ps.C + back * Eigen::Vector3d(x, y, 1.0) * d;
                const Eigen::Vector3d hp = kr * (world - pt.C);
                if (!(hp.z() > 1e-6)) continue;
                const double u = hp.x() / hp.z(), v = hp.y() / hp.z();
                if (!(u > -1 && v > -1 && u < w && v < h)) continue;
                const Eigen::Vector3d ray_s = (world - ps.C).normalized(), ray_t = (world - pt.C).normalized();
                const double angle = std::acos(std::clamp(ray_s.dot(ray_t), -1.0, 1.0));
                const double base = dm.conf.data[p] / (0.01 + angle);
                const std::array<float, 3> color{img.at(x, y, 0) / 255.0f, img.at(x, y, 1) / 255.0f,
                                                 img.at(x, y, 2) / 255.0f};
                const int u0 = static_cast<int>(std::floor(u)), v0 = static_cast<int>(std::floor(v));
                const double fu = u - u0, fv = v - v0;
                for (int k = 0; k < 4; ++k) {
                    const int tx = u0 + (k & 1), ty = v0 + (k >> 1);
                    if (tx < 0 || ty < 0 || tx >= w || ty >= h) continue;
                    const double bw = ((k & 1) ? fu : 1 - fu) * ((k >> 1) ? fv : 1 - fv);
                    if (bw <= 0) continue;
                    cands.push_back({ty * w + tx, static_cast<float>(hp.z()), static_cast<float>(base * bw), color});
                }
            }
        }
    }
    std::vector<float> zmin(n, std::numeric_limits<float>::infinity());
    for (const auto& c : cands) zmin[c.pixel] = std::min(zmin[c.pixel], c.z);
    std::vector<double> acc(n * 3, 0.0), wsum(n, 0.0);
    for (const auto& c : cands) {
        if (c.z > zmin[c.pixel] + kZTolerance) continue;
        wsum[c.pixel] += c.weight;
        for (int k = 0; k < 3; ++k) acc[c.pixel * 3 + k] += static_cast<double>(c.weight) * c.color[k];
    }
    std::vector<std::array<float, 3>> color(n);
    std::vector<std::uint8_t> filled(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        if (wsum[p] > 0) {
            for (int k = 0; k < 3; ++k) color[p][k] = static_cast<float>(acc[p * 3 + k] / wsum[p]);
            filled[p] = 1;
        }
    }
    // iterative 8-neighbor diffusion into holes
    for (int pass = 0; pass < kInpaintPasses; ++pass) {
        std::vector<std::uint8_t> next = filled;
        bool any = false;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t p = static_cast<std::size_t>(y) * w + x;
                if (filled[p]) continue;
                std::array<float, 3> sum{0, 0, 0};
                int cnt = 0;
                for (int k = 0; k < 8; ++k) {
                    const int xx = x + kDx[k], yy = y + kDy[k];
                    if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
                    const std::size_t q = static_cast<std::size_t>(yy) * w + xx;
                    if (!filled[q]) continue;
                    for (int c = 0; c < 3; ++c) sum[c] += color[q][c];
                    ++cnt;
                }
                if (cnt == 0) continue;
                for (int c = 0; c < 3; ++c) color[p][c] = sum[c] / static_cast<float>(cnt);
                next[p] = 1;
                any = true;
            }
        }
        filled.swap(next);
        if (!any) break;
    }
    ImageU8 out(w, h, 3, 0);
    for (std::size_t p = 0; p < n; ++p) {
        if (!filled[p]) continue;
        for (int c = 0; c < 3; ++c) out.data[p * 3 + c] = to_u8(color[p][c]);
    }
    return out;
}

DsdeResult dsde_pipeline(std::span<const ImageU8> views, std::span<const CameraParams> cameras,
                         std::span<const CameraParams> targets, const DsdeParams& params) {
    if (views.empty() || views.size() != cameras.size()) throw ConfigError("dsde: views and cameras differ in count");
    DsdeResult out;
    std::vector<ImageF> rgb;
    for (const auto& v : views) rgb.push_back(to_float(v));
    for (std::size_t r = 0; r < views.size(); ++r) {
        if (views.size() == 1) {
            // no partner view: every pixel stays invalid
            DepthMap dm{ImageF(views[r].width, views[r].height, 1, static_cast<float>(params.depth_max)),
                        ImageU8(views[r].width, views[r].height, 1), ImageF(views[r].width, views[r].height, 1)};
            out.depths.push_back(std::move(dm));
            continue;
        }
        std::vector<std::size_t> order;
        for (std::size_t s = 0; s < views.size(); ++s) {
            if (s != r) order.push_back(s);
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return (cameras[a].pose.position - cameras[r].pose.position).norm() <
                   (cameras[b].pose.position - cameras[r].pose.position).norm();
        });
        order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(1, params.max_sources))));
        std::vector<ImageF> src;
        std::vector<CameraParams> src_cams;
        for (auto s : order) {
            src.push_back(rgb[s]);
            src_cams.push_back(cameras[s]);
        }
        const CostVolume vol = build_cost_volume(rgb[r], cameras[r], src, src_cams, params.planes, params.depth_min,
                                                 params.depth_max, params.workers);
        out.depths.push_back(estimate_depth(vol, params.workers));
    }
    std::vector<DibrSource> sources;
    for (std::size_t i = 0; i < views.size(); ++i) sources.push_back({&views[i], &cameras[i], &out.depths[i]});
    out.synthesized.resize(targets.size());
    parallel_for(targets.size(), params.workers, [&](std::size_t t) {
        out.synthesized[t] = dibr_synthesize(sources, targets[t]);
    });
    return out;
}

} // namespace ivb
