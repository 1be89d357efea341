// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "dsgs/dsgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <Eigen/Dense>

#include "common/error.hpp"
#include "common/parallel.hpp"
#include "dsde/dsde.hpp"
#include "rasterizer/rasterizer.hpp"

namespace ivb {

namespace {

/// Color changes below this are not proposed.
constexpr double kDeadBand = 1.0 / 255.0;
/// Ridge weight on higher SH bands, relative to the splat's total weight.
constexpr double kShRidge = 0.5;
/// Minimum compositing weight for a view to count in a splat's statistics.
constexpr float kMinViewWeight = 0.05f;
/// Required drop in window SAD before a depth probe moves a splat.
constexpr double kProbeMargin = 0.002;
/// Spread of per-view residual RMS that marks a splat as inconsistent.
constexpr double kDisagreement = 0.1;

std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    x ^= x >> 33;
    return x;
}

double unit_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return static_cast<double>(mix(seed ^ mix(a * 0x9e3779b97f4a7c15ull + mix(b + 1))) >> 11) * 0x1.0p-53;
}

void check_inputs(std::span<const ImageU8> views, std::span<const CameraParams> cameras) {
    if (views.size() != cameras.size()) throw ConfigError("views and cameras differ in count");
    if (views.size() < 2) throw ConfigError("splat prediction needs at least 2 views");
    for (std::size_t i = 0; i < views.size(); ++i) {
        if (cameras[i].pose.convention != Convention::CV) {
            throw ConfigError("splat prediction expects CV-convention cameras (convert first)");
        }
        if (views[i].channels != 3 || views[i].width != cameras[i].intrinsics.width ||
            views[i].height != cameras[i].intrinsics.height) {
            throw ConfigError("view " + std::to_string(i) + " does not match its camera");
        }
    }
}

Eigen::Vector3d ray_point(const PinholeCV& cam, double u, double v, double depth) {
    return cam.C + cam.R.transpose() * (cam.K.inverse() * Eigen::Vector3d(u, v, 1.0)) * depth;
}

float log_scale_for(int subsample, double depth, double focal) {
    return std::clamp(static_cast<float>(std::log(subsample * depth / focal)), kMinLogScale, kMaxLogScale);
}

void place(Gaussian& g, const Eigen::Vector3d& mu, float log_scale) {
    for (int k = 0; k < 3; ++k) g.mu[k] = static_cast<float>(mu[k]);
    g.log_scale = {log_scale, log_scale, log_scale};
}

bool in_frame(const PinholeCV& cam, const Eigen::Vector3d& x, int width, int height) {
    const Eigen::Vector3d h = cam.K * (cam.R * (x - cam.C));
    if (!(h.z() > 0)) return false;
    const double u = h.x() / h.z(), v = h.y() / h.z();
    return u >= 0 && v >= 0 && u <= width - 1 && v <= height - 1;
}

/// Pixels whose depth no source could confirm over the whole range take the mean inverse depth of
/// their supported 8-neighbors, grown outward pass by pass.
void fill_unsupported(ImageF& depth, std::vector<std::uint8_t>& ok) {
    const int w = depth.width, h = depth.height;
    for (bool grew = true; grew;) {
        grew = false;
        std::vector<std::uint8_t> next = ok;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                if (ok[i]) continue;
                double sum = 0;
                int n = 0;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                        if (!ok[j]) continue;
                        sum += 1.0 / depth.data[j];
                        ++n;
                    }
                }
                if (n == 0) continue;
                depth.data[i] = static_cast<float>(n / sum);
                next[i] = 1;
                grew = true;
            }
        }
        ok.swap(next);
    }
}

struct ViewEval {
    PreparedView prepared;
    ImageF residual;
    double mse = 0;
};

struct State {
    GaussianScene scene;
    std::vector<SplatOrigin> origins;
    std::vector<ViewEval> views;
    double residual = 0;
};

class Refiner {
public:
    Refiner(std::span<const ImageU8> views, std::span<const CameraParams> cameras, const PredictorConfig& config)
        : cameras_(cameras.begin(), cameras.end()), config_(config) {
        for (const auto& v : views) targets_.push_back(to_float(v));
        for (const auto& c : cameras) pinholes_.push_back(to_pinhole(c));
        options_.workers = config.workers;
    }

    State evaluate(GaussianScene scene, std::vector<SplatOrigin> origins) const {
        State s{std::move(scene), std::move(origins), {}, 0};
        for (std::size_t v = 0; v < cameras_.size(); ++v) {
            ViewEval e;
            e.prepared = prepare_view(s.scene, cameras_[v], options_);
            const RenderOutput r = composite(e.prepared, options_);
            e.residual = ImageF(r.color.width, r.color.height, 3);
            double sse = 0;
            for (std::size_t i = 0; i < r.color.data.size(); ++i) {
                const float d = targets_[v].data[i] - r.color.data[i];
                e.residual.data[i] = d;
                sse += static_cast<double>(d) * d;
            }
            e.mse = sse / static_cast<double>(r.color.data.size());
            s.residual += e.mse;
            s.views.push_back(std::move(e));
        }
        s.residual /= static_cast<double>(cameras_.size());
        return s;
    }

    std::vector<std::vector<SplatFeedback>> feedback(const State& s) const {
        std::vector<std::vector<SplatFeedback>> fb;
        for (const auto& v : s.views) {
            fb.push_back(accumulate_feedback(v.prepared, v.residual, s.scene.gaussians.size(), config_.workers));
        }
        return fb;
    }

    /// Color class: per-splat weighted least squares of SH deltas against the
    /// per-view mean residuals. Returns the number of splats changed.
    std::size_t propose_color(const State& s, const std::vector<std::vector<SplatFeedback>>& fb,
                              GaussianScene& out) const {
        out = s.scene;
        const int degree = s.scene.sh_degree;
        const int k = sh_coeff_count(degree);
        std::vector<std::uint8_t> changed(out.gaussians.size(), 0);
        parallel_for(out.gaussians.size(), config_.workers, [&](std::size_t i) {
            Gaussian& g = out.gaussians[i];
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
            Eigen::MatrixXd b = Eigen::MatrixXd::Zero(k, 3);
            double total = 0;
            std::vector<Eigen::VectorXd> bases;
            for (std::size_t v = 0; v < fb.size(); ++v) {
                const SplatFeedback& f = fb[v][i];
                if (f.weight < kMinViewWeight) continue;
                float y[kMaxShCoeffs];
                sh_basis(degree, (g.center() - pinholes_[v].C).normalized(), y);
                Eigen::VectorXd yv(k);
                for (int j = 0; j < k; ++j) yv[j] = y[j];
                a += f.weight * yv * yv.transpose();
                for (int c = 0; c < 3; ++c) b.col(c) += yv * static_cast<double>(f.residual[c]);
                total += f.weight;
                bases.push_back(yv);
            }
            if (bases.empty()) return;
            for (int j = 1; j < k; ++j) a(j, j) += kShRidge * total;
            const Eigen::MatrixXd delta = a.ldlt().solve(b);
            double biggest = 0;
            for (const auto& yv : bases) biggest = std::max(biggest, (yv.transpose() * delta).cwiseAbs().maxCoeff());
            if (!(biggest >= kDeadBand) || !delta.allFinite()) return;
            for (int j = 0; j < k; ++j) {
                for (int c = 0; c < 3; ++c) g.sh[j * 3 + c] += static_cast<float>(delta(j, c));
            }
            changed[i] = 1;
        });
        return static_cast<std::size_t>(std::count(changed.begin(), changed.end(), 1));
    }

    double window_sad(const ImageF& a, double ax, double ay, const ImageF& b, double bx, double by) const {
        double sad = 0;
        float pa[3], pb[3];
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                sample_bilinear(a, ax + dx, ay + dy, pa);
                sample_bilinear(b, bx + dx, by + dy, pb);
                for (int c = 0; c < 3; ++c) sad += std::abs(pa[c] - pb[c]);
            }
        }
        return sad / 27.0;
    }

    /// Mean window SAD between the seeding pixel and its reprojection in every
    /// other view at `depth`; infinity when no other view sees it.
    double probe_cost(const SplatOrigin& o, double depth) const {
        const Eigen::Vector3d x = ray_point(pinholes_[o.view], o.pixel_x, o.pixel_y, depth);
        double sum = 0;
        int n = 0;
        for (std::size_t v = 0; v < pinholes_.size(); ++v) {
            if (static_cast<int>(v) == o.view) continue;
            const Eigen::Vector3d h = pinholes_[v].K * (pinholes_[v].R * (x - pinholes_[v].C));
            if (!(h.z() > 0)) continue;
            const double u = h.x() / h.z(), w = h.y() / h.z();
            if (u < 0 || w < 0 || u > targets_[v].width - 1 || w > targets_[v].height - 1) continue;
            sum += window_sad(targets_[o.view], o.pixel_x, o.pixel_y, targets_[v], u, w);
            ++n;
        }
        return n > 0 ? sum / n : std::numeric_limits<double>::infinity();
    }

    /// Position class: 3-point inverse-depth probe along each splat's seeding ray.
    std::size_t propose_position(const State& s, int iter, GaussianScene& out,
                                 std::vector<SplatOrigin>& origins) const {
        out = s.scene;
        origins = s.origins;
        const double inv_lo = 1.0 / config_.depth_max, inv_hi = 1.0 / config_.depth_min;
        const double spacing = (inv_hi - inv_lo) / (config_.init_planes - 1);
        std::vector<std::uint8_t> changed(out.gaussians.size(), 0);
        parallel_for(out.gaussians.size(), config_.workers, [&](std::size_t i) {
            SplatOrigin& o = origins[i];
            const double inv = 1.0 / o.depth;
            const double step = spacing * (0.25 + 0.5 * unit_hash(config_.seed, static_cast<std::uint64_t>(iter), i));
            const double here = probe_cost(o, o.depth);
            double best = here, best_inv = inv;
            for (double cand : {inv - step, inv + step}) {
                if (cand < inv_lo || cand > inv_hi) continue;
                const double c = probe_cost(o, 1.0 / cand);
                if (c < best) {
                    best = c;
                    best_inv = cand;
                }
            }
            if (best_inv == inv || !(best < here - kProbeMargin)) return;
            o.depth = 1.0 / best_inv;
            const PinholeCV& cam = pinholes_[o.view];
            place(out.gaussians[i], ray_point(cam, o.pixel_x, o.pixel_y, o.depth),
                  log_scale_for(config_.subsample, o.depth, cam.K(0, 0)));
            changed[i] = 1;
        });
        return static_cast<std::size_t>(std::count(changed.begin(), changed.end(), 1));
    }

    /// Opacity class: halve splats whose per-view residual RMS disagree; those
    /// falling under prune_alpha are dropped.
    std::size_t propose_opacity(const State& s, const std::vector<std::vector<SplatFeedback>>& fb,
                                GaussianScene& out, std::vector<SplatOrigin>& origins) const {
        const std::size_t n = s.scene.gaussians.size();
        std::vector<std::uint8_t> flagged(n, 0);
        parallel_for(n, config_.workers, [&](std::size_t i) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            int views = 0;
            for (const auto& f : fb) {
                if (f[i].weight < kMinViewWeight) continue;
                const double rms = std::sqrt(std::max(0.0f, f[i].sq_residual) / f[i].weight / 3.0);
                lo = std::min(lo, rms);
                hi = std::max(hi, rms);
                ++views;
            }
            if (views >= 2 && hi - lo > kDisagreement) flagged[i] = 1;
        });
        out = GaussianScene{};
        out.sh_degree = s.scene.sh_degree;
        origins.clear();
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Gaussian g = s.scene.gaussians[i];
            if (flagged[i]) {
                g.opacity *= 0.5f;
                ++changed;
                if (g.opacity < config_.prune_alpha) continue;
            }
            out.gaussians.push_back(g);
            origins.push_back(s.origins[i]);
        }
        out.update_bounds();
        return changed;
    }

    TraceRow row(const State& s, int iter, std::size_t accepted, std::size_t rejected) const {
        TraceRow r;
        r.iter = iter;
        for (const auto& v : s.views) r.residual_view.push_back(v.mse);
        r.residual = s.residual;
        r.splats = s.scene.gaussians.size();
        r.accepted = accepted;
        r.rejected = rejected;
        return r;
    }

private:
    std::vector<CameraParams> cameras_;
    std::vector<ImageF> targets_;
    std::vector<PinholeCV> pinholes_;
    PredictorConfig config_;
    RasterOptions options_;
};

} // namespace

void validate(const PredictorConfig& c) {
    if (c.subsample < 1) throw ConfigError("predictor subsample must be >= 1");
    if (c.init_planes < 2) throw ConfigError("predictor init_planes must be >= 2");
    if (c.refine_iters < 0) throw ConfigError("predictor refine_iters must be >= 0");
    if (!(c.opacity_init > 0 && c.opacity_init < 1)) throw ConfigError("opacity_init must lie in (0, 1)");
    if (!(c.prune_alpha >= 0 && c.prune_alpha < 1)) throw ConfigError("prune_alpha must lie in [0, 1)");
    if (c.sh_degree < 0 || c.sh_degree > kMaxShDegree) throw ConfigError("sh_degree must be 0, 1 or 2");
    if (!(c.depth_min > 0) || !(c.depth_max > c.depth_min)) throw ConfigError("predictor depth range invalid");
}

std::string trace_csv(const RefineTrace& trace) {
    std::ostringstream out;
    out.precision(17);
    const std::size_t nv = trace.rows.empty() ? 0 : trace.rows.front().residual_view.size();
    out << "iter";
    for (std::size_t v = 0; v < nv; ++v) out << ",residual_view_" << v;
    out << ",residual,splats,accepted,rejected\n";
    for (const auto& r : trace.rows) {
        out << r.iter;
        for (double v : r.residual_view) out << ',' << v;
        out << ',' << r.residual << ',' << r.splats << ',' << r.accepted << ',' << r.rejected << '\n';
    }
    return out.str();
}

SeededScene init_splats(std::span<const ImageU8> views, std::span<const CameraParams> cameras,
                        const PredictorConfig& config) {
    validate(config);
    check_inputs(views, cameras);
    const int s = config.subsample;
    std::vector<ImageF> coarse;
    std::vector<CameraParams> coarse_cams;
    for (std::size_t v = 0; v < views.size(); ++v) {
        coarse.push_back(box_downsample(to_float(views[v]), s));
        coarse_cams.push_back(scaled(cameras[v], s));
        coarse_cams.back().intrinsics.width = coarse.back().width;
        coarse_cams.back().intrinsics.height = coarse.back().height;
    }
    SeededScene out;
    out.scene.sh_degree = config.sh_degree;
    for (std::size_t v = 0; v < views.size(); ++v) {
        std::vector<std::size_t> order;
        for (std::size_t o = 0; o < views.size(); ++o) {
            if (o != v) order.push_back(o);
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return (cameras[a].pose.position - cameras[v].pose.position).norm() <
                   (cameras[b].pose.position - cameras[v].pose.position).norm();
        });
        order.resize(std::min<std::size_t>(order.size(), 2));
        std::vector<ImageF> src;
        std::vector<CameraParams> src_cams;
        for (auto o : order) {
            src.push_back(coarse[o]);
            src_cams.push_back(coarse_cams[o]);
        }
        const CostVolume vol = build_cost_volume(coarse[v], coarse_cams[v], src, src_cams, config.init_planes,
                                                 config.depth_min, config.depth_max, config.workers);
        DepthMap dm = estimate_depth(vol, config.workers);
        const PinholeCV cam = to_pinhole(cameras[v]);
        const PinholeCV coarse_cam = to_pinhole(coarse_cams[v]);
        const ImageF& img = coarse[v];
        std::vector<PinholeCV> src_pins;
        for (const auto& sc : src_cams) src_pins.push_back(to_pinhole(sc));
        std::vector<std::uint8_t> supported(static_cast<std::size_t>(img.width) * img.height, 0);
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                if (!dm.valid.at(x, y)) continue;
                const Eigen::Vector3d near = ray_point(coarse_cam, x, y, config.depth_min);
                const Eigen::Vector3d far = ray_point(coarse_cam, x, y, config.depth_max);
                for (std::size_t k = 0; k < src.size(); ++k) {
                    if (in_frame(src_pins[k], near, src[k].width, src[k].height) &&
                        in_frame(src_pins[k], far, src[k].width, src[k].height)) {
                        supported[static_cast<std::size_t>(y) * img.width + x] = 1;
                        break;
                    }
                }
            }
        }
        if (std::find(supported.begin(), supported.end(), 1) != supported.end()) fill_unsupported(dm.depth, supported);
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                SplatOrigin o;
                o.view = static_cast<int>(v);
                o.pixel_x = static_cast<float>(x * s + (s - 1) / 2.0);
                o.pixel_y = static_cast<float>(y * s + (s - 1) / 2.0);
                o.depth = dm.depth.at(x, y);
                Gaussian g;
                place(g, ray_point(cam, o.pixel_x, o.pixel_y, o.depth), log_scale_for(s, o.depth, cam.K(0, 0)));
                g.opacity = config.opacity_init;
                for (int c = 0; c < 3; ++c) g.sh[c] = static_cast<float>(img.at(x, y, c) / kShC0);
                out.scene.gaussians.push_back(g);
                out.origins.push_back(o);
            }
        }
    }
    out.scene.update_bounds();
    return out;
}

RefineResult refine_splats(const SeededScene& seeded, std::span<const ImageU8> views,
                           std::span<const CameraParams> cameras, const PredictorConfig& config) {
    validate(config);
    check_inputs(views, cameras);
    if (seeded.origins.size() != seeded.scene.gaussians.size()) {
        throw ConfigError("seeded scene and origin list differ in size");
    }
    Refiner refiner(views, cameras, config);
    State state = refiner.evaluate(seeded.scene, seeded.origins);
    RefineResult out;
    out.trace.rows.push_back(refiner.row(state, 0, 0, 0));
    for (int iter = 1; iter <= config.refine_iters; ++iter) {
        std::size_t accepted = 0, rejected = 0;
        auto consider = [&](std::size_t proposed, GaussianScene trial, std::vector<SplatOrigin> origins) {
            if (proposed == 0) return;
            State next = refiner.evaluate(std::move(trial), std::move(origins));
            if (next.residual <= state.residual) {
                state = std::move(next);
                accepted += proposed;
            } else {
                rejected += proposed;
            }
        };
        {
            const auto fb = refiner.feedback(state);
            GaussianScene trial;
            const std::size_t n = refiner.propose_color(state, fb, trial);
            consider(n, std::move(trial), state.origins);
        }
        {
            GaussianScene trial;
            std::vector<SplatOrigin> origins;
            const std::size_t n = refiner.propose_position(state, iter, trial, origins);
            consider(n, std::move(trial), std::move(origins));
        }
        {
            const auto fb = refiner.feedback(state);
            GaussianScene trial;
            std::vector<SplatOrigin> origins;
            const std::size_t n = refiner.propose_opacity(state, fb, trial, origins);
            consider(n, std::move(trial), std::move(origins));
        }
        out.trace.rows.push_back(refiner.row(state, iter, accepted, rejected));
    }
    out.scene = std::move(state.scene);
    out.scene.update_bounds();
    out.origins = std::move(state.origins);
    return out;
}

Prediction predict(std::span<const ImageU8> views, std::span<const CameraParams> cameras,
                   const PredictorConfig& config) {
    const SeededScene seeded = init_splats(views, cameras, config);
    RefineResult r = refine_splats(seeded, views, cameras, config);
    return {std::move(r.scene), std::move(r.trace)};
}

FloaterReport floater_census(const GaussianScene& scene, std::span<const ImageU8> views,
                             std::span<const CameraParams> cameras, int workers) {
    if (views.size() != cameras.size()) throw ConfigError("views and cameras differ in count");
    const std::size_t n = scene.gaussians.size();
    std::vector<ImageF> imgs;
    std::vector<PinholeCV> cams;
    for (std::size_t v = 0; v < views.size(); ++v) {
        imgs.push_back(to_float(views[v]));
        cams.push_back(to_pinhole(cameras[v]));
    }
    std::vector<float> radius(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& ls = scene.gaussians[i].log_scale;
        radius[i] = static_cast<float>(kFloaterIsolation * std::exp(std::max({ls[0], ls[1], ls[2]})));
    }
    // photometric test first; isolation only for the splats that fail it
    std::vector<std::uint8_t> suspect(n, 0);
    parallel_for(n, workers, [&](std::size_t i) {
        const Gaussian& g = scene.gaussians[i];
        int bad = 0;
        for (std::size_t v = 0; v < cams.size(); ++v) {
            const Eigen::Vector3d h = cams[v].K * (cams[v].R * (g.center() - cams[v].C));
            if (!(h.z() > 0)) continue;
            const double u = h.x() / h.z(), w = h.y() / h.z();
            if (u < 0 || w < 0 || u > imgs[v].width - 1 || w > imgs[v].height - 1) continue;
            float px[3];
            sample_bilinear(imgs[v], u, w, px);
            const auto col = eval_sh(g.sh, scene.sh_degree, (g.center() - cams[v].C).normalized());
            double sq = 0;
            for (int c = 0; c < 3; ++c) sq += (px[c] - col[c]) * (px[c] - col[c]);
            if (std::sqrt(sq / 3.0) > kFloaterResidual) ++bad;
        }
        suspect[i] = bad >= 2;
    });
    FloaterReport report;
    if (std::find(suspect.begin(), suspect.end(), 1) == suspect.end()) return report;

    std::vector<float> sorted(radius);
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
    const double cell = std::max(1e-6, static_cast<double>(sorted[n / 2]));
    auto key = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
        return (x * 73856093) ^ (y * 19349663) ^ (z * 83492791);
    };
    auto coord = [&](double v) { return static_cast<std::int64_t>(std::floor(v / cell)); };
    std::unordered_map<std::int64_t, std::vector<std::uint32_t>> grid;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = scene.gaussians[i].mu;
        grid[key(coord(m[0]), coord(m[1]), coord(m[2]))].push_back(static_cast<std::uint32_t>(i));
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!suspect[i]) continue;
        const Eigen::Vector3d c = scene.gaussians[i].center();
        const double r = radius[i];
        const std::int64_t reach = static_cast<std::int64_t>(std::ceil(r / cell));
        bool isolated = true;
        auto near = [&](std::size_t j) { return j != i && (scene.gaussians[j].center() - c).norm() <= r; };
        if (reach > 8) {
            for (std::size_t j = 0; j < n && isolated; ++j) isolated = !near(j);
        } else {
            const std::int64_t cx = coord(c.x()), cy = coord(c.y()), cz = coord(c.z());
            for (std::int64_t dx = -reach; dx <= reach && isolated; ++dx) {
                for (std::int64_t dy = -reach; dy <= reach && isolated; ++dy) {
                    for (std::int64_t dz = -reach; dz <= reach && isolated; ++dz) {
                        const auto it = grid.find(key(cx + dx, cy + dy, cz + dz));
                        if (it == grid.end()) continue;
                        for (auto j : it->second) {
                            if (near(j)) {
                                isolated = false;
                                break;
                            }
                        }
                    }
                }
            }
        }
        if (isolated) report.ids.push_back(static_cast<std::uint32_t>(i));
    }
    report.count = report.ids.size();
    return report;
}

} // namespace ivb
