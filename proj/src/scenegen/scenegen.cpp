// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenegen/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <set>

#include "common/bytes.hpp"
#include "common/error.hpp"
#include "common/parallel.hpp"
#include "rasterizer/rasterizer.hpp"

namespace ivb {

namespace {

constexpr std::pair<SceneKind, std::string_view> kKindNames[] = {
    {SceneKind::TexturedPlane, "textured_plane"}, {SceneKind::BoxRoom, "box_room"},
    {SceneKind::SphereField, "sphere_field"},     {SceneKind::SpecularSphere, "specular_sphere"},
    {SceneKind::NoiseAugmented, "noise_augmented"},
};
constexpr std::pair<RigKind, std::string_view> kRigNames[] = {
    {RigKind::Linear4, "linear_4"}, {RigKind::Linear9, "linear_9"}, {RigKind::Grid8, "grid_8"}};

// Portable uniform draws; std distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Box-Muller, one draw per call
    double normal() {
        const double u = 1.0 - uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * uniform());
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ull;
    x ^= x >> 33;
    return x;
}

double lattice(std::int64_t i, std::int64_t j, std::uint64_t seed) {
    const std::uint64_t h = mix(seed ^ mix(static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ull ^
                                          static_cast<std::uint64_t>(j) * 0xbf58476d1ce4e5b9ull));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double value_noise(double u, double v, std::uint64_t seed) {
    const double fu = std::floor(u), fv = std::floor(v);
    const auto i = static_cast<std::int64_t>(fu);
    const auto j = static_cast<std::int64_t>(fv);
    double tu = u - fu, tv = v - fv;
    tu = tu * tu * (3 - 2 * tu);
    tv = tv * tv * (3 - 2 * tv);
    const double a = lattice(i, j, seed), b = lattice(i + 1, j, seed);
    const double c = lattice(i, j + 1, seed), d = lattice(i + 1, j + 1, seed);
    return (a * (1 - tu) + b * tu) * (1 - tv) + (c * (1 - tu) + d * tu) * tv;
}

/// Multi-octave colored noise over surface coordinates in meters.
std::array<double, 3> texture(double u, double v, std::uint64_t seed) {
    std::array<double, 3> rgb{};
    for (int c = 0; c < 3; ++c) {
        double acc = 0, amp = 0.5, freq = 2.5, norm = 0;
        for (int o = 0; o < 6; ++o) {
            acc += amp * value_noise(u * freq, v * freq, seed + 977 * c + 131 * o);
            norm += amp;
            amp *= 0.8;
            freq *= 2.1;
        }
        rgb[c] = acc / norm;
    }
    // stretch contrast, keep away from the clamp limits
    for (auto& x : rgb) x = std::clamp(0.5 + 1.6 * (x - 0.5), 0.04, 0.96);
    return rgb;
}

std::array<float, 4> quat_from_axis_angle(const Eigen::Vector3d& axis, double angle) {
    const double s = std::sin(angle / 2);
    return normalized_quat({static_cast<float>(std::cos(angle / 2)), static_cast<float>(axis.x() * s),
                            static_cast<float>(axis.y() * s), static_cast<float>(axis.z() * s)});
}

/// Rotation taking the local x axis onto unit normal n.
std::array<float, 4> quat_x_to(const Eigen::Vector3d& n) {
    const Eigen::Vector3d x = Eigen::Vector3d::UnitX();
    const double c = std::clamp(x.dot(n), -1.0, 1.0);
    Eigen::Vector3d axis = x.cross(n);
    if (axis.norm() < 1e-12) {
        return c > 0 ? std::array<float, 4>{1, 0, 0, 0} : quat_from_axis_angle(Eigen::Vector3d::UnitZ(), std::numbers::pi);
    }
    return quat_from_axis_angle(axis.normalized(), std::acos(c));
}

/// Per-splat luminance grain in [-kGrain, kGrain].
constexpr double kGrain = 0.07;

std::array<double, 3> with_grain(std::array<double, 3> rgb, std::uint64_t seed, int i) {
    const double n = (static_cast<double>(mix(seed ^ mix(static_cast<std::uint64_t>(i) + 1)) >> 11) * 0x1.0p-53) * 2 - 1;
    for (auto& c : rgb) c = std::clamp(c + kGrain * n, 0.02, 0.98);
    return rgb;
}

void set_color(Gaussian& g, const std::array<double, 3>& rgb) {
    for (int c = 0; c < 3; ++c) g.sh[c] = static_cast<float>(rgb[c] / kShC0);
}

struct Rect {
    Eigen::Vector3d origin;
    Eigen::Vector3d u_axis; // full extent
    Eigen::Vector3d v_axis;
    Eigen::Vector3d normal;
    double area() const { return u_axis.norm() * v_axis.norm(); }
};

/// Exactly n splats on a rectangle via an R2 low-discrepancy lattice.
void emit_rect(const Rect& r, int n, std::uint64_t tex_seed, float opacity, Rng& rng, std::vector<Gaussian>& out) {
    if (n <= 0) return;
    constexpr double a1 = 0.7548776662466927, a2 = 0.5698402909980532;
    const double spacing = std::sqrt(r.area() / n);
    const auto rot = quat_x_to(r.normal);
    const double lu = r.u_axis.norm(), lv = r.v_axis.norm();
    for (int i = 0; i < n; ++i) {
        double s = std::fmod(0.5 + a1 * (i + 1), 1.0);
        double t = std::fmod(0.5 + a2 * (i + 1), 1.0);
        const Eigen::Vector3d p = r.origin + s * r.u_axis + t * r.v_axis;
        Gaussian g;
        for (int k = 0; k < 3; ++k) g.mu[k] = static_cast<float>(p[k]);
        g.rot = rot;
        const double sigma = 0.75 * spacing * rng.uniform(0.9, 1.1);
        g.log_scale = {static_cast<float>(std::log(0.05 * spacing)), static_cast<float>(std::log(sigma)),
                       static_cast<float>(std::log(sigma))};
        g.opacity = opacity;
        set_color(g, with_grain(texture(s * lu, t * lv, tex_seed), tex_seed, i));
        out.push_back(g);
    }
}

struct Sphere {
    Eigen::Vector3d center;
    double radius;
};

void emit_sphere(const Sphere& sp, int n, std::uint64_t tex_seed, std::array<double, 3> tint, float opacity,
                 std::vector<Gaussian>& out) {
    if (n <= 0) return;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double spacing = std::sqrt(4 * std::numbers::pi * sp.radius * sp.radius / n);
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1 - z * z));
        const double phi = golden * i;
        const Eigen::Vector3d nrm(r * std::cos(phi), r * std::sin(phi), z);
        const Eigen::Vector3d p = sp.center + sp.radius * nrm;
        Gaussian g;
        for (int k = 0; k < 3; ++k) g.mu[k] = static_cast<float>(p[k]);
        g.rot = quat_x_to(nrm);
        g.log_scale = {static_cast<float>(std::log(0.05 * spacing)), static_cast<float>(std::log(0.75 * spacing)),
                       static_cast<float>(std::log(0.75 * spacing))};
        g.opacity = opacity;
        auto rgb = texture(sp.radius * (std::atan2(nrm.y(), nrm.x()) + std::numbers::pi), sp.radius * 2 * z, tex_seed);
        for (int c = 0; c < 3; ++c) rgb[c] = std::clamp(rgb[c] * tint[c] + 0.1, 0.04, 0.96);
        set_color(g, with_grain(rgb, tex_seed, i));
        out.push_back(g);
    }
}

/// Half extents of the union of all rig frusta at distance x, with margin.
Eigen::Vector2d coverage(const SceneSpec& spec, const std::vector<CameraParams>& rig, double x) {
    double ymax = 0, zmax = 0;
    for (const auto& c : rig) {
        const auto& k = c.intrinsics;
        ymax = std::max(ymax, std::abs(c.pose.position.y()) + x * (k.width / 2.0) / k.focal_x);
        zmax = std::max(zmax, std::abs(c.pose.position.z()) + x * (k.height / 2.0) / k.focal_y);
    }
    (void)spec;
    return {ymax * 1.08, zmax * 1.08};
}

Rect back_wall(const SceneSpec& spec, const std::vector<CameraParams>& rig, double x) {
    const Eigen::Vector2d half = coverage(spec, rig, x);
    return {Eigen::Vector3d(x, half.x(), half.y()), Eigen::Vector3d(0, -2 * half.x(), 0),
            Eigen::Vector3d(0, 0, -2 * half.y()), Eigen::Vector3d(-1, 0, 0)};
}

std::vector<int> split_counts(int total, const std::vector<double>& weights) {
    double sum = 0;
    for (double w : weights) sum += w;
    std::vector<int> out(weights.size());
    int used = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        out[i] = static_cast<int>(std::floor(total * weights[i] / sum));
        used += out[i];
    }
    out[std::max_element(weights.begin(), weights.end()) - weights.begin()] += total - used;
    return out;
}

GaussianScene build_scene(const SceneSpec& spec, SceneKind kind, const std::vector<CameraParams>& rig) {
    GaussianScene scene;
    Rng rng(mix(spec.seed) ^ 0x5eed);
    auto& gs = scene.gaussians;
    gs.reserve(static_cast<std::size_t>(spec.splat_count));
    const std::uint64_t tex = mix(spec.seed + 17);
    switch (kind) {
    case SceneKind::TexturedPlane: {
        emit_rect(back_wall(spec, rig, 2.0), spec.splat_count, tex, 0.9f, rng, gs);
        break;
    }
    case SceneKind::BoxRoom: {
        const double x0 = 0.6, x1 = 4.5, y = 2.2, zlo = -1.0, zhi = 1.3;
        const std::vector<Rect> walls = {
            {{x1, y, zhi}, {0, -2 * y, 0}, {0, 0, zlo - zhi}, {-1, 0, 0}},       // back
            {{x0, y, zlo}, {x1 - x0, 0, 0}, {0, -2 * y, 0}, {0, 0, 1}},          // floor
            {{x0, y, zhi}, {x1 - x0, 0, 0}, {0, -2 * y, 0}, {0, 0, -1}},         // ceiling
            {{x0, y, zhi}, {x1 - x0, 0, 0}, {0, 0, zlo - zhi}, {0, -1, 0}},      // left
            {{x0, -y, zhi}, {x1 - x0, 0, 0}, {0, 0, zlo - zhi}, {0, 1, 0}},      // right
        };
        std::vector<double> areas;
        for (const auto& w : walls) areas.push_back(w.area());
        const auto counts = split_counts(spec.splat_count, areas);
        for (std::size_t i = 0; i < walls.size(); ++i) emit_rect(walls[i], counts[i], tex + 101 * i, 0.9f, rng, gs);
        break;
    }
    case SceneKind::SphereField: {
        std::vector<Sphere> spheres;
        for (int i = 0; i < 8; ++i) {
            const double x = rng.uniform(1.6, 3.2);
            const Eigen::Vector2d half = coverage(spec, rig, x) * 0.7;
            spheres.push_back({{x, rng.uniform(-half.x(), half.x()), rng.uniform(-half.y(), half.y())},
                               rng.uniform(0.12, 0.3)});
        }
        const Rect wall = back_wall(spec, rig, 4.0);
        std::vector<double> weights{wall.area()};
        for (const auto& s : spheres) weights.push_back(4 * std::numbers::pi * s.radius * s.radius);
        const auto counts = split_counts(spec.splat_count, weights);
        emit_rect(wall, counts[0], tex, 0.9f, rng, gs);
        for (std::size_t i = 0; i < spheres.size(); ++i) {
            const std::array<double, 3> tint{rng.uniform(0.5, 1.2), rng.uniform(0.5, 1.2), rng.uniform(0.5, 1.2)};
            emit_sphere(spheres[i], counts[i + 1], tex + 7 * (i + 1), tint, 0.95f, gs);
        }
        break;
    }
    case SceneKind::SpecularSphere: {
        scene.sh_degree = 2;
        const Rect wall = back_wall(spec, rig, 4.0);
        const Sphere ball{{2.4, 0.0, 0.0}, 0.55};
        const auto counts = split_counts(spec.splat_count, {wall.area(), 4 * std::numbers::pi * ball.radius * ball.radius});
        emit_rect(wall, counts[0], tex, 0.9f, rng, gs);
        const std::size_t first = gs.size();
        emit_sphere(ball, counts[1], tex + 3, {0.7, 0.75, 0.9}, 0.95f, gs);
        // Glossy response: color swings with the lateral and vertical view direction,
        // modulated by the surface normal.
        for (std::size_t i = first; i < gs.size(); ++i) {
            Gaussian& g = gs[i];
            const Eigen::Vector3d n = (g.center() - ball.center).normalized();
            const std::array<double, 3> tint{1.0, 0.85, 0.6};
            for (int c = 0; c < 3; ++c) {
                g.sh[1 * 3 + c] = static_cast<float>(-3.0 * tint[c] * (0.4 + n.y()));
                g.sh[2 * 3 + c] = static_cast<float>(1.2 * tint[c] * n.z());
                g.sh[4 * 3 + c] = static_cast<float>(2.0 * tint[c] * n.x());
                g.sh[8 * 3 + c] = static_cast<float>(-1.0 * tint[c] * n.y());
            }
        }
        break;
    }
    case SceneKind::NoiseAugmented:
        throw ConfigError("noise_augmented cannot be its own base kind");
    }
    scene.update_bounds();
    return scene;
}

} // namespace

std::string_view to_string(SceneKind k) {
    for (auto& [v, n] : kKindNames) {
        if (v == k) return n;
    }
    return "?";
}

std::string_view to_string(RigKind r) {
    for (auto& [v, n] : kRigNames) {
        if (v == r) return n;
    }
    return "?";
}

SceneKind parse_scene_kind(std::string_view s) {
    for (auto& [v, n] : kKindNames) {
        if (n == s) return v;
    }
    throw ConfigError("unknown scene kind '" + std::string(s) + "'");
}

RigKind parse_rig_kind(std::string_view s) {
    for (auto& [v, n] : kRigNames) {
        if (n == s) return v;
    }
    throw ConfigError("unknown rig '" + std::string(s) + "'");
}

void to_json(nlohmann::json& j, const SceneSpec& s) {
    j = nlohmann::json{{"seed", s.seed},
                       {"kind", to_string(s.kind)},
                       {"splat_count", s.splat_count},
                       {"rig", to_string(s.rig)},
                       {"baseline_m", s.baseline_m},
                       {"resolution", {s.width, s.height}},
                       {"noise_sigma", s.noise_sigma},
                       {"base_kind", to_string(s.base_kind)}};
}

void from_json(const nlohmann::json& j, SceneSpec& s) {
    try {
        SceneSpec d;
        s.seed = j.value("seed", d.seed);
        s.kind = parse_scene_kind(j.value("kind", std::string(to_string(d.kind))));
        s.splat_count = j.value("splat_count", d.splat_count);
        s.rig = parse_rig_kind(j.value("rig", std::string(to_string(d.rig))));
        s.baseline_m = j.value("baseline_m", d.baseline_m);
        if (j.contains("resolution")) {
            const auto& r = j.at("resolution");
            s.width = r.at(0).get<int>();
            s.height = r.at(1).get<int>();
        } else {
            s.width = d.width;
            s.height = d.height;
        }
        s.noise_sigma = j.value("noise_sigma", d.noise_sigma);
        s.base_kind = parse_scene_kind(j.value("base_kind", std::string(to_string(d.base_kind))));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scene spec: ") + e.what());
    }
}

void validate(const SceneSpec& spec) {
    if (spec.width < 16 || spec.height < 16 || spec.width % 2 || spec.height % 2) {
        throw ConfigError("scene resolution must be even and at least 16x16");
    }
    if (spec.splat_count < 1) throw ConfigError("splat_count must be positive");
    if (!(spec.baseline_m > 0)) throw ConfigError("baseline_m must be positive");
    if (!(spec.noise_sigma >= 0 && spec.noise_sigma <= 1)) throw ConfigError("noise_sigma must be in [0, 1]");
    if (spec.kind == SceneKind::NoiseAugmented && spec.base_kind == SceneKind::NoiseAugmented) {
        throw ConfigError("noise_augmented needs a concrete base_kind");
    }
}

std::vector<CameraParams> make_rig(const SceneSpec& spec) {
    std::vector<Eigen::Vector3d> centers;
    const double b = spec.baseline_m;
    switch (spec.rig) {
    case RigKind::Linear4:
    case RigKind::Linear9: {
        const int n = spec.rig == RigKind::Linear4 ? 4 : 9;
        for (int i = 0; i < n; ++i) centers.emplace_back(0.0, ((n - 1) / 2.0 - i) * b, 0.0);
        break;
    }
    case RigKind::Grid8:
        for (int row = 0; row < 2; ++row) {
            for (int col = 0; col < 4; ++col) centers.emplace_back(0.0, (1.5 - col) * b, (0.5 - row) * b);
        }
        break;
    }
    std::vector<CameraParams> rig;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        CameraParams c;
        c.id = static_cast<int>(i);
        c.intrinsics.width = spec.width;
        c.intrinsics.height = spec.height;
        c.intrinsics.focal_x = c.intrinsics.focal_y = 0.8 * spec.width;
        c.intrinsics.principal_x = (spec.width - 1) / 2.0;
        c.intrinsics.principal_y = (spec.height - 1) / 2.0;
        c.pose.position = centers[i];
        c.pose.convention = Convention::MIV;
        rig.push_back(c);
    }
    return rig;
}

Dataset generate(const SceneSpec& spec) {
    validate(spec);
    Dataset ds;
    ds.spec = spec;
    ds.cameras = make_rig(spec);
    const SceneKind content = spec.kind == SceneKind::NoiseAugmented ? spec.base_kind : spec.kind;
    ds.scene = build_scene(spec, content, ds.cameras);
    const std::size_t n = ds.cameras.size();
    ds.views.resize(n);
    ds.truth.resize(n);
    RasterOptions opts;
    for (std::size_t i = 0; i < n; ++i) {
        const RenderOutput r = render(ds.scene, ds.cameras[i], opts);
        ds.truth[i] = quantize(r.color);
        if (spec.kind == SceneKind::NoiseAugmented && spec.noise_sigma > 0) {
            Rng noise(mix(spec.seed ^ (0xabcdefull + i)));
            ImageF noisy = r.color;
            for (float& v : noisy.data) v += static_cast<float>(spec.noise_sigma * noise.normal());
            ds.views[i] = quantize(noisy);
        } else {
            ds.views[i] = ds.truth[i];
        }
    }
    return ds;
}

std::vector<int> spread_indices(int total, int wanted) {
    if (total <= 0 || wanted <= 0) return {};
    if (wanted >= total) {
        std::vector<int> all(total);
        for (int i = 0; i < total; ++i) all[i] = i;
        return all;
    }
    if (wanted == 1) return {0};
    std::vector<int> out;
    for (int k = 0; k < wanted; ++k) {
        const int idx = static_cast<int>(std::lround(static_cast<double>(k) * (total - 1) / (wanted - 1)));
        if (out.empty() || out.back() != idx) out.push_back(idx);
    }
    return out;
}

ViewSplit split_transmitted(const Dataset& dataset, int atlas_count) {
    if (atlas_count != 1 && atlas_count != 2) {
        throw ConfigError("atlas_count must be 1 or 2");
    }
    const int n = static_cast<int>(dataset.cameras.size());
    if (n < 4) {
        throw ConfigError("dataset needs at least 4 views, has " + std::to_string(n));
    }
    ViewSplit split;
    split.transmitted = spread_indices(n, std::min(n, 4 * atlas_count));
    for (int i = 0; i < n; ++i) split.evaluation.push_back(i);
    return split;
}

nlohmann::json camera_to_json(const CameraParams& cam) {
    const auto& k = cam.intrinsics;
    const auto& p = cam.pose;
    return {{"id", cam.id},
            {"width", k.width},
            {"height", k.height},
            {"intrinsics", {{"fx", k.focal_x}, {"fy", k.focal_y}, {"cx", k.principal_x}, {"cy", k.principal_y}}},
            {"pose",
             {{"yaw_deg", p.yaw_deg},
              {"pitch_deg", p.pitch_deg},
              {"roll_deg", p.roll_deg},
              {"x", p.position.x()},
              {"y", p.position.y()},
              {"z", p.position.z()}}},
            {"convention", to_string(p.convention)}};
}

CameraParams camera_from_json(const nlohmann::json& j) {
    try {
        CameraParams c;
        c.id = j.at("id").get<int>();
        c.intrinsics.width = j.at("width").get<int>();
        c.intrinsics.height = j.at("height").get<int>();
        const auto& k = j.at("intrinsics");
        c.intrinsics.focal_x = k.at("fx").get<double>();
        c.intrinsics.focal_y = k.at("fy").get<double>();
        c.intrinsics.principal_x = k.at("cx").get<double>();
        c.intrinsics.principal_y = k.at("cy").get<double>();
        const auto& p = j.at("pose");
        c.pose.yaw_deg = p.at("yaw_deg").get<double>();
        c.pose.pitch_deg = p.at("pitch_deg").get<double>();
        c.pose.roll_deg = p.at("roll_deg").get<double>();
        c.pose.position = {p.at("x").get<double>(), p.at("y").get<double>(), p.at("z").get<double>()};
        c.pose.convention = parse_convention(j.at("convention").get<std::string>());
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("camera entry: ") + e.what());
    }
}

namespace {

std::string indexed(const std::string& dir, const char* stem, std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof name, "%s_%04zu.ppm", stem, i);
    return (std::filesystem::path(dir) / name).string();
}

} // namespace

void save_dataset(const Dataset& dataset, const std::string& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["spec"] = dataset.spec;
    j["cameras"] = nlohmann::json::array();
    for (const auto& c : dataset.cameras) j["cameras"].push_back(camera_to_json(c));
    const bool noisy = dataset.views != dataset.truth;
    j["has_truth"] = noisy;
    const std::string text = j.dump(2) + "\n";
    write_file((std::filesystem::path(dir) / "manifest.json").string(),
               std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    for (std::size_t i = 0; i < dataset.views.size(); ++i) {
        write_ppm(indexed(dir, "view", i), dataset.views[i]);
        if (noisy) write_ppm(indexed(dir, "truth", i), dataset.truth[i]);
    }
    write_gsc1((std::filesystem::path(dir) / "scene.gsc1").string(), dataset.scene);
}

Dataset load_dataset(const std::string& dir) {
    const auto bytes = read_file((std::filesystem::path(dir) / "manifest.json").string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(dir + "/manifest.json: " + e.what());
    }
    Dataset ds;
    ds.spec = j.at("spec").get<SceneSpec>();
    for (const auto& c : j.at("cameras")) ds.cameras.push_back(camera_from_json(c));
    const bool noisy = j.value("has_truth", false);
    for (std::size_t i = 0; i < ds.cameras.size(); ++i) {
        ds.views.push_back(read_ppm(indexed(dir, "view", i)));
        ds.truth.push_back(noisy ? read_ppm(indexed(dir, "truth", i)) : ds.views.back());
    }
    ds.scene = read_gsc1((std::filesystem::path(dir) / "scene.gsc1").string());
    return ds;
}

} // namespace ivb
