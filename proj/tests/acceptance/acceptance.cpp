// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/LU>

#include "camera/camera.hpp"
#include "codec/codec.hpp"
#include "common/bytes.hpp"
#include "common/error.hpp"
#include "container/container.hpp"
#include "dsde/dsde.hpp"
#include "dsgs/dsgs.hpp"
#include "harness/harness.hpp"
#include "metrics/metrics.hpp"
#include "rasterizer/rasterizer.hpp"
#include "scenegen/scenegen.hpp"
#include "support/oracles.hpp"

namespace ivb {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Collects failed checks for one criterion.
struct Check {
    std::vector<std::string> failures;
    std::ostringstream notes;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

ExperimentConfig committed(const std::string& name) {
    ExperimentConfig c = load_experiment(std::string(IVBENCH_SOURCE_DIR "/configs/") + name + ".json");
    c.output_dir.clear();
    return c;
}

std::string num(double v, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Shared runs reused across criteria.
struct Shared {
    std::vector<RDRecord> default_sweep;
    std::vector<RDRecord> specular_sweep;
};

Shared& shared() {
    static Shared s;
    return s;
}

void rasterizer_correctness(Check& c) {
    const auto t0 = Clock::now();
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const GaussianScene scene = testing::random_scene(1000 + i, 1 + (i * 37) % 200, i % 3);
        const CameraParams cam = testing::simple_camera(128, 80);
        const RenderOutput tiled = render(scene, cam);
        const RenderOutput naive = testing::naive_render(scene, cam);
        for (std::size_t k = 0; k < tiled.color.data.size(); ++k) {
            worst = std::max(worst, static_cast<double>(std::abs(tiled.color.data[k] - naive.color.data[k])));
        }
    }
    c.require(worst <= 1e-6, "tiled vs naive max diff " + std::to_string(worst));

    ProjectedSplat s;
    s.mean_x = s.mean_y = 20;
    s.cov_xx = s.cov_yy = 4;
    s.conic_a = s.conic_c = 0.25f;
    s.depth = 1;
    s.opacity = 1;
    s.color = {0.3f, 0.6f, 0.1f};
    s.x_min = s.y_min = 14;
    s.x_max = s.y_max = 26;
    const std::vector<ProjectedSplat> one{s};
    const RenderOutput single = composite(bin_tiles(one, 40, 40), one, 40, 40, {0.9f, 0.9f, 0.9f});
    c.require(single.color.at(20, 20, 0) == 0.3f && single.color.at(20, 20, 1) == 0.6f &&
                  single.color.at(20, 20, 2) == 0.1f,
              "single-splat center pixel differs from splat color");

    const GaussianScene big = testing::random_scene(77, 4000, 1);
    const CameraParams cam = testing::simple_camera(240, 136);
    RasterOptions a, b, d;
    a.workers = 1;
    b.tile = 32;
    b.workers = 4;
    d.tile = 8;
    d.workers = 2;
    const RenderOutput ra = render(big, cam, a), rb = render(big, cam, b), rd = render(big, cam, d);
    c.require(ra.color == rb.color && ra.color == rd.color && ra.alpha == rb.alpha && ra.depth == rd.depth,
              "output depends on tile size or worker count");
    const double secs = seconds_since(t0);
    c.require(secs < 10.0, "runtime " + num(secs, 2) + " s");
    c.notes << "max |tiled-naive| " << worst << ", " << num(secs, 2) << " s";
}

void rasterizer_performance(Check& c) {
    SceneSpec spec;
    spec.kind = SceneKind::BoxRoom;
    spec.splat_count = 50000;
    spec.width = 960;
    spec.height = 540;
    const Dataset ds = generate(spec);
    const GaussianScene& scene = ds.scene;
    const CameraParams& cam = ds.cameras[0];
    RasterOptions opt;
    auto t0 = Clock::now();
    const RenderOutput tiled = render(scene, cam, opt);
    const double t_tiled = seconds_since(t0);
    t0 = Clock::now();
    const RenderOutput naive = testing::naive_render(scene, cam, opt);
    const double t_naive = seconds_since(t0);
    double worst = 0;
    for (std::size_t k = 0; k < tiled.color.data.size(); ++k) {
        worst = std::max(worst, static_cast<double>(std::abs(tiled.color.data[k] - naive.color.data[k])));
    }
    const double speedup = t_naive / t_tiled;
    c.require(speedup >= 5.0, "speedup " + num(speedup, 1) + "x");
    c.require(worst <= 1e-6, "outputs differ by " + std::to_string(worst));
    c.notes << "box_room, tiled " << num(t_tiled * 1e3, 0) << " ms, naive " << num(t_naive * 1e3, 0) << " ms, speedup "
            << num(speedup, 1) << "x";
}

void camera_math(Check& c) {
    std::mt19937_64 rng(31);
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    auto wrap = [](double d) {
        d = std::fmod(d, 360.0);
        if (d > 180) d -= 360;
        if (d < -180) d += 360;
        return std::abs(d);
    };
    double euler = 0, ortho = 0, conv = 0, proj = 0, round = 0;
    for (int i = 0; i < 1000; ++i) {
        const double yaw = u(-179, 179), pitch = u(-85, 85), roll = u(-179, 179);
        for (Convention cv : {Convention::MIV, Convention::CV}) {
            const Eigen::Matrix3d r = euler_to_rotation(yaw, pitch, roll, cv);
            const EulerAngles e = rotation_to_euler(r, cv);
            euler = std::max({euler, wrap(e.yaw_deg - yaw), wrap(e.pitch_deg - pitch), wrap(e.roll_deg - roll)});
            ortho = std::max({ortho, (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(),
                              std::abs(r.determinant() - 1)});
        }
        CameraParams cam;
        cam.intrinsics = {u(300, 900), u(300, 900), u(250, 390), u(130, 230), 640, 360};
        cam.pose = {yaw, pitch, roll, {u(-2, 2), u(-2, 2), u(-2, 2)}, Convention::MIV};
        const CameraParams cv = convert_convention(cam, Convention::CV);
        const CameraParams back = convert_convention(cv, Convention::MIV);
        conv = std::max({conv, wrap(back.pose.yaw_deg - yaw), wrap(back.pose.pitch_deg - pitch),
                         wrap(back.pose.roll_deg - roll)});
        const Eigen::Vector2d px(u(0, 639), u(0, 359));
        const Eigen::Vector3d world = unproject(px, u(0.3, 15), cam);
        const auto a = project(world, cam);
        const auto b = project(world, cv);
        if (!a || !b) {
            c.require(false, "point in front projected as behind");
            return;
        }
        proj = std::max(proj, (a->pixel - b->pixel).norm());
        round = std::max({round, (a->pixel - px).norm(), (unproject(b->pixel, b->depth, cv) - world).norm()});
    }
    c.require(euler < 1e-9, "euler round trip " + std::to_string(euler));
    c.require(ortho < 1e-12, "orthonormality " + std::to_string(ortho));
    c.require(conv < 1e-12, "MIV-CV-MIV " + std::to_string(conv));
    c.require(proj < 1e-9, "projection equivalence " + std::to_string(proj));
    c.require(round < 1e-9, "project/unproject " + std::to_string(round));
    c.notes << "euler " << euler << " deg, RtR/det " << ortho << ", conv " << conv << " deg, proj " << proj
            << " px, round trip " << round;
}

void container_properties(Check& c) {
    std::mt19937_64 rng(41);
    int cases = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const int w = 8 + static_cast<int>(rng() % 90), h = 8 + static_cast<int>(rng() % 60);
        const int atlas_count = 1 + static_cast<int>(rng() % 2);
        const int n = 1 + static_cast<int>(rng() % (4 * atlas_count));
        std::vector<CameraParams> cams;
        std::vector<SourceView> views;
        for (int i = 0; i < n; ++i) {
            cams.push_back(testing::simple_camera(w, h, i));
            views.push_back({i, testing::random_image(rng(), w, h)});
        }
        const int rp = static_cast<int>(rng() % 5);
        const PackResult p = pack_atlases(views, cams, atlas_count, rp);
        std::vector<ImageU8> imgs;
        std::vector<std::vector<std::uint8_t>> payloads;
        for (const auto& a : p.atlases) {
            imgs.push_back(a.image);
            std::vector<std::uint8_t> pl(rng() % 500);
            for (auto& b : pl) b = static_cast<std::uint8_t>(rng());
            payloads.push_back(pl);
        }
        const auto back = unpack_atlases(imgs, p.manifest);
        bool same = back.size() == views.size();
        for (std::size_t i = 0; same && i < views.size(); ++i) {
            same = back[i].view_id == views[i].view_id && back[i].image == views[i].image;
        }
        c.require(same, "pack/unpack mismatch in trial " + std::to_string(trial));
        const auto bytes = mux(p.manifest, payloads);
        const Demuxed d = demux(bytes);
        c.require(d.payloads == payloads && d.manifest_json == manifest_bytes(p.manifest) && d.rate_point == rp,
                  "mux/demux mismatch in trial " + std::to_string(trial));
        std::size_t expect = 12 + manifest_bytes(p.manifest).size();
        for (const auto& pl : payloads) expect += 4 + pl.size();
        c.require(bytes.size() == expect, "size accounting off in trial " + std::to_string(trial));
        ++cases;
    }

    const Dataset ds = generate(committed("default").scene);
    const EncodedPoint point = encode_point(ds, 1, 2);
    const fs::path file = fs::temp_directory_path() / "ivb_acceptance_stream.ivb";
    write_file(file.string(), point.bitstream);
    c.require(fs::file_size(file) == point.bitstream.size(), "on-disk size differs from bitstream length");
    const Demuxed d = demux(read_file(file.string()));
    std::size_t expect = 12 + d.manifest_json.size();
    for (const auto& pl : d.payloads) expect += 4 + pl.size();
    c.require(expect == fs::file_size(file), "header + manifest + payloads != file size");
    fs::remove(file);

    int fuzzed = 0, rejected = 0;
    for (int trial = 0; trial < 5000; ++trial) {
        auto f = point.bitstream;
        switch (trial % 3) {
        case 0: f.resize(rng() % f.size()); break;
        case 1:
            for (int k = 0; k < 1 + static_cast<int>(rng() % 8); ++k) f[rng() % f.size()] ^= 1u << (rng() % 8);
            break;
        default:
            for (int k = 0; k < 6; ++k) f[rng() % std::min<std::size_t>(f.size(), 400)] = static_cast<std::uint8_t>(rng());
        }
        try {
            demux(f);
        } catch (const ParseError&) {
            ++rejected;
        } catch (const std::exception& e) {
            c.require(false, std::string("fuzzed demux raised a non-parse error: ") + e.what());
            break;
        }
        ++fuzzed;
    }
    c.notes << cases << " round-trip cases, " << fuzzed << " fuzzed streams (" << rejected << " rejected)";
}

void codec_properties(Check& c) {
    for (int trial = 0; trial < 20; ++trial) {
        const ImageU8 img = testing::random_image(500 + trial, 8 * (1 + trial % 9), 8 * (1 + trial % 6));
        c.require(decode(encode(img, 0).payload) == img, "RP0 round trip failed on random image " + std::to_string(trial));
    }
    for (const char* name : {"default", "specular_sphere", "noise_augmented", "box_room", "sphere_field"}) {
        const ExperimentConfig cfg = committed(name);
        const Dataset ds = generate(cfg.scene);
        for (int atlas : cfg.atlas_counts) {
            std::vector<std::size_t> sizes;
            for (int rp = 0; rp <= 4; ++rp) sizes.push_back(encode_point(ds, atlas, rp).bitstream.size());
            for (int rp = 2; rp <= 4; ++rp) {
                c.require(sizes[rp] < sizes[rp - 1], std::string(name) + " a" + std::to_string(atlas) +
                                                         ": RP" + std::to_string(rp) + " not smaller than RP" +
                                                         std::to_string(rp - 1));
            }
            if (std::string(name) == "default" && atlas == 1) {
                const double ratio = static_cast<double>(sizes[0]) / static_cast<double>(sizes[1]);
                c.require(ratio >= 5.0, "default RP0/RP1 ratio " + num(ratio, 2));
                c.notes << "default sizes";
                for (auto s : sizes) c.notes << ' ' << s;
                c.notes << " B (RP0/RP1 " << num(ratio, 2) << ")";
            }
        }
        const EncodedPoint base = encode_point(ds, 1, 0);
        double prev = 1.0;
        for (int rp = 1; rp <= 4; ++rp) {
            const EncodedPoint p = encode_point(ds, 1, rp);
            const DecodedPoint d = decode_point(p.bitstream);
            const double r = spectral_report(p.source_atlases[0], d.atlases[0]);
            c.require(r <= 1.0 && r <= prev, std::string(name) + ": spectral ratio " + num(r, 4) + " at RP" +
                                                 std::to_string(rp));
            prev = r;
        }
        if (std::string(name) == "noise_augmented") c.notes << "; noise_augmented RP4 spectral ratio " << num(prev, 4);
    }
}

void dsde_oracle(Check& c) {
    const ExperimentConfig cfg = committed("default");
    const Dataset ds = generate(cfg.scene);
    const int ref = 4;
    const std::vector<int> src_ids{0, 3, 5, 8};
    std::vector<ImageF> src;
    std::vector<CameraParams> cams;
    for (int i : src_ids) {
        src.push_back(to_float(ds.views[i]));
        cams.push_back(ds.cameras[i]);
    }
    const CostVolume vol = build_cost_volume(to_float(ds.views[ref]), ds.cameras[ref], src, cams, 64, 1.0, 4.0);
    int target = 0;
    for (int d = 1; d < 64; ++d) {
        if (std::abs(vol.planes[d] - 2.0) < std::abs(vol.planes[target] - 2.0)) target = d;
    }
    const RenderOutput truth_ref = render(ds.scene, ds.cameras[ref]);
    int textured = 0, hits = 0;
    for (int y = 0; y < vol.height; ++y) {
        for (int x = 0; x < vol.width; ++x) {
            if (truth_ref.alpha.at(x, y) < 0.5f) continue;
            ++textured;
            int best = 0;
            for (int d = 1; d < 64; ++d) {
                if (vol.at(x, y, d) < vol.at(x, y, best)) best = d;
            }
            hits += best == target;
        }
    }
    const double frac = static_cast<double>(hits) / std::max(1, textured);
    c.require(frac >= 0.95, "nearest-plane fraction " + num(100 * frac, 2) + "%");

    std::vector<DepthMap> oracle;
    std::vector<DibrSource> sources;
    for (int i : src_ids) {
        const RenderOutput r = render(ds.scene, ds.cameras[i]);
        oracle.push_back(depth_from_render(r.depth, r.alpha));
    }
    for (std::size_t k = 0; k < src_ids.size(); ++k) {
        sources.push_back({&ds.views[src_ids[k]], &ds.cameras[src_ids[k]], &oracle[k]});
    }
    const double p = psnr(dibr_synthesize(sources, ds.cameras[ref]), ds.truth[ref]);
    c.require(p >= 30.0, "oracle DIBR " + num(p, 2) + " dB");

    const DepthMap self = depth_from_render(truth_ref.depth, truth_ref.alpha);
    const DibrSource id{&ds.views[ref], &ds.cameras[ref], &self};
    const ImageU8 same = dibr_synthesize(std::span(&id, 1), ds.cameras[ref]);
    int worst = 0;
    for (int y = 0; y < same.height; ++y) {
        for (int x = 0; x < same.width; ++x) {
            if (!self.valid.at(x, y)) continue;
            for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, std::abs(same.at(x, y, ch) - ds.views[ref].at(x, y, ch)));
        }
    }
    c.require(worst <= 1, "identity DIBR max diff " + std::to_string(worst) + "/255");
    c.notes << "plane hit " << num(100 * frac, 2) << "% of " << textured << " px, oracle DIBR " << num(p, 2)
            << " dB, identity max diff " << worst << "/255";
}

void dsgs_contract(Check& c) {
    const ExperimentConfig cfg = committed("default");
    const Dataset ds = generate(cfg.scene);
    const EncodedPoint point = encode_point(ds, 1, 0);
    const DecodedPoint decoded = decode_point(point.bitstream);
    std::vector<ImageU8> views;
    std::vector<CameraParams> cams;
    for (const auto& v : decoded.views) {
        views.push_back(v.image);
        cams.push_back(convert_convention(decoded.manifest.cameras[static_cast<std::size_t>(v.view_id)], Convention::CV));
    }
    const Prediction p = predict(views, cams, cfg.predictor);
    const auto& rows = p.trace.rows;
    bool monotone = true, shrinking = true;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        monotone &= rows[i].residual <= rows[i - 1].residual;
        shrinking &= rows[i].splats <= rows[i - 1].splats;
    }
    c.require(monotone, "residual increased during refinement");
    c.require(shrinking, "splat count increased during refinement");
    const std::size_t bound = views.size() * static_cast<std::size_t>(cfg.scene.width / cfg.predictor.subsample) *
                              static_cast<std::size_t>(cfg.scene.height / cfg.predictor.subsample);
    c.require(rows.front().splats <= bound && p.scene.gaussians.size() <= bound, "splat count above subsampling bound");
    const Prediction again = predict(views, cams, cfg.predictor);
    c.require(encode_gsc1(again.scene) == encode_gsc1(p.scene), "scene bytes differ between identical runs");

    double sum = 0;
    for (std::size_t i = 0; i < views.size(); ++i) {
        const ImageU8 img = quantize(render(p.scene, cams[i]).color);
        sum += psnr(img, ds.truth[static_cast<std::size_t>(decoded.views[i].view_id)]);
    }
    const double mean_psnr = sum / static_cast<double>(views.size());
    c.require(mean_psnr >= 30.0, "transmitted re-render " + num(mean_psnr, 2) + " dB");
    c.notes << "residual " << rows.front().residual << " -> " << rows.back().residual << ", splats "
            << rows.front().splats << " -> " << rows.back().splats << " (bound " << bound << "), transmitted "
            << num(mean_psnr, 2) << " dB";
}

void metrics_cases(Check& c) {
    const ImageU8 a(64, 32, 3, 90), b(64, 32, 3, 106);
    const double p = psnr(a, b);
    c.require(std::abs(p - 10 * std::log10(255.0 * 255.0 / 256.0)) <= 1e-6, "uniform-16 PSNR " + num(p, 9));
    c.require(std::abs(p - 24.05) < 0.02, "uniform-16 PSNR not near 24.05");
    const ImageU8 r = testing::random_image(3, 40, 40);
    c.require(ssim(r, r) == 1.0, "SSIM(identical) = " + num(ssim(r, r), 15));
    const std::vector<double> v{24.1, 30.5, 41.3};
    c.require(interview_delta(v) == 41.3 - 24.1 && std::abs(interview_delta(v) - 17.2) < 1e-12,
              "interview delta " + num(interview_delta(v), 15));
    RDCurve anchor{"a", {{1000, 30.0}, {2100, 32.5}, {4500, 34.8}, {9000, 36.1}, {20000, 38.0}}};
    RDCurve up = anchor, half = anchor;
    for (auto& pt : up.points) pt.quality += 2.0;
    for (auto& pt : half.points) pt.size_bytes /= 2;
    const double bdq = bd_quality(anchor, up);
    const double bdr = bd_rate(anchor, half);
    c.require(std::abs(bdq - 2.0) <= 1e-9, "BD offset " + num(bdq, 12));
    c.require(std::abs(bdr + 50.0) <= 1e-6, "BD-rate halved " + num(bdr, 9));
    RDCurve other{"b", {{1200, 29.0}, {2000, 31.0}, {5000, 34.0}, {8000, 36.5}, {25000, 37.0}}};
    const double anti = bd_quality(anchor, other) + bd_quality(other, anchor);
    c.require(std::abs(anti) <= 1e-9, "BD antisymmetry residue " + std::to_string(anti));
    c.notes << "PSNR " << num(p, 6) << " dB, BD offset " << num(bdq, 12) << ", BD-rate " << num(bdr, 9)
            << " %, antisymmetry " << anti;
}

void protocol_fidelity(Check& c) {
    const ExperimentConfig cfg = committed("default");
    const SweepResult first = sweep(cfg);
    c.require(first.failures.empty(), "sweep reported failures");
    const std::size_t expected_rows = cfg.pipelines.size() * cfg.atlas_counts.size() * cfg.rate_points.size();
    c.require(first.records.size() == expected_rows, "sweep rows " + std::to_string(first.records.size()));
    const Dataset ds = generate(cfg.scene);
    std::vector<int> all;
    for (const auto& cam : ds.cameras) all.push_back(cam.id);
    for (const RDRecord& r : first.records) {
        c.require(r.quality.view_ids == all, "evaluation does not cover every camera");
        for (const RDRecord& o : first.records) {
            if (o.atlas_count == r.atlas_count && o.rate_point == r.rate_point) {
                c.require(o.bitstream_hash == r.bitstream_hash, "pipelines consumed different bitstreams");
            }
        }
    }
    const std::string csv = sweep_csv(first.records, false);
    const SweepResult second = sweep(cfg);
    c.require(sweep_csv(second.records, false) == csv, "sweep CSV differs between reruns");
    shared().default_sweep = first.records;
    c.notes << first.records.size() << " rows, " << all.size() << " cameras each, CSV " << csv.size()
            << " bytes identical across reruns";
}

void directional(Check& c) {
    // (a) regularizer
    const ExperimentConfig noisy = committed("noise_augmented");
    const RegularizerReport reg = regularizer_experiment(noisy);
    c.require(reg.lossy_peak, "(a) argmax rate point is RP" + std::to_string(reg.best_rate_point));
    c.require(reg.floaters_non_increasing, "(a) floaters increase from RP0 to RP1");
    c.notes << "(a) held-out PSNR";
    for (const auto& r : reg.rows) c.notes << " RP" << r.rate_point << '=' << num(r.heldout_psnr, 2);
    c.notes << ", floaters";
    for (const auto& r : reg.rows) c.notes << ' ' << r.floaters;
    c.notes << ", argmax RP" << reg.best_rate_point;

    // (b) inter-view consistency on specular content
    ExperimentConfig spec = committed("specular_sphere");
    const SweepResult ss = sweep(spec);
    shared().specular_sweep = ss.records;
    c.notes << "; (b) delta-PSNR dsgs/dsde";
    for (int rp : spec.rate_points) {
        const RDRecord* g = nullptr;
        const RDRecord* d = nullptr;
        for (const auto& r : ss.records) {
            if (r.atlas_count != 1 || r.rate_point != rp) continue;
            (r.pipeline == Pipeline::Dsgs ? g : d) = &r;
        }
        if (!g || !d) {
            c.require(false, "(b) missing specular record at RP" + std::to_string(rp));
            continue;
        }
        c.require(g->delta_psnr < d->delta_psnr, "(b) RP" + std::to_string(rp) + ": dsgs delta " +
                                                     num(g->delta_psnr, 2) + " >= dsde " + num(d->delta_psnr, 2));
        c.notes << " RP" << rp << '=' << num(g->delta_psnr, 2) << '/' << num(d->delta_psnr, 2);
    }

    // (c) DSDE degrades monotonically on the clean committed scenes
    c.notes << "; (c) dsde mean PSNR/SSIM";
    auto monotone = [&](const std::string& name, const std::vector<RDRecord>& recs) {
        std::map<int, std::vector<const RDRecord*>> by_atlas;
        for (const auto& r : recs) {
            if (r.pipeline == Pipeline::Dsde) by_atlas[r.atlas_count].push_back(&r);
        }
        for (auto& [atlas, list] : by_atlas) {
            std::sort(list.begin(), list.end(), [](auto* x, auto* y) { return x->rate_point < y->rate_point; });
            c.notes << ' ' << name << "/a" << atlas << '[';
            for (std::size_t i = 0; i < list.size(); ++i) {
                c.notes << (i ? " " : "") << num(list[i]->mean_psnr, 2) << '/' << num(list[i]->mean_ssim, 4);
                if (i > 0) {
                    const std::string where = "(c) " + name + " a" + std::to_string(atlas) + " RP" +
                                              std::to_string(list[i]->rate_point);
                    const std::string prev = " not below RP" + std::to_string(list[i - 1]->rate_point);
                    c.require(list[i]->mean_psnr < list[i - 1]->mean_psnr, where + " PSNR" + prev);
                    c.require(list[i]->mean_ssim < list[i - 1]->mean_ssim, where + " SSIM" + prev);
                }
            }
            c.notes << ']';
        }
    };
    monotone("textured_plane", shared().default_sweep);
    monotone("specular_sphere", shared().specular_sweep);
    for (const char* name : {"box_room", "sphere_field"}) {
        ExperimentConfig cfg = committed(name);
        cfg.pipelines = {Pipeline::Dsde};
        monotone(name, sweep(cfg).records);
    }
}

void report_reproduction(Check& c) {
    const double psnr_col[] = {24.20, 24.41, 24.43, 24.36, 23.97};
    const double ssim_col[] = {0.925, 0.927, 0.926, 0.921, 0.907};
    const double size_kb[] = {3107, 297, 184, 111, 59};
    std::vector<RDRecord> recs;
    for (int rp = 0; rp < 5; ++rp) {
        RDRecord r;
        r.pipeline = Pipeline::Dsgs;
        r.rate_point = rp;
        r.size_bytes = static_cast<std::uint64_t>(size_kb[rp] * 1000);
        r.mean_psnr = psnr_col[rp];
        r.mean_ssim = ssim_col[rp];
        recs.push_back(r);
    }
    const CompareReport rep = compare(recs, recs);
    const auto& marks = rep.atlases.at(0).test_marks;
    auto find = [&](const std::string& col) {
        return *std::find_if(marks.begin(), marks.end(), [&](const ColumnMarks& m) { return m.column == col; });
    };
    const ColumnMarks p = find("mean_psnr"), s = find("mean_ssim");
    c.require(p.best_rate_point == 2 && p.second_rate_point == 1,
              "PSNR marks best RP" + std::to_string(p.best_rate_point) + " second RP" +
                  std::to_string(p.second_rate_point));
    c.require(s.best_rate_point == 1, "SSIM best RP" + std::to_string(s.best_rate_point));
    c.require(rep.text.find("24.430*") != std::string::npos && rep.text.find("24.410+") != std::string::npos,
              "rendered report lacks the marks");
    c.notes << "PSNR best RP" << p.best_rate_point << " second RP" << p.second_rate_point << ", SSIM best RP"
            << s.best_rate_point;
}

void scaling(Check& c) {
    const ScalingReport r = scaling_probe(committed("scaling"), 3);
    c.require(r.dsde_exponent >= 0.8 && r.dsde_exponent <= 1.3, "dsde exponent " + num(r.dsde_exponent, 3));
    c.require(r.dsgs_exponent >= 0.8 && r.dsgs_exponent <= 1.3, "dsgs exponent " + num(r.dsgs_exponent, 3));
    c.notes << "cost volume exponent " << num(r.dsde_exponent, 3) << ", refinement exponent "
            << num(r.dsgs_exponent, 3);
}

} // namespace
} // namespace ivb

int main() {
    using namespace ivb;
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "rasterizer correctness", rasterizer_correctness},
        {2, "rasterizer performance", rasterizer_performance},
        {3, "camera math", camera_math},
        {4, "container round trips and fuzzing", container_properties},
        {5, "codec", codec_properties},
        {6, "dsde oracle", dsde_oracle},
        {7, "dsgs contract", dsgs_contract},
        {8, "metrics", metrics_cases},
        {9, "protocol fidelity", protocol_fidelity},
        {10, "directional findings", directional},
        {11, "report reproduction", report_reproduction},
        {12, "scaling probe", scaling},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check check;
        const auto t0 = Clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = check.failures.empty();
        failed += ok ? 0 : 1;
        std::string detail = check.notes.str();
        for (const auto& f : check.failures) detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + f;
        std::printf("criterion %2d %-34s %s  [%.1f s] %s\n", cr.id, cr.name, ok ? "PASS" : "FAIL",
                    seconds_since(t0), detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
