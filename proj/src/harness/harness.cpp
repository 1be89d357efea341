// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "harness/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "codec/codec.hpp"
#include "common/bytes.hpp"
#include "common/error.hpp"
#include "rasterizer/rasterizer.hpp"

namespace ivb {

namespace {

namespace fs = std::filesystem;

const char* const kReportHeader =
    "note: synthetic desk-scale benchmark; reproduces the protocol and directional findings, not absolute values\n";

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Runs `fn`, prefixing any module error with the stage name.
template <class Fn>
auto staged(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ParseError& e) {
        throw ParseError(std::string(stage) + ": " + e.what());
    } catch (const IoError& e) {
        throw IoError(std::string(stage) + ": " + e.what());
    } catch (const AssertionFailure& e) {
        throw AssertionFailure(std::string(stage) + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(stage) + ": " + e.what());
    }
}

std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string fixed(double v, int digits) {
    if (std::isnan(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

template <class T>
T parse_number(std::string_view s, const char* what, std::size_t line) {
    T v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw ParseError("csv line " + std::to_string(line) + ": bad " + what + " '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<CameraParams> to_cv(std::span<const CameraParams> cams) {
    std::vector<CameraParams> out;
    for (const auto& c : cams) out.push_back(convert_convention(c, Convention::CV));
    return out;
}

void fill_summary(RDRecord& r) {
    r.mean_psnr = mean(r.quality.psnr_db);
    r.mean_ssim = mean(r.quality.ssim);
    const QualityDelta d = interview_delta(r.quality);
    r.delta_psnr = d.psnr;
    r.delta_ssim = d.ssim;
}

std::map<int, std::vector<RDRecord>> by_atlas(std::span<const RDRecord> records, const char* side) {
    std::map<int, std::vector<RDRecord>> out;
    for (const auto& r : records) {
        auto& list = out[r.atlas_count];
        for (const auto& o : list) {
            if (o.rate_point == r.rate_point) {
                throw ConfigError(std::string(side) + " has duplicate records for atlas_count " +
                                  std::to_string(r.atlas_count) + " RP" + std::to_string(r.rate_point));
            }
        }
        list.push_back(r);
    }
    for (auto& [a, list] : out) {
        std::sort(list.begin(), list.end(),
                  [](const RDRecord& x, const RDRecord& y) { return x.rate_point < y.rate_point; });
    }
    return out;
}

const RDRecord* find_rp(const std::vector<RDRecord>& list, int rp) {
    for (const auto& r : list) {
        if (r.rate_point == rp) return &r;
    }
    return nullptr;
}

std::string mark_of(const std::vector<ColumnMarks>& marks, const std::string& column, int rp) {
    for (const auto& m : marks) {
        if (m.column != column) continue;
        if (m.best_rate_point == rp) return "*";
        if (m.second_rate_point == rp) return "+";
    }
    return " ";
}

} // namespace

std::string_view to_string(Pipeline p) { return p == Pipeline::Dsde ? "dsde" : "dsgs"; }

Pipeline parse_pipeline(std::string_view s) {
    if (s == "dsde") return Pipeline::Dsde;
    if (s == "dsgs") return Pipeline::Dsgs;
    throw ParseError("unknown pipeline '" + std::string(s) + "'");
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
    std::vector<std::string> pipes;
    for (auto p : c.pipelines) pipes.emplace_back(to_string(p));
    j = nlohmann::json{
        {"scene", c.scene},
        {"atlas_counts", c.atlas_counts},
        {"rate_points", c.rate_points},
        {"pipelines", pipes},
        {"predictor",
         {{"subsample", c.predictor.subsample},
          {"init_planes", c.predictor.init_planes},
          {"refine_iters", c.predictor.refine_iters},
          {"opacity_init", c.predictor.opacity_init},
          {"prune_alpha", c.predictor.prune_alpha},
          {"sh_degree", c.predictor.sh_degree},
          {"seed", c.predictor.seed},
          {"depth_min", c.predictor.depth_min},
          {"depth_max", c.predictor.depth_max}}},
        {"dsde",
         {{"planes", c.dsde.planes},
          {"depth_min", c.dsde.depth_min},
          {"depth_max", c.dsde.depth_max},
          {"max_sources", c.dsde.max_sources}}},
        {"output_dir", c.output_dir},
        {"emit_timings", c.emit_timings},
        {"assert_verdict", c.assert_verdict},
        {"workers", c.workers},
    };
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
    if (!j.is_object()) throw ParseError("experiment config must be a JSON object");
    c = ExperimentConfig{};
    try {
        if (j.contains("scene")) c.scene = j.at("scene").get<SceneSpec>();
        if (j.contains("atlas_counts")) c.atlas_counts = j.at("atlas_counts").get<std::vector<int>>();
        if (j.contains("rate_points")) c.rate_points = j.at("rate_points").get<std::vector<int>>();
        if (j.contains("pipelines")) {
            c.pipelines.clear();
            for (const auto& p : j.at("pipelines")) c.pipelines.push_back(parse_pipeline(p.get<std::string>()));
        }
        c.predictor.sh_degree = c.scene.kind == SceneKind::SpecularSphere ? 2 : 0;
        if (j.contains("predictor")) {
            const auto& p = j.at("predictor");
            c.predictor.subsample = p.value("subsample", c.predictor.subsample);
            c.predictor.init_planes = p.value("init_planes", c.predictor.init_planes);
            c.predictor.refine_iters = p.value("refine_iters", c.predictor.refine_iters);
            c.predictor.opacity_init = p.value("opacity_init", c.predictor.opacity_init);
            c.predictor.prune_alpha = p.value("prune_alpha", c.predictor.prune_alpha);
            c.predictor.sh_degree = p.value("sh_degree", c.predictor.sh_degree);
            c.predictor.seed = p.value("seed", c.predictor.seed);
            c.predictor.depth_min = p.value("depth_min", c.predictor.depth_min);
            c.predictor.depth_max = p.value("depth_max", c.predictor.depth_max);
        }
        if (j.contains("dsde")) {
            const auto& d = j.at("dsde");
            c.dsde.planes = d.value("planes", c.dsde.planes);
            c.dsde.depth_min = d.value("depth_min", c.dsde.depth_min);
            c.dsde.depth_max = d.value("depth_max", c.dsde.depth_max);
            c.dsde.max_sources = d.value("max_sources", c.dsde.max_sources);
        }
        c.output_dir = j.value("output_dir", c.output_dir);
        c.emit_timings = j.value("emit_timings", c.emit_timings);
        c.assert_verdict = j.value("assert_verdict", c.assert_verdict);
        c.workers = j.value("workers", c.workers);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what());
    }
    c.predictor.workers = c.workers;
    c.dsde.workers = c.workers;
}

void validate(const ExperimentConfig& c) {
    validate(c.scene);
    validate(c.predictor);
    auto non_empty_unique = [](const auto& v, const char* what) {
        if (v.empty()) throw ConfigError(std::string(what) + " must not be empty");
        std::set<std::decay_t<decltype(v.front())>> seen(v.begin(), v.end());
        if (seen.size() != v.size()) throw ConfigError(std::string(what) + " has duplicates");
    };
    non_empty_unique(c.atlas_counts, "atlas_counts");
    non_empty_unique(c.rate_points, "rate_points");
    non_empty_unique(c.pipelines, "pipelines");
    for (int a : c.atlas_counts) {
        if (a != 1 && a != 2) throw ConfigError("atlas_counts entries must be 1 or 2");
    }
    for (int rp : c.rate_points) {
        if (rp < 0 || rp > kMaxRatePoint) throw ConfigError("rate_points entries must be in 0..4");
    }
    if (c.dsde.planes < 2) throw ConfigError("dsde planes must be >= 2");
    if (!(c.dsde.depth_min > 0) || !(c.dsde.depth_max > c.dsde.depth_min)) {
        throw ConfigError("dsde depth range invalid");
    }
    if (c.dsde.max_sources < 1) throw ConfigError("dsde max_sources must be >= 1");
    if (c.workers < 0) throw ConfigError("workers must be >= 0");
}

ExperimentConfig load_experiment(const std::string& path) {
    const auto bytes = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    ExperimentConfig c = j.get<ExperimentConfig>();
    validate(c);
    return c;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

EncodedPoint encode_point(const Dataset& dataset, int atlas_count, int rate_point, int workers) {
    EncodedPoint out;
    out.atlas_count = atlas_count;
    out.rate_point = rate_point;
    const ViewSplit split = staged("split", [&] { return split_transmitted(dataset, atlas_count); });
    out.transmitted = split.transmitted;
    std::vector<SourceView> views;
    for (int id : split.transmitted) views.push_back({id, dataset.views[static_cast<std::size_t>(id)]});
    PackResult packed = staged("pack", [&] { return pack_atlases(views, dataset.cameras, atlas_count, rate_point); });
    std::vector<std::vector<std::uint8_t>> payloads;
    staged("encode", [&] {
        for (const auto& a : packed.atlases) payloads.push_back(encode(a.image, rate_point, workers).payload);
    });
    for (auto& a : packed.atlases) out.source_atlases.push_back(std::move(a.image));
    out.bitstream = staged("mux", [&] { return mux(packed.manifest, payloads); });
    out.hash = fnv1a64(out.bitstream);
    return out;
}

DecodedPoint decode_point(std::span<const std::uint8_t> bitstream, int workers) {
    Demuxed dm = staged("demux", [&] { return demux(bitstream); });
    DecodedPoint out;
    out.rate_point = dm.rate_point;
    out.manifest = std::move(dm.manifest);
    staged("decode", [&] {
        for (const auto& p : dm.payloads) out.atlases.push_back(decode(p, workers));
    });
    out.views = staged("unpack", [&] { return unpack_atlases(out.atlases, out.manifest); });
    return out;
}

Synthesis synthesize(Pipeline pipeline, const DecodedPoint& decoded, const ExperimentConfig& config) {
    std::vector<ImageU8> images;
    std::vector<CameraParams> cams;
    for (const auto& v : decoded.views) {
        images.push_back(v.image);
        cams.push_back(decoded.manifest.cameras.at(static_cast<std::size_t>(v.view_id)));
    }
    const auto& targets = decoded.manifest.cameras;
    Synthesis out;
    if (pipeline == Pipeline::Dsde) {
        DsdeParams params = config.dsde;
        params.workers = config.workers;
        DsdeResult r = staged("dsde", [&] { return dsde_pipeline(images, cams, targets, params); });
        out.views = std::move(r.synthesized);
        return out;
    }
    PredictorConfig pc = config.predictor;
    pc.workers = config.workers;
    const std::vector<CameraParams> cv = to_cv(cams);
    Prediction p = staged("dsgs", [&] { return predict(images, cv, pc); });
    RasterOptions opts;
    opts.workers = config.workers;
    for (const auto& t : to_cv(targets)) out.views.push_back(quantize(render(p.scene, t, opts).color));
    out.scene = std::move(p.scene);
    out.trace = std::move(p.trace);
    return out;
}

RDRecord evaluate_point(const Dataset& dataset, const EncodedPoint& point, Pipeline pipeline,
                        const ExperimentConfig& config) {
    RDRecord r;
    r.pipeline = pipeline;
    r.atlas_count = point.atlas_count;
    r.rate_point = point.rate_point;
    r.size_bytes = point.bitstream.size();
    r.bitstream_hash = fnv1a64(point.bitstream);
    r.transmitted = point.transmitted;
    auto t0 = Clock::now();
    const DecodedPoint decoded = decode_point(point.bitstream, config.workers);
    r.t_decode_ms = ms_since(t0);
    t0 = Clock::now();
    const Synthesis syn = synthesize(pipeline, decoded, config);
    r.t_synth_ms = ms_since(t0);
    if (syn.views.size() != dataset.truth.size()) {
        throw ConfigError("evaluate: synthesized " + std::to_string(syn.views.size()) + " views for " +
                          std::to_string(dataset.truth.size()) + " cameras");
    }
    std::vector<int> ids;
    for (const auto& c : decoded.manifest.cameras) ids.push_back(c.id);
    r.quality = staged("metrics", [&] { return evaluate_views(syn.views, dataset.truth, ids, config.workers); });
    fill_summary(r);
    return r;
}

RDRecord run_point(const ExperimentConfig& config, Pipeline pipeline, int atlas_count, int rate_point) {
    validate(config);
    const Dataset dataset = staged("scenegen", [&] { return generate(config.scene); });
    const EncodedPoint point = encode_point(dataset, atlas_count, rate_point, config.workers);
    return evaluate_point(dataset, point, pipeline, config);
}

SweepResult sweep(const ExperimentConfig& config) {
    validate(config);
    const Dataset dataset = staged("scenegen", [&] { return generate(config.scene); });
    const bool write = !config.output_dir.empty();
    const fs::path dir(config.output_dir);
    if (write) {
        std::error_code ec;
        fs::create_directories(dir / "streams", ec);
        if (ec) throw IoError("cannot create " + (dir / "streams").string() + ": " + ec.message());
    }
    SweepResult out;
    std::ostringstream streams;
    streams << "atlas_count,rate_point,size_bytes,fnv1a64\n";
    for (int atlas : config.atlas_counts) {
        for (int rp : config.rate_points) {
            const std::string tag = "a" + std::to_string(atlas) + "_rp" + std::to_string(rp);
            EncodedPoint point;
            std::uint64_t size = 0;
            try {
                point = encode_point(dataset, atlas, rp, config.workers);
                size = point.bitstream.size();
                if (write) {
                    const fs::path file = dir / "streams" / (tag + ".ivb");
                    write_file(file.string(), point.bitstream);
                    size = fs::file_size(file);
                }
            } catch (const std::exception& e) {
                for (auto p : config.pipelines) {
                    out.failures.push_back(std::string(to_string(p)) + "," + std::to_string(atlas) + "," +
                                           std::to_string(rp) + ": " + e.what());
                }
                continue;
            }
            streams << atlas << ',' << rp << ',' << size << ',' << hex64(point.hash) << '\n';
            for (auto p : config.pipelines) {
                try {
                    RDRecord r = evaluate_point(dataset, point, p, config);
                    r.size_bytes = size;
                    out.records.push_back(std::move(r));
                } catch (const std::exception& e) {
                    out.failures.push_back(std::string(to_string(p)) + "," + std::to_string(atlas) + "," +
                                           std::to_string(rp) + ": " + e.what());
                }
            }
        }
    }
    if (write) {
        write_text(dir / "sweep.csv", sweep_csv(out.records, config.emit_timings));
        std::ostringstream timings;
        timings << "pipeline,atlas_count,rate_point,t_decode_ms,t_synth_ms\n";
        for (const auto& r : out.records) {
            timings << to_string(r.pipeline) << ',' << r.atlas_count << ',' << r.rate_point << ','
                    << fmt(r.t_decode_ms) << ',' << fmt(r.t_synth_ms) << '\n';
        }
        write_text(dir / "timings.csv", timings.str());
        write_text(dir / "streams.csv", streams.str());
        std::string fails;
        for (const auto& f : out.failures) fails += f + "\n";
        write_text(dir / "failures.txt", fails);
    }
    return out;
}

std::string sweep_csv(std::span<const RDRecord> records, bool with_timings) {
    std::string out = "pipeline,atlas_count,rate_point,size_bytes,view_id,psnr_db,ssim,mean_psnr,mean_ssim,"
                      "delta_psnr,delta_ssim,t_decode_ms,t_synth_ms\n";
    for (const auto& r : records) {
        const std::string tail = fmt(r.mean_psnr) + ',' + fmt(r.mean_ssim) + ',' + fmt(r.delta_psnr) + ',' +
                                 fmt(r.delta_ssim) + ',' + fmt(with_timings ? r.t_decode_ms : 0.0) + ',' +
                                 fmt(with_timings ? r.t_synth_ms : 0.0) + '\n';
        const std::string head = std::string(to_string(r.pipeline)) + ',' + std::to_string(r.atlas_count) + ',' +
                                 std::to_string(r.rate_point) + ',' + std::to_string(r.size_bytes) + ',';
        for (std::size_t i = 0; i < r.quality.size(); ++i) {
            out += head + std::to_string(r.quality.view_ids[i]) + ',' + fmt(r.quality.psnr_db[i]) + ',' +
                   fmt(r.quality.ssim[i]) + ',' + tail;
        }
    }
    return out;
}

std::vector<RDRecord> parse_sweep_csv(const std::string& text) {
    std::vector<std::string_view> lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("csv is empty");
    const std::string expected = "pipeline,atlas_count,rate_point,size_bytes,view_id,psnr_db,ssim,mean_psnr,"
                                 "mean_ssim,delta_psnr,delta_ssim,t_decode_ms,t_synth_ms";
    if (lines[0] != expected) throw ParseError("csv header does not match the sweep schema");
    std::vector<RDRecord> out;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto f = split(lines[n], ',');
        if (f.size() != 13) {
            throw ParseError("csv line " + std::to_string(n + 1) + ": expected 13 fields, got " +
                             std::to_string(f.size()));
        }
        RDRecord r;
        r.pipeline = parse_pipeline(f[0]);
        r.atlas_count = parse_number<int>(f[1], "atlas_count", n + 1);
        r.rate_point = parse_number<int>(f[2], "rate_point", n + 1);
        r.size_bytes = parse_number<std::uint64_t>(f[3], "size_bytes", n + 1);
        r.mean_psnr = parse_number<double>(f[7], "mean_psnr", n + 1);
        r.mean_ssim = parse_number<double>(f[8], "mean_ssim", n + 1);
        r.delta_psnr = parse_number<double>(f[9], "delta_psnr", n + 1);
        r.delta_ssim = parse_number<double>(f[10], "delta_ssim", n + 1);
        r.t_decode_ms = parse_number<double>(f[11], "t_decode_ms", n + 1);
        r.t_synth_ms = parse_number<double>(f[12], "t_synth_ms", n + 1);
        const int view = parse_number<int>(f[4], "view_id", n + 1);
        const double p = parse_number<double>(f[5], "psnr_db", n + 1);
        const double s = parse_number<double>(f[6], "ssim", n + 1);
        const bool same = !out.empty() && out.back().pipeline == r.pipeline &&
                          out.back().atlas_count == r.atlas_count && out.back().rate_point == r.rate_point;
        if (!same) out.push_back(r);
        RDRecord& dst = out.back();
        dst.quality.view_ids.push_back(view);
        dst.quality.psnr_db.push_back(p);
        dst.quality.ssim.push_back(s);
    }
    return out;
}

std::vector<ColumnMarks> mark_columns(std::span<const RDRecord> records) {
    struct Column {
        const char* name;
        double (*get)(const RDRecord&);
        bool higher_better;
    };
    const Column columns[] = {
        {"mean_psnr", [](const RDRecord& r) { return r.mean_psnr; }, true},
        {"mean_ssim", [](const RDRecord& r) { return r.mean_ssim; }, true},
        {"delta_psnr", [](const RDRecord& r) { return r.delta_psnr; }, false},
        {"delta_ssim", [](const RDRecord& r) { return r.delta_ssim; }, false},
    };
    std::vector<ColumnMarks> out;
    for (const auto& c : columns) {
        std::vector<const RDRecord*> order;
        for (const auto& r : records) order.push_back(&r);
        std::stable_sort(order.begin(), order.end(), [&](const RDRecord* a, const RDRecord* b) {
            const double va = c.get(*a), vb = c.get(*b);
            if (va != vb) return c.higher_better ? va > vb : va < vb;
            return a->rate_point < b->rate_point;
        });
        ColumnMarks m;
        m.column = c.name;
        if (!order.empty()) m.best_rate_point = order[0]->rate_point;
        if (order.size() > 1) m.second_rate_point = order[1]->rate_point;
        out.push_back(m);
    }
    return out;
}

CompareReport compare(std::span<const RDRecord> anchor, std::span<const RDRecord> test) {
    const auto a = by_atlas(anchor, "anchor");
    const auto t = by_atlas(test, "test");
    std::set<int> ka, kt;
    for (const auto& [k, v] : a) ka.insert(k);
    for (const auto& [k, v] : t) kt.insert(k);
    if (ka.empty() || ka != kt) throw ConfigError("compare: anchor and test cover different atlas counts");
    CompareReport report;
    std::ostringstream text;
    text << kReportHeader;
    text << "marks: * best in column, + second best (per record set and atlas count)\n";
    for (int atlas : ka) {
        const auto& la = a.at(atlas);
        const auto& lt = t.at(atlas);
        AtlasComparison cmp;
        cmp.atlas_count = atlas;
        std::vector<RDRecord> sa, st;
        for (const auto& r : la) {
            if (const RDRecord* o = find_rp(lt, r.rate_point)) {
                cmp.rate_points.push_back(r.rate_point);
                sa.push_back(r);
                st.push_back(*o);
            }
        }
        if (cmp.rate_points.size() < 4) {
            throw ConfigError("compare: atlas_count " + std::to_string(atlas) + " shares only " +
                              std::to_string(cmp.rate_points.size()) + " rate points (need 4)");
        }
        RDCurve ca{"anchor", {}}, ct{"test", {}}, sa_curve{"anchor", {}}, st_curve{"test", {}};
        for (std::size_t i = 0; i < sa.size(); ++i) {
            ca.points.push_back({static_cast<double>(sa[i].size_bytes), sa[i].mean_psnr});
            ct.points.push_back({static_cast<double>(st[i].size_bytes), st[i].mean_psnr});
            sa_curve.points.push_back({static_cast<double>(sa[i].size_bytes), sa[i].mean_ssim});
            st_curve.points.push_back({static_cast<double>(st[i].size_bytes), st[i].mean_ssim});
            cmp.delta_mean_psnr.push_back(st[i].mean_psnr - sa[i].mean_psnr);
            cmp.delta_mean_ssim.push_back(st[i].mean_ssim - sa[i].mean_ssim);
            cmp.delta_iv_psnr.push_back(st[i].delta_psnr - sa[i].delta_psnr);
            cmp.delta_iv_ssim.push_back(st[i].delta_ssim - sa[i].delta_ssim);
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        auto guarded = [&](auto fn) {
            try {
                return fn();
            } catch (const NoOverlapError&) {
                return nan;
            }
        };
        cmp.bd_psnr = guarded([&] { return bd_quality(ca, ct); });
        cmp.bd_ssim = guarded([&] { return bd_quality(sa_curve, st_curve); });
        cmp.bd_rate_psnr = guarded([&] { return bd_rate(ca, ct); });
        cmp.anchor_marks = mark_columns(sa);
        cmp.test_marks = mark_columns(st);

        text << "\natlas_count " << atlas << "\n";
        text << "BD-PSNR " << fixed(cmp.bd_psnr, 3) << " dB, BD-SSIM " << fixed(cmp.bd_ssim, 5) << ", BD-rate "
             << fixed(cmp.bd_rate_psnr, 2) << " %\n";
        text << "RP  size_a      size_t      psnr_a    psnr_t    ssim_a    ssim_t    dpsnr_a  dpsnr_t  "
                "d(psnr)  d(ssim)   d(iv_psnr)\n";
        for (std::size_t i = 0; i < sa.size(); ++i) {
            const int rp = cmp.rate_points[i];
            char line[320];
            std::snprintf(line, sizeof line,
                          "RP%d %-11llu %-11llu %7.3f%s %7.3f%s %7.5f%s %7.5f%s %6.3f%s %6.3f%s %+7.3f  %+8.5f  %+7.3f\n",
                          rp, static_cast<unsigned long long>(sa[i].size_bytes),
                          static_cast<unsigned long long>(st[i].size_bytes), sa[i].mean_psnr,
                          mark_of(cmp.anchor_marks, "mean_psnr", rp).c_str(), st[i].mean_psnr,
                          mark_of(cmp.test_marks, "mean_psnr", rp).c_str(), sa[i].mean_ssim,
                          mark_of(cmp.anchor_marks, "mean_ssim", rp).c_str(), st[i].mean_ssim,
                          mark_of(cmp.test_marks, "mean_ssim", rp).c_str(), sa[i].delta_psnr,
                          mark_of(cmp.anchor_marks, "delta_psnr", rp).c_str(), st[i].delta_psnr,
                          mark_of(cmp.test_marks, "delta_psnr", rp).c_str(), cmp.delta_mean_psnr[i],
                          cmp.delta_mean_ssim[i], cmp.delta_iv_psnr[i]);
            text << line;
        }
        report.atlases.push_back(std::move(cmp));
    }
    report.text = text.str();
    return report;
}

RegularizerReport regularizer_experiment(const ExperimentConfig& config) {
    validate(config);
    if (config.scene.kind != SceneKind::NoiseAugmented) {
        throw ConfigError("regularizer experiment needs a noise_augmented scene, got " +
                          std::string(to_string(config.scene.kind)));
    }
    const Dataset dataset = staged("scenegen", [&] { return generate(config.scene); });
    const int atlas = config.atlas_counts.front();
    RegularizerReport report;
    for (int rp : config.rate_points) {
        const EncodedPoint point = encode_point(dataset, atlas, rp, config.workers);
        const DecodedPoint decoded = decode_point(point.bitstream, config.workers);
        const Synthesis syn = synthesize(Pipeline::Dsgs, decoded, config);
        RegularizerRow row;
        row.rate_point = rp;
        row.size_bytes = point.bitstream.size();
        row.splats = syn.scene.gaussians.size();
        std::vector<int> ids;
        for (const auto& c : decoded.manifest.cameras) ids.push_back(c.id);
        const QualityVector q = evaluate_views(syn.views, dataset.truth, ids, config.workers);
        row.mean_psnr = mean(q.psnr_db);
        row.mean_ssim = mean(q.ssim);
        std::vector<double> held;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (std::find(point.transmitted.begin(), point.transmitted.end(), q.view_ids[i]) ==
                point.transmitted.end()) {
                held.push_back(q.psnr_db[i]);
            }
        }
        row.heldout_psnr = held.empty() ? row.mean_psnr : mean(held);
        if (rp > 0) {
            double s = 0;
            for (std::size_t i = 0; i < point.source_atlases.size(); ++i) {
                s += spectral_report(point.source_atlases[i], decoded.atlases[i]);
            }
            row.spectral_ratio = s / static_cast<double>(point.source_atlases.size());
        }
        std::vector<ImageU8> images;
        std::vector<CameraParams> cams;
        for (const auto& v : decoded.views) {
            images.push_back(v.image);
            cams.push_back(decoded.manifest.cameras.at(static_cast<std::size_t>(v.view_id)));
        }
        row.floaters = floater_census(syn.scene, images, to_cv(cams), config.workers).count;
        report.rows.push_back(row);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        if (report.rows[i].heldout_psnr > report.rows[best].heldout_psnr) best = i;
    }
    report.best_rate_point = report.rows[best].rate_point;
    report.lossy_peak = report.best_rate_point == 1 || report.best_rate_point == 2;
    const RegularizerRow* r0 = nullptr;
    const RegularizerRow* r1 = nullptr;
    for (const auto& r : report.rows) {
        if (r.rate_point == 0) r0 = &r;
        if (r.rate_point == 1) r1 = &r;
    }
    report.floaters_non_increasing = r0 && r1 && r1->floaters <= r0->floaters;
    report.verdict_holds = report.lossy_peak && report.floaters_non_increasing;

    std::ostringstream text;
    text << kReportHeader;
    text << "regularizer experiment: " << to_string(config.scene.kind) << " over "
         << to_string(config.scene.base_kind) << ", noise_sigma " << fmt(config.scene.noise_sigma) << ", seed "
         << config.scene.seed << ", " << atlas << " atlas\n";
    text << "RP  size_bytes  heldout_psnr  mean_psnr  mean_ssim  spectral  floaters  splats\n";
    for (const auto& r : report.rows) {
        char line[200];
        std::snprintf(line, sizeof line, "RP%d %-11llu %-13.4f %-10.4f %-10.5f %-9.4f %-9zu %zu%s\n", r.rate_point,
                      static_cast<unsigned long long>(r.size_bytes), r.heldout_psnr, r.mean_psnr, r.mean_ssim,
                      r.spectral_ratio, r.floaters, r.splats, r.rate_point == report.best_rate_point ? "  *" : "");
        text << line;
    }
    text << "verdict: argmax-quality rate point RP" << report.best_rate_point
         << (report.best_rate_point != 0 ? " (lossy beats lossless)" : " (lossless is best)")
         << "; floaters RP1 <= RP0: " << (r0 && r1 ? (report.floaters_non_increasing ? "yes" : "no") : "n/a")
         << "\n";
    report.text = text.str();
    if (!config.output_dir.empty()) {
        std::error_code ec;
        fs::create_directories(config.output_dir, ec);
        write_text(fs::path(config.output_dir) / "regularizer.txt", report.text);
    }
    return report;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("loglog_slope needs >= 2 paired samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw ConfigError("loglog_slope needs positive samples");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0)) throw ConfigError("loglog_slope needs distinct x values");
    return sxy / sxx;
}

ScalingReport scaling_probe(const ExperimentConfig& config, int repeats) {
    validate(config);
    if (repeats < 1) throw ConfigError("scaling probe repeats must be >= 1");
    ScalingReport report;
    auto min_time = [&](auto&& fn) {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < repeats; ++i) {
            const auto t0 = Clock::now();
            fn();
            best = std::min(best, ms_since(t0));
        }
        return best;
    };

    const Dataset base = generate(config.scene);
    const ViewSplit split = split_transmitted(base, 1);
    const int ref = split.transmitted[split.transmitted.size() / 2];
    std::vector<int> others;
    for (int id : split.transmitted) {
        if (id != ref) others.push_back(id);
    }
    std::stable_sort(others.begin(), others.end(), [&](int a, int b) { return std::abs(a - ref) < std::abs(b - ref); });
    others.resize(std::min<std::size_t>(others.size(), static_cast<std::size_t>(config.dsde.max_sources)));
    std::vector<ImageF> sources;
    std::vector<CameraParams> source_cams;
    for (int id : others) {
        sources.push_back(to_float(base.views[static_cast<std::size_t>(id)]));
        source_cams.push_back(base.cameras[static_cast<std::size_t>(id)]);
    }
    const ImageF ref_img = to_float(base.views[static_cast<std::size_t>(ref)]);
    for (int planes : {32, 64, 128}) {
        report.plane_counts.push_back(planes);
        report.cost_volume_ms.push_back(min_time([&] {
            (void)build_cost_volume(ref_img, base.cameras[static_cast<std::size_t>(ref)], sources, source_cams, planes,
                                    config.dsde.depth_min, config.dsde.depth_max, config.workers);
        }));
    }

    PredictorConfig pc = config.predictor;
    pc.workers = config.workers;
    const std::pair<int, int> sizes[] = {{1, 1}, {2, 1}, {2, 2}};
    for (const auto& [fw, fh] : sizes) {
        SceneSpec spec = config.scene;
        spec.width *= fw;
        spec.height *= fh;
        const Dataset ds = generate(spec);
        const ViewSplit sp = split_transmitted(ds, 1);
        std::vector<ImageU8> views;
        std::vector<CameraParams> cams;
        for (int id : sp.transmitted) {
            views.push_back(ds.views[static_cast<std::size_t>(id)]);
            cams.push_back(convert_convention(ds.cameras[static_cast<std::size_t>(id)], Convention::CV));
        }
        const SeededScene seeded = init_splats(views, cams, pc);
        report.splat_counts.push_back(seeded.scene.gaussians.size());
        report.refine_ms.push_back(min_time([&] { (void)refine_splats(seeded, views, cams, pc); }));
    }
    std::vector<double> np(report.plane_counts.begin(), report.plane_counts.end());
    std::vector<double> ns(report.splat_counts.begin(), report.splat_counts.end());
    report.dsde_exponent = loglog_slope(np, report.cost_volume_ms);
    report.dsgs_exponent = loglog_slope(ns, report.refine_ms);

    std::ostringstream text;
    text << kReportHeader;
    text << "scaling probe (min of " << repeats << " runs)\n";
    text << "cost volume: planes, ms\n";
    for (std::size_t i = 0; i < np.size(); ++i) {
        text << "  " << report.plane_counts[i] << ", " << fixed(report.cost_volume_ms[i], 2) << "\n";
    }
    text << "refinement (" << pc.refine_iters << " iterations): splats, ms\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        text << "  " << report.splat_counts[i] << ", " << fixed(report.refine_ms[i], 2) << "\n";
    }
    text << "exponent dsde vs planes: " << fixed(report.dsde_exponent, 3) << "\n";
    text << "exponent dsgs vs splats: " << fixed(report.dsgs_exponent, 3) << "\n";
    report.text = text.str();
    if (!config.output_dir.empty()) {
        std::error_code ec;
        fs::create_directories(config.output_dir, ec);
        write_text(fs::path(config.output_dir) / "scaling.txt", report.text);
    }
    return report;
}

} // namespace ivb
