// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "common/bytes.hpp"
#include "common/error.hpp"
#include "harness/harness.hpp"

namespace ivb {
namespace {

namespace fs = std::filesystem;

ExperimentConfig tiny(const std::string& out_dir = "") {
    ExperimentConfig c;
    c.scene.kind = SceneKind::TexturedPlane;
    c.scene.rig = RigKind::Linear4;
    c.scene.width = 96;
    c.scene.height = 64;
    c.scene.splat_count = 3000;
    c.rate_points = {0, 1, 2, 3};
    c.predictor.refine_iters = 1;
    c.output_dir = out_dir;
    return c;
}

RDRecord column_record(int rp, double psnr, double ssim) {
    RDRecord r;
    r.pipeline = Pipeline::Dsgs;
    r.rate_point = rp;
    r.mean_psnr = psnr;
    r.mean_ssim = ssim;
    return r;
}

std::string slurp(const fs::path& p) {
    const auto b = read_file(p.string());
    return {b.begin(), b.end()};
}

TEST(Harness, PipelineNames) {
    EXPECT_EQ(parse_pipeline("dsde"), Pipeline::Dsde);
    EXPECT_EQ(to_string(Pipeline::Dsgs), "dsgs");
    EXPECT_THROW(parse_pipeline("dibr"), ParseError);
}

TEST(Harness, ConfigJsonRoundTrip) {
    ExperimentConfig c = tiny("somewhere");
    c.atlas_counts = {1, 2};
    c.pipelines = {Pipeline::Dsgs};
    c.predictor.sh_degree = 1;
    c.dsde.planes = 48;
    const nlohmann::json j = c;
    const ExperimentConfig back = j.get<ExperimentConfig>();
    EXPECT_EQ(nlohmann::json(back), j);
    EXPECT_EQ(back.scene, c.scene);
    EXPECT_EQ(back.atlas_counts, c.atlas_counts);
    EXPECT_EQ(back.dsde.planes, 48);
}

TEST(Harness, ConfigDefaults) {
    const auto spec = nlohmann::json::parse(R"({"scene": {"kind": "specular_sphere"}})").get<ExperimentConfig>();
    EXPECT_EQ(spec.predictor.sh_degree, 2);
    EXPECT_EQ(spec.pipelines.size(), 2u);
    EXPECT_EQ(spec.rate_points.size(), 5u);
    const auto plain = nlohmann::json::parse(R"({"scene": {"kind": "box_room"}})").get<ExperimentConfig>();
    EXPECT_EQ(plain.predictor.sh_degree, 0);
}

TEST(Harness, ConfigValidation) {
    ExperimentConfig c = tiny();
    c.atlas_counts = {3};
    EXPECT_THROW(validate(c), ConfigError);
    c = tiny();
    c.rate_points = {};
    EXPECT_THROW(validate(c), ConfigError);
    c = tiny();
    c.rate_points = {1, 1};
    EXPECT_THROW(validate(c), ConfigError);
    EXPECT_THROW(nlohmann::json::parse(R"({"pipelines": ["x"]})").get<ExperimentConfig>(), ParseError);
    EXPECT_THROW(nlohmann::json::parse("[1]").get<ExperimentConfig>(), ParseError);
}

TEST(Harness, CommittedConfigsLoad) {
    for (const char* name : {"default", "specular_sphere", "noise_augmented", "box_room", "sphere_field", "scaling"}) {
        const ExperimentConfig c = load_experiment(std::string(IVBENCH_SOURCE_DIR "/configs/") + name + ".json");
        EXPECT_NO_THROW(validate(c)) << name;
        EXPECT_NO_THROW(validate(c.scene)) << name;
    }
    const ExperimentConfig d = load_experiment(IVBENCH_SOURCE_DIR "/configs/default.json");
    EXPECT_EQ(d.pipelines.size() * d.atlas_counts.size() * d.rate_points.size(), 10u);
    EXPECT_THROW(load_experiment(IVBENCH_SOURCE_DIR "/configs/missing.json"), IoError);
}

TEST(Harness, DefaultSceneRateRatio) {
    const ExperimentConfig c = load_experiment(IVBENCH_SOURCE_DIR "/configs/default.json");
    const Dataset ds = generate(c.scene);
    const EncodedPoint rp0 = encode_point(ds, 1, 0);
    const EncodedPoint rp1 = encode_point(ds, 1, 1);
    EXPECT_EQ(rp0.transmitted, (std::vector<int>{0, 3, 5, 8}));
    EXPECT_LT(rp1.bitstream.size() * 5, rp0.bitstream.size());
    EXPECT_EQ(rp0.hash, fnv1a64(rp0.bitstream));
}

TEST(Harness, EncodeDecodePoint) {
    const ExperimentConfig c = tiny();
    const Dataset ds = generate(c.scene);
    const EncodedPoint p = encode_point(ds, 1, 0);
    const DecodedPoint d = decode_point(p.bitstream);
    ASSERT_EQ(d.views.size(), 4u);
    for (const auto& v : d.views) EXPECT_EQ(v.image, ds.views[static_cast<std::size_t>(v.view_id)]);
    EXPECT_EQ(d.manifest.cameras.size(), ds.cameras.size());
    auto broken = p.bitstream;
    broken.resize(broken.size() - 10);
    try {
        decode_point(broken);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("demux:", 0), 0u) << e.what();
    }
}

TEST(Harness, SweepProtocol) {
    const fs::path dir = fs::temp_directory_path() / "ivb_harness_sweep";
    fs::remove_all(dir);
    const ExperimentConfig c = tiny(dir.string());
    const SweepResult r = sweep(c);
    EXPECT_TRUE(r.failures.empty());
    ASSERT_EQ(r.records.size(), 8u);
    for (std::size_t i = 0; i < r.records.size(); i += 2) {
        const RDRecord& a = r.records[i];
        const RDRecord& b = r.records[i + 1];
        EXPECT_EQ(a.pipeline, Pipeline::Dsde);
        EXPECT_EQ(b.pipeline, Pipeline::Dsgs);
        EXPECT_EQ(a.rate_point, b.rate_point);
        EXPECT_EQ(a.bitstream_hash, b.bitstream_hash);
        EXPECT_EQ(a.quality.view_ids, (std::vector<int>{0, 1, 2, 3}));
        const fs::path stream = dir / "streams" / ("a1_rp" + std::to_string(a.rate_point) + ".ivb");
        EXPECT_EQ(a.size_bytes, fs::file_size(stream));
        EXPECT_EQ(fnv1a64(read_file(stream.string())), a.bitstream_hash);
    }
    const std::string csv = slurp(dir / "sweep.csv");
    EXPECT_EQ(csv, sweep_csv(r.records, false));
    for (const char* f : {"timings.csv", "streams.csv", "failures.txt"}) EXPECT_TRUE(fs::exists(dir / f)) << f;

    const SweepResult again = sweep(c);
    EXPECT_EQ(slurp(dir / "sweep.csv"), csv);

    std::vector<RDRecord> expect = r.records;
    for (auto& e : expect) {
        e.bitstream_hash = 0;
        e.transmitted.clear();
        e.t_decode_ms = e.t_synth_ms = 0;
    }
    EXPECT_EQ(parse_sweep_csv(csv), expect);
    fs::remove_all(dir);
}

TEST(Harness, SweepCsvParsingErrors) {
    EXPECT_THROW(parse_sweep_csv(""), ParseError);
    EXPECT_THROW(parse_sweep_csv("a,b,c\n"), ParseError);
    const std::string header = "pipeline,atlas_count,rate_point,size_bytes,view_id,psnr_db,ssim,mean_psnr,mean_ssim,"
                               "delta_psnr,delta_ssim,t_decode_ms,t_synth_ms\n";
    try {
        parse_sweep_csv(header + "dsde,1,0,100,0,30,0.9,30,0.9,0,0,0,0\ndsde,1,1,90,0\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_sweep_csv(header + "dsde,1,x,100,0,30,0.9,30,0.9,0,0,0,0\n"), ParseError);
}

TEST(Harness, RatePointColumnMarks) {
    const double psnr[] = {24.20, 24.41, 24.43, 24.36, 23.97};
    const double ssim[] = {0.925, 0.927, 0.926, 0.921, 0.907};
    std::vector<RDRecord> recs;
    for (int rp = 0; rp < 5; ++rp) recs.push_back(column_record(rp, psnr[rp], ssim[rp]));
    const auto marks = mark_columns(recs);
    EXPECT_EQ(marks[0].column, "mean_psnr");
    EXPECT_EQ(marks[0].best_rate_point, 2);
    EXPECT_EQ(marks[0].second_rate_point, 1);
    EXPECT_EQ(marks[1].column, "mean_ssim");
    EXPECT_EQ(marks[1].best_rate_point, 1);
    EXPECT_EQ(marks[1].second_rate_point, 2);
}

TEST(Harness, CompareIdentical) {
    std::vector<RDRecord> recs;
    const double sizes[] = {300000, 40000, 22000, 12000, 6000};
    for (int rp = 0; rp < 5; ++rp) {
        RDRecord r = column_record(rp, 30 - rp * 0.8, 0.95 - rp * 0.01);
        r.size_bytes = static_cast<std::uint64_t>(sizes[rp]);
        r.delta_psnr = 3 + rp;
        recs.push_back(r);
    }
    const CompareReport rep = compare(recs, recs);
    ASSERT_EQ(rep.atlases.size(), 1u);
    EXPECT_EQ(rep.atlases[0].bd_psnr, 0.0);
    EXPECT_EQ(rep.atlases[0].bd_ssim, 0.0);
    for (double d : rep.atlases[0].delta_mean_psnr) EXPECT_EQ(d, 0.0);
    for (double d : rep.atlases[0].delta_iv_psnr) EXPECT_EQ(d, 0.0);
    EXPECT_NE(rep.text.find("BD-PSNR"), std::string::npos);
    EXPECT_NE(rep.text.find("synthetic desk-scale benchmark"), std::string::npos);

    std::vector<RDRecord> offset = recs;
    for (auto& r : offset) r.mean_psnr += 1.5;
    EXPECT_NEAR(compare(recs, offset).atlases[0].bd_psnr, 1.5, 1e-9);
}

TEST(Harness, CompareCoverage) {
    std::vector<RDRecord> a, b;
    for (int rp = 0; rp < 5; ++rp) {
        RDRecord r = column_record(rp, 30 - rp, 0.9);
        r.size_bytes = 100000u >> rp;
        a.push_back(r);
        r.atlas_count = 2;
        b.push_back(r);
    }
    EXPECT_THROW(compare(a, b), ConfigError);
    std::vector<RDRecord> three(a.begin(), a.begin() + 3);
    EXPECT_THROW(compare(a, three), ConfigError);
}

TEST(Harness, RegularizerNeedsNoisyScene) {
    EXPECT_THROW(regularizer_experiment(tiny()), ConfigError);
    ExperimentConfig c = tiny();
    c.scene.kind = SceneKind::NoiseAugmented;
    c.scene.base_kind = SceneKind::TexturedPlane;
    c.scene.noise_sigma = 0.0;
    c.rate_points = {0, 1};
    const RegularizerReport r = regularizer_experiment(c);
    ASSERT_EQ(r.rows.size(), 2u);
    EXPECT_EQ(r.rows[0].spectral_ratio, 1.0);
    EXPECT_LE(r.rows[1].spectral_ratio, 1.0);
    EXPECT_NE(r.text.find("verdict"), std::string::npos);
}

TEST(Harness, LogLogSlope) {
    const std::vector<double> x{32, 64, 128};
    const std::vector<double> lin{1.5, 3.0, 6.0};
    const std::vector<double> quad{1, 4, 16};
    EXPECT_NEAR(loglog_slope(x, lin), 1.0, 1e-12);
    EXPECT_NEAR(loglog_slope(x, quad), 2.0, 1e-12);
}

TEST(Harness, Hex64) {
    EXPECT_EQ(hex64(0), "0000000000000000");
    EXPECT_EQ(hex64(0xcbf29ce484222325ull), "cbf29ce484222325");
}

} // namespace
} // namespace ivb
