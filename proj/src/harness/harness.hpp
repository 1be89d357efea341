// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "container/container.hpp"
#include "dsde/dsde.hpp"
#include "dsgs/dsgs.hpp"
#include "metrics/metrics.hpp"
#include "scenegen/scenegen.hpp"

namespace ivb {

enum class Pipeline { Dsde, Dsgs };

std::string_view to_string(Pipeline p);
Pipeline parse_pipeline(std::string_view s);

struct ExperimentConfig {
    SceneSpec scene;
    std::vector<int> atlas_counts{1};
    std::vector<int> rate_points{0, 1, 2, 3, 4};
    std::vector<Pipeline> pipelines{Pipeline::Dsde, Pipeline::Dsgs};
    PredictorConfig predictor;
    DsdeParams dsde;
    std::string output_dir;
    /// Wall times go into the sweep CSV only when set; otherwise the columns are 0.
    bool emit_timings = false;
    /// Regularizer verdict becomes an assertion (committed configs only).
    bool assert_verdict = false;
    int workers = 0;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Missing keys take defaults; predictor.sh_degree defaults to 2 for
/// specular_sphere scenes and 0 otherwise.
void from_json(const nlohmann::json& j, ExperimentConfig& c);
void validate(const ExperimentConfig& c);
ExperimentConfig load_experiment(const std::string& path);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t v);

/// One muxed bitstream for an (atlas_count, rate_point) pair.
struct EncodedPoint {
    int atlas_count = 1;
    int rate_point = 0;
    std::vector<int> transmitted;
    std::vector<ImageU8> source_atlases; // before coding
    std::vector<std::uint8_t> bitstream;
    std::uint64_t hash = 0;
};

EncodedPoint encode_point(const Dataset& dataset, int atlas_count, int rate_point, int workers = 0);

struct DecodedPoint {
    int rate_point = 0;
    Manifest manifest;
    std::vector<SourceView> views;
    std::vector<ImageU8> atlases;
};

DecodedPoint decode_point(std::span<const std::uint8_t> bitstream, int workers = 0);

/// Views at every manifest camera, indexed by camera id.
struct Synthesis {
    std::vector<ImageU8> views;
    GaussianScene scene; // dsgs only
    RefineTrace trace;   // dsgs only
};

Synthesis synthesize(Pipeline pipeline, const DecodedPoint& decoded, const ExperimentConfig& config);

struct RDRecord {
    Pipeline pipeline = Pipeline::Dsde;
    int atlas_count = 1;
    int rate_point = 0;
    std::uint64_t size_bytes = 0;
    QualityVector quality;
    double mean_psnr = 0;
    double mean_ssim = 0;
    double delta_psnr = 0;
    double delta_ssim = 0;
    double t_decode_ms = 0;
    double t_synth_ms = 0;
    std::uint64_t bitstream_hash = 0;
    std::vector<int> transmitted;

    friend bool operator==(const RDRecord&, const RDRecord&) = default;
};

/// Decodes `point`, synthesizes every camera and scores against dataset truth.
RDRecord evaluate_point(const Dataset& dataset, const EncodedPoint& point, Pipeline pipeline,
                        const ExperimentConfig& config);

RDRecord run_point(const ExperimentConfig& config, Pipeline pipeline, int atlas_count, int rate_point);

struct SweepResult {
    std::vector<RDRecord> records;
    std::vector<std::string> failures;
};

/// Order: atlas_count, rate_point, pipeline as listed in the config. Writes
/// sweep.csv, timings.csv, streams.csv, failures.txt and streams/*.ivb when
/// output_dir is set.
SweepResult sweep(const ExperimentConfig& config);

/// Long format, one line per evaluated view.
std::string sweep_csv(std::span<const RDRecord> records, bool with_timings);
/// Inverse of sweep_csv (hash and transmitted list are not stored).
std::vector<RDRecord> parse_sweep_csv(const std::string& text);

struct ColumnMarks {
    std::string column;
    int best_rate_point = -1;
    int second_rate_point = -1;
};

struct AtlasComparison {
    int atlas_count = 1;
    double bd_psnr = 0;
    double bd_ssim = 0;
    double bd_rate_psnr = 0;
    std::vector<int> rate_points;
    std::vector<double> delta_mean_psnr;  // test - anchor
    std::vector<double> delta_mean_ssim;
    std::vector<double> delta_iv_psnr;
    std::vector<double> delta_iv_ssim;
    std::vector<ColumnMarks> anchor_marks;
    std::vector<ColumnMarks> test_marks;
};

struct CompareReport {
    std::vector<AtlasComparison> atlases;
    std::string text;
};

/// Best / second-best per column over rate points, higher-is-better for
/// mean_psnr / mean_ssim, lower-is-better for delta_psnr / delta_ssim.
std::vector<ColumnMarks> mark_columns(std::span<const RDRecord> records);

/// Records of one pipeline each; atlas coverage must match and each atlas
/// count needs at least 4 shared rate points.
CompareReport compare(std::span<const RDRecord> anchor, std::span<const RDRecord> test);

struct RegularizerRow {
    int rate_point = 0;
    std::uint64_t size_bytes = 0;
    double heldout_psnr = 0;
    double mean_psnr = 0;
    double mean_ssim = 0;
    double spectral_ratio = 1;
    std::size_t floaters = 0;
    std::size_t splats = 0;
};

struct RegularizerReport {
    std::vector<RegularizerRow> rows;
    int best_rate_point = 0;
    bool lossy_peak = false;              // argmax is RP1 or RP2
    bool floaters_non_increasing = false; // RP1 count <= RP0 count
    bool verdict_holds = false;
    std::string text;
};

/// Runs dsgs over every configured rate point on the first atlas count.
/// Quality is mean PSNR over cameras not transmitted.
RegularizerReport regularizer_experiment(const ExperimentConfig& config);

struct ScalingReport {
    std::vector<int> plane_counts;
    std::vector<double> cost_volume_ms;
    std::vector<std::size_t> splat_counts;
    std::vector<double> refine_ms;
    double dsde_exponent = 0;
    double dsgs_exponent = 0;
    std::string text;
};

/// Least-squares slope of log(y) over log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Cost volume over N_d in {32, 64, 128} at the scene resolution; refinement
/// over views of W x H, 2W x H and 2W x 2H (N, 2N, 4N splats). Each timing
/// is the minimum of `repeats` runs.
ScalingReport scaling_probe(const ExperimentConfig& config, int repeats = 3);

} // namespace ivb
