// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "ivbench/ivbench.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <new>
#include <set>
#include <string>

#include "codec/codec.hpp"
#include "common/bytes.hpp"
#include "common/error.hpp"
#include "harness/harness.hpp"
#include "rasterizer/gaussian.hpp"

struct ivb_text {
    std::string value;
};

struct ivb_buffer {
    std::vector<std::uint8_t> bytes;
};

struct ivb_dataset {
    ivb::Dataset value;
};

struct ivb_decoded {
    ivb::DecodedPoint value;
};

namespace {

namespace fs = std::filesystem;

thread_local std::string g_last_error;

ivb_status fail(ivb_status s, const std::string& message) {
    g_last_error = message;
    return s;
}

/// Runs `fn` and converts exceptions to status codes.
template <class Fn>
ivb_status guard(Fn&& fn) {
    try {
        g_last_error.clear();
        return fn();
    } catch (const ivb::AssertionFailure& e) {
        return fail(IVB_ERR_ASSERTION, e.what());
    } catch (const ivb::ParseError& e) {
        return fail(IVB_ERR_PARSE, e.what());
    } catch (const ivb::IoError& e) {
        return fail(IVB_ERR_IO, e.what());
    } catch (const ivb::ConfigError& e) {
        return fail(IVB_ERR_CONFIG, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(IVB_ERR_PARSE, e.what());
    } catch (const fs::filesystem_error& e) {
        return fail(IVB_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(IVB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(IVB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(IVB_ERR_INTERNAL, "unknown error");
    }
}

nlohmann::json parse_json(const char* text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ivb::ParseError(std::string(what) + ": " + e.what());
    }
}

ivb::ExperimentConfig parse_config(const char* config_json) {
    if (config_json == nullptr) return ivb::ExperimentConfig{};
    ivb::ExperimentConfig c = parse_json(config_json, "config").get<ivb::ExperimentConfig>();
    ivb::validate(c);
    return c;
}

std::string indexed(const fs::path& dir, const char* stem, int id) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04d.ppm", stem, id);
    return (dir / name).string();
}

void make_dir(const char* dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ivb::IoError(std::string("cannot create ") + dir + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    const std::vector<std::uint8_t> bytes(text.begin(), text.end());
    ivb::write_file(path.string(), bytes);
}

std::vector<ivb::RDRecord> select_pipeline(const std::vector<ivb::RDRecord>& all, const char* wanted,
                                           ivb::Pipeline fallback, const char* side) {
    std::set<ivb::Pipeline> present;
    for (const auto& r : all) present.insert(r.pipeline);
    ivb::Pipeline pick = fallback;
    if (wanted != nullptr) {
        pick = ivb::parse_pipeline(wanted);
    } else if (present.size() == 1) {
        pick = *present.begin();
    }
    std::vector<ivb::RDRecord> out;
    for (const auto& r : all) {
        if (r.pipeline == pick) out.push_back(r);
    }
    if (out.empty()) {
        throw ivb::ConfigError(std::string(side) + " has no " + std::string(ivb::to_string(pick)) + " records");
    }
    return out;
}

ivb_text* make_text(std::string s) { return new ivb_text{std::move(s)}; }

} // namespace

extern "C" {

const char* ivb_last_error(void) { return g_last_error.c_str(); }

const char* ivb_status_name(ivb_status status) {
    switch (status) {
    case IVB_OK: return "ok";
    case IVB_ERR_CONFIG: return "config error";
    case IVB_ERR_PARSE: return "parse error";
    case IVB_ERR_ASSERTION: return "assertion failure";
    case IVB_ERR_IO: return "io error";
    case IVB_ERR_ARGUMENT: return "invalid argument";
    case IVB_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* ivb_version(void) { return "0.1.0"; }

const char* ivb_text_data(const ivb_text* text) { return text ? text->value.c_str() : ""; }
size_t ivb_text_size(const ivb_text* text) { return text ? text->value.size() : 0; }
void ivb_text_free(ivb_text* text) { delete text; }

const uint8_t* ivb_buffer_data(const ivb_buffer* buffer) { return buffer ? buffer->bytes.data() : nullptr; }
size_t ivb_buffer_size(const ivb_buffer* buffer) { return buffer ? buffer->bytes.size() : 0; }
void ivb_buffer_free(ivb_buffer* buffer) { delete buffer; }

ivb_status ivb_buffer_read_file(const char* path, ivb_buffer** out) {
    if (path == nullptr || out == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        *out = new ivb_buffer{ivb::read_file(path)};
        return IVB_OK;
    });
}

ivb_status ivb_buffer_write_file(const ivb_buffer* buffer, const char* path) {
    if (buffer == nullptr || path == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    return guard([&] {
        ivb::write_file(path, buffer->bytes);
        return IVB_OK;
    });
}

ivb_status ivb_dataset_generate(const char* config_json, ivb_dataset** out) {
    if (config_json == nullptr || out == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        const nlohmann::json j = parse_json(config_json, "scene config");
        ivb::SceneSpec spec;
        try {
            spec = j.contains("scene") ? j.at("scene").get<ivb::SceneSpec>() : j.get<ivb::SceneSpec>();
        } catch (const nlohmann::json::exception& e) {
            throw ivb::ParseError(std::string("scene config: ") + e.what());
        }
        ivb::validate(spec);
        *out = new ivb_dataset{ivb::generate(spec)};
        return IVB_OK;
    });
}

ivb_status ivb_dataset_load(const char* dir, ivb_dataset** out) {
    if (dir == nullptr || out == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        *out = new ivb_dataset{ivb::load_dataset(dir)};
        return IVB_OK;
    });
}

ivb_status ivb_dataset_save(const ivb_dataset* dataset, const char* dir) {
    if (dataset == nullptr || dir == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    return guard([&] {
        ivb::save_dataset(dataset->value, dir);
        return IVB_OK;
    });
}

int ivb_dataset_camera_count(const ivb_dataset* dataset) {
    return dataset ? static_cast<int>(dataset->value.cameras.size()) : 0;
}

void ivb_dataset_free(ivb_dataset* dataset) { delete dataset; }

ivb_status ivb_encode(const ivb_dataset* dataset, int atlas_count, int rate_point, ivb_buffer** out) {
    if (dataset == nullptr || out == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        if (atlas_count != 1 && atlas_count != 2) throw ivb::ConfigError("atlas count must be 1 or 2");
        if (rate_point < 0 || rate_point > ivb::kMaxRatePoint) throw ivb::ConfigError("rate point must be 0..4");
        ivb::EncodedPoint p = ivb::encode_point(dataset->value, atlas_count, rate_point);
        *out = new ivb_buffer{std::move(p.bitstream)};
        return IVB_OK;
    });
}

ivb_status ivb_decode(const uint8_t* data, size_t size, ivb_decoded** out) {
    if ((data == nullptr && size > 0) || out == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    *out = nullptr;
    return guard([&] {
        *out = new ivb_decoded{ivb::decode_point(std::span<const std::uint8_t>(data, size))};
        return IVB_OK;
    });
}

int ivb_decoded_rate_point(const ivb_decoded* decoded) { return decoded ? decoded->value.rate_point : -1; }
int ivb_decoded_view_count(const ivb_decoded* decoded) {
    return decoded ? static_cast<int>(decoded->value.views.size()) : 0;
}
int ivb_decoded_camera_count(const ivb_decoded* decoded) {
    return decoded ? static_cast<int>(decoded->value.manifest.cameras.size()) : 0;
}

ivb_status ivb_decoded_save(const ivb_decoded* decoded, const char* dir) {
    if (decoded == nullptr || dir == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    return guard([&] {
        make_dir(dir);
        const fs::path d(dir);
        write_text(d / "manifest.json", ivb::manifest_to_json(decoded->value.manifest).dump(2) + "\n");
        for (std::size_t i = 0; i < decoded->value.atlases.size(); ++i) {
            ivb::write_ppm((d / ("atlas_" + std::to_string(i) + ".ppm")).string(), decoded->value.atlases[i]);
        }
        for (const auto& v : decoded->value.views) ivb::write_ppm(indexed(d, "view", v.view_id), v.image);
        return IVB_OK;
    });
}

void ivb_decoded_free(ivb_decoded* decoded) { delete decoded; }

ivb_status ivb_synthesize(const uint8_t* data, size_t size, const char* pipeline, const char* config_json,
                          const char* out_dir) {
    if ((data == nullptr && size > 0) || pipeline == nullptr || out_dir == nullptr) {
        return fail(IVB_ERR_ARGUMENT, "null argument");
    }
    return guard([&] {
        const ivb::Pipeline p = ivb::parse_pipeline(pipeline);
        const ivb::ExperimentConfig config = parse_config(config_json);
        const ivb::DecodedPoint decoded = ivb::decode_point(std::span<const std::uint8_t>(data, size), config.workers);
        const ivb::Synthesis syn = ivb::synthesize(p, decoded, config);
        make_dir(out_dir);
        const fs::path d(out_dir);
        for (std::size_t i = 0; i < syn.views.size(); ++i) {
            ivb::write_ppm(indexed(d, "view", decoded.manifest.cameras[i].id), syn.views[i]);
        }
        if (p == ivb::Pipeline::Dsgs) {
            ivb::write_gsc1((d / "scene.gsc1").string(), syn.scene);
            write_text(d / "trace.csv", ivb::trace_csv(syn.trace));
        }
        return IVB_OK;
    });
}

ivb_status ivb_evaluate_dirs(const char* rendered_dir, const char* truth_dir, const char* csv_path,
                             double* mean_psnr, double* mean_ssim, double* delta_psnr, double* delta_ssim) {
    if (rendered_dir == nullptr || truth_dir == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    return guard([&] {
        std::map<int, fs::path> rendered;
        std::error_code ec;
        for (const auto& e : fs::directory_iterator(rendered_dir, ec)) {
            const std::string name = e.path().filename().string();
            int id = -1;
            char tail = 0;
            if (std::sscanf(name.c_str(), "view_%d.pp%c", &id, &tail) == 2 && tail == 'm' && id >= 0 &&
                name.size() == 13) {
                rendered[id] = e.path();
            }
        }
        if (ec) throw ivb::IoError(std::string("cannot list ") + rendered_dir + ": " + ec.message());
        if (rendered.empty()) throw ivb::ConfigError(std::string("no view_####.ppm files in ") + rendered_dir);
        std::vector<ivb::ImageU8> a, b;
        std::vector<int> ids;
        for (const auto& [id, path] : rendered) {
            std::string truth = indexed(truth_dir, "truth", id);
            if (!fs::exists(truth)) truth = indexed(truth_dir, "view", id);
            if (!fs::exists(truth)) {
                throw ivb::IoError("no truth image for view " + std::to_string(id) + " in " + truth_dir);
            }
            a.push_back(ivb::read_ppm(path.string()));
            b.push_back(ivb::read_ppm(truth));
            ids.push_back(id);
        }
        const ivb::QualityVector q = ivb::evaluate_views(a, b, ids);
        if (csv_path != nullptr) {
            std::string csv = "view_id,psnr_db,ssim\n";
            char line[128];
            for (std::size_t i = 0; i < q.size(); ++i) {
                std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", q.view_ids[i], q.psnr_db[i], q.ssim[i]);
                csv += line;
            }
            write_text(csv_path, csv);
        }
        const ivb::QualityDelta d = ivb::interview_delta(q);
        if (mean_psnr) *mean_psnr = ivb::mean(q.psnr_db);
        if (mean_ssim) *mean_ssim = ivb::mean(q.ssim);
        if (delta_psnr) *delta_psnr = d.psnr;
        if (delta_ssim) *delta_ssim = d.ssim;
        return IVB_OK;
    });
}

ivb_status ivb_sweep(const char* config_json, ivb_text** csv_out) {
    if (config_json == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    if (csv_out) *csv_out = nullptr;
    return guard([&] {
        const ivb::ExperimentConfig config = parse_config(config_json);
        const ivb::SweepResult r = ivb::sweep(config);
        if (csv_out) *csv_out = make_text(ivb::sweep_csv(r.records, config.emit_timings));
        if (!r.failures.empty()) g_last_error = std::to_string(r.failures.size()) + " sweep rows failed";
        return IVB_OK;
    });
}

ivb_status ivb_compare_csv(const char* anchor_csv, const char* test_csv, const char* anchor_pipeline,
                           const char* test_pipeline, ivb_text** report_out) {
    if (anchor_csv == nullptr || test_csv == nullptr || report_out == nullptr) {
        return fail(IVB_ERR_ARGUMENT, "null argument");
    }
    *report_out = nullptr;
    return guard([&] {
        const auto anchor = select_pipeline(ivb::parse_sweep_csv(anchor_csv), anchor_pipeline,
                                            ivb::Pipeline::Dsde, "anchor");
        const auto test = select_pipeline(ivb::parse_sweep_csv(test_csv), test_pipeline, ivb::Pipeline::Dsgs, "test");
        *report_out = make_text(ivb::compare(anchor, test).text);
        return IVB_OK;
    });
}

ivb_status ivb_regularizer(const char* config_json, ivb_text** report_out) {
    if (config_json == nullptr || report_out == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    *report_out = nullptr;
    return guard([&] {
        const ivb::ExperimentConfig config = parse_config(config_json);
        const ivb::RegularizerReport r = ivb::regularizer_experiment(config);
        *report_out = make_text(r.text);
        if (config.assert_verdict && !r.verdict_holds) {
            return fail(IVB_ERR_ASSERTION, "regularizer verdict does not hold on this committed config");
        }
        return IVB_OK;
    });
}

ivb_status ivb_probe_scaling(const char* config_json, int repeats, ivb_text** report_out, double* dsde_exponent,
                             double* dsgs_exponent) {
    if (config_json == nullptr) return fail(IVB_ERR_ARGUMENT, "null argument");
    if (report_out) *report_out = nullptr;
    return guard([&] {
        const ivb::ExperimentConfig config = parse_config(config_json);
        const ivb::ScalingReport r = ivb::scaling_probe(config, repeats);
        if (report_out) *report_out = make_text(r.text);
        if (dsde_exponent) *dsde_exponent = r.dsde_exponent;
        if (dsgs_exponent) *dsgs_exponent = r.dsgs_exponent;
        return IVB_OK;
    });
}

} // extern "C"
