// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end over the C API.

#include <cstdio>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "ivbench/ivbench.h"

namespace {

int exit_code(ivb_status s) {
    switch (s) {
    case IVB_OK: return 0;
    case IVB_ERR_PARSE: return 2;
    case IVB_ERR_ASSERTION: return 3;
    default: return 1;
    }
}

int report(ivb_status s) {
    if (s != IVB_OK) std::fprintf(stderr, "ivbench: %s: %s\n", ivb_status_name(s), ivb_last_error());
    return exit_code(s);
}

/// Reads a whole file through the library so errors are reported uniformly.
ivb_status slurp(const std::string& path, std::string& out) {
    ivb_buffer* buf = nullptr;
    const ivb_status s = ivb_buffer_read_file(path.c_str(), &buf);
    if (s != IVB_OK) return s;
    out.assign(reinterpret_cast<const char*>(ivb_buffer_data(buf)), ivb_buffer_size(buf));
    ivb_buffer_free(buf);
    return IVB_OK;
}

int save_text(const std::string& path, const char* text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        std::fprintf(stderr, "ivbench: io error: cannot write %s\n", path.c_str());
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ivbench: immersive-video decoder-side synthesis benchmark"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ivb_version()));

    std::string config, out, dataset, stream, pipeline = "dsgs", rendered, truth, anchor, test;
    std::string anchor_pipeline, test_pipeline;
    int atlases = 1, rp = 0, repeats = 3;

    auto* gen = app.add_subcommand("gen-scene", "generate a synthetic multiview dataset");
    gen->add_option("config", config, "scene spec or experiment config (JSON)")->required();
    gen->add_option("-o,--out", out, "dataset directory")->required();

    auto* enc = app.add_subcommand("encode", "pack, encode and mux a dataset");
    enc->add_option("dataset", dataset, "dataset directory")->required();
    enc->add_option("--atlases", atlases, "atlas count (1 or 2)")->check(CLI::IsMember({1, 2}));
    enc->add_option("--rp", rp, "rate point 0..4")->check(CLI::Range(0, 4));
    enc->add_option("-o,--out", out, "bitstream file")->required();

    auto* dec = app.add_subcommand("decode", "demux, decode and unpack a bitstream");
    dec->add_option("stream", stream, "bitstream file")->required();
    dec->add_option("-o,--out", out, "output directory")->required();

    auto* syn = app.add_subcommand("synth", "synthesize every camera view from a bitstream");
    syn->add_option("stream", stream, "bitstream file")->required();
    syn->add_option("--pipeline", pipeline, "dsde or dsgs")->check(CLI::IsMember({"dsde", "dsgs"}));
    syn->add_option("--config", config, "experiment config for predictor / depth parameters");
    syn->add_option("-o,--out", out, "output directory")->required();

    auto* ev = app.add_subcommand("eval", "score rendered views against truth");
    ev->add_option("rendered", rendered, "directory with view_####.ppm")->required();
    ev->add_option("truth", truth, "dataset directory")->required();
    ev->add_option("-o,--out", out, "quality CSV");

    auto* sw = app.add_subcommand("sweep", "run the rate sweep of an experiment config");
    sw->add_option("config", config, "experiment config")->required();

    auto* cmp = app.add_subcommand("compare", "BD and delta tables of two sweep CSVs");
    cmp->add_option("anchor", anchor, "anchor sweep CSV")->required();
    cmp->add_option("test", test, "test sweep CSV")->required();
    cmp->add_option("--anchor-pipeline", anchor_pipeline, "pipeline taken from the anchor CSV");
    cmp->add_option("--test-pipeline", test_pipeline, "pipeline taken from the test CSV");
    cmp->add_option("-o,--out", out, "report file");

    auto* probe = app.add_subcommand("probe-scaling", "time cost volume and refinement growth");
    probe->add_option("config", config, "experiment config")->required();
    probe->add_option("--repeats", repeats, "runs per timing (minimum kept)")->check(CLI::PositiveNumber);

    auto* reg = app.add_subcommand("regularizer", "dsgs quality and floaters across rate points");
    reg->add_option("config", config, "experiment config with a noise_augmented scene")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*gen) {
        std::string text;
        if (ivb_status s = slurp(config, text); s != IVB_OK) return report(s);
        ivb_dataset* ds = nullptr;
        ivb_status s = ivb_dataset_generate(text.c_str(), &ds);
        if (s == IVB_OK) s = ivb_dataset_save(ds, out.c_str());
        if (s == IVB_OK) std::printf("wrote %d views to %s\n", ivb_dataset_camera_count(ds), out.c_str());
        ivb_dataset_free(ds);
        return report(s);
    }
    if (*enc) {
        ivb_dataset* ds = nullptr;
        ivb_buffer* bits = nullptr;
        ivb_status s = ivb_dataset_load(dataset.c_str(), &ds);
        if (s == IVB_OK) s = ivb_encode(ds, atlases, rp, &bits);
        if (s == IVB_OK) s = ivb_buffer_write_file(bits, out.c_str());
        if (s == IVB_OK) std::printf("%s: %zu bytes\n", out.c_str(), ivb_buffer_size(bits));
        ivb_buffer_free(bits);
        ivb_dataset_free(ds);
        return report(s);
    }
    if (*dec) {
        ivb_buffer* bits = nullptr;
        ivb_decoded* d = nullptr;
        ivb_status s = ivb_buffer_read_file(stream.c_str(), &bits);
        if (s == IVB_OK) s = ivb_decode(ivb_buffer_data(bits), ivb_buffer_size(bits), &d);
        if (s == IVB_OK) s = ivb_decoded_save(d, out.c_str());
        if (s == IVB_OK) {
            std::printf("RP%d, %d views of %d cameras -> %s\n", ivb_decoded_rate_point(d), ivb_decoded_view_count(d),
                        ivb_decoded_camera_count(d), out.c_str());
        }
        ivb_decoded_free(d);
        ivb_buffer_free(bits);
        return report(s);
    }
    if (*syn) {
        std::string text;
        if (!config.empty()) {
            if (ivb_status s = slurp(config, text); s != IVB_OK) return report(s);
        }
        ivb_buffer* bits = nullptr;
        ivb_status s = ivb_buffer_read_file(stream.c_str(), &bits);
        if (s == IVB_OK) {
            s = ivb_synthesize(ivb_buffer_data(bits), ivb_buffer_size(bits), pipeline.c_str(),
                               config.empty() ? nullptr : text.c_str(), out.c_str());
        }
        ivb_buffer_free(bits);
        return report(s);
    }
    if (*ev) {
        double mp = 0, ms = 0, dp = 0, ds = 0;
        const ivb_status s =
            ivb_evaluate_dirs(rendered.c_str(), truth.c_str(), out.empty() ? nullptr : out.c_str(), &mp, &ms, &dp, &ds);
        if (s == IVB_OK) {
            std::printf("mean_psnr %.4f dB  mean_ssim %.5f  delta_psnr %.4f dB  delta_ssim %.5f\n", mp, ms, dp, ds);
        }
        return report(s);
    }
    if (*sw) {
        std::string text;
        if (ivb_status s = slurp(config, text); s != IVB_OK) return report(s);
        ivb_text* csv = nullptr;
        const ivb_status s = ivb_sweep(text.c_str(), &csv);
        if (s == IVB_OK) {
            std::fputs(ivb_text_data(csv), stdout);
            if (*ivb_last_error() != '\0') std::fprintf(stderr, "ivbench: %s (see failures.txt)\n", ivb_last_error());
        }
        ivb_text_free(csv);
        return report(s);
    }
    if (*cmp) {
        std::string a, t;
        if (ivb_status s = slurp(anchor, a); s != IVB_OK) return report(s);
        if (ivb_status s = slurp(test, t); s != IVB_OK) return report(s);
        ivb_text* r = nullptr;
        const ivb_status s = ivb_compare_csv(a.c_str(), t.c_str(),
                                             anchor_pipeline.empty() ? nullptr : anchor_pipeline.c_str(),
                                             test_pipeline.empty() ? nullptr : test_pipeline.c_str(), &r);
        int code = report(s);
        if (s == IVB_OK) {
            std::fputs(ivb_text_data(r), stdout);
            if (!out.empty()) code = save_text(out, ivb_text_data(r));
        }
        ivb_text_free(r);
        return code;
    }
    if (*probe) {
        std::string text;
        if (ivb_status s = slurp(config, text); s != IVB_OK) return report(s);
        ivb_text* r = nullptr;
        const ivb_status s = ivb_probe_scaling(text.c_str(), repeats, &r, nullptr, nullptr);
        if (s == IVB_OK) std::fputs(ivb_text_data(r), stdout);
        ivb_text_free(r);
        return report(s);
    }
    if (*reg) {
        std::string text;
        if (ivb_status s = slurp(config, text); s != IVB_OK) return report(s);
        ivb_text* r = nullptr;
        const ivb_status s = ivb_regularizer(text.c_str(), &r);
        if (r != nullptr) std::fputs(ivb_text_data(r), stdout);
        ivb_text_free(r);
        return report(s);
    }
    return 1;
}
