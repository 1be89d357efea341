// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "common/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "common/bytes.hpp"
#include "common/error.hpp"

namespace ivb {

std::uint8_t to_u8(float v) {
    const float s = std::clamp(v, 0.0f, 1.0f) * 255.0f + 0.5f;
    return static_cast<std::uint8_t>(s);
}

ImageU8 quantize(const ImageF& img) {
    ImageU8 out(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = to_u8(img.data[i]);
    }
    return out;
}

ImageF to_float(const ImageU8& img) {
    ImageF out(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = static_cast<float>(img.data[i]) / 255.0f;
    }
    return out;
}

void sample_bilinear(const ImageF& img, double x, double y, float* out) {
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    const int x0 = std::min(static_cast<int>(x), img.width - 1);
    const int y0 = std::min(static_cast<int>(y), img.height - 1);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const float fx = static_cast<float>(x - x0);
    const float fy = static_cast<float>(y - y0);
    for (int c = 0; c < img.channels; ++c) {
        const float top = img.at(x0, y0, c) * (1 - fx) + img.at(x1, y0, c) * fx;
        const float bot = img.at(x0, y1, c) * (1 - fx) + img.at(x1, y1, c) * fx;
        out[c] = top * (1 - fy) + bot * fy;
    }
}

ImageF box_downsample(const ImageF& img, int factor) {
    if (factor <= 1) {
        return img;
    }
    const int w = img.width / factor;
    const int h = img.height / factor;
    ImageF out(w, h, img.channels);
    const float norm = 1.0f / static_cast<float>(factor * factor);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                float acc = 0.0f;
                for (int dy = 0; dy < factor; ++dy) {
                    for (int dx = 0; dx < factor; ++dx) {
                        acc += img.at(x * factor + dx, y * factor + dy, c);
                    }
                }
                out.at(x, y, c) = acc * norm;
            }
        }
    }
    return out;
}

namespace {

// Netpbm header token reader; skips whitespace and '#' comments.
std::string next_token(std::span<const std::uint8_t> buf, std::size_t& pos, const std::string& path) {
    for (;;) {
        while (pos < buf.size() && std::isspace(buf[pos])) ++pos;
        if (pos < buf.size() && buf[pos] == '#') {
            while (pos < buf.size() && buf[pos] != '\n') ++pos;
            continue;
        }
        break;
    }
    std::string tok;
    while (pos < buf.size() && !std::isspace(buf[pos])) tok.push_back(static_cast<char>(buf[pos++]));
    if (tok.empty()) {
        throw ParseError(path + ": truncated image header at byte " + std::to_string(pos));
    }
    return tok;
}

int parse_dim(const std::string& tok, const std::string& path) {
    try {
        const int v = std::stoi(tok);
        if (v <= 0 || v > 1 << 16) throw ParseError(path + ": bad image dimension " + tok);
        return v;
    } catch (const std::logic_error&) {
        throw ParseError(path + ": bad image header token '" + tok + "'");
    }
}

void write_netpbm(const std::string& path, const ImageU8& img, const char* magic, int channels) {
    if (img.channels != channels) {
        throw ConfigError(path + ": expected " + std::to_string(channels) + "-channel image");
    }
    ByteWriter w;
    w.text(std::string(magic) + "\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n");
    w.bytes(img.data);
    write_file(path, w.buffer());
}

ImageU8 read_netpbm(const std::string& path, const char* magic, int channels) {
    const auto buf = read_file(path);
    std::size_t pos = 0;
    if (next_token(buf, pos, path) != magic) {
        throw ParseError(path + ": not a " + magic + " file");
    }
    const int w = parse_dim(next_token(buf, pos, path), path);
    const int h = parse_dim(next_token(buf, pos, path), path);
    if (next_token(buf, pos, path) != "255") {
        throw ParseError(path + ": only 8-bit maxval 255 supported");
    }
    ++pos;
    ImageU8 img(w, h, channels);
    if (buf.size() < pos + img.data.size()) {
        throw ParseError(path + ": truncated pixel data");
    }
    std::memcpy(img.data.data(), buf.data() + pos, img.data.size());
    return img;
}

} // namespace

void write_ppm(const std::string& path, const ImageU8& img) { write_netpbm(path, img, "P6", 3); }
ImageU8 read_ppm(const std::string& path) { return read_netpbm(path, "P6", 3); }
void write_pgm(const std::string& path, const ImageU8& img) { write_netpbm(path, img, "P5", 1); }
ImageU8 read_pgm(const std::string& path) { return read_netpbm(path, "P5", 1); }

void write_pfm(const std::string& path, const ImageF& img) {
    if (img.channels != 1 && img.channels != 3) {
        throw ConfigError(path + ": PFM needs 1 or 3 channels");
    }
    ByteWriter w;
    w.text(std::string(img.channels == 3 ? "PF" : "Pf") + "\n" + std::to_string(img.width) + " " +
           std::to_string(img.height) + "\n-1.0\n");
    for (int y = img.height - 1; y >= 0; --y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) w.f32(img.at(x, y, c));
        }
    }
    write_file(path, w.buffer());
}

ImageF read_pfm(const std::string& path) {
    const auto buf = read_file(path);
    std::size_t pos = 0;
    const std::string magic = next_token(buf, pos, path);
    if (magic != "PF" && magic != "Pf") {
        throw ParseError(path + ": not a PFM file");
    }
    const int channels = magic == "PF" ? 3 : 1;
    const int w = parse_dim(next_token(buf, pos, path), path);
    const int h = parse_dim(next_token(buf, pos, path), path);
    const std::string scale = next_token(buf, pos, path);
    if (scale.empty() || scale[0] != '-') {
        throw ParseError(path + ": only little-endian PFM supported");
    }
    ++pos;
    ImageF img(w, h, channels);
    ByteReader r(std::span<const std::uint8_t>(buf).subspan(pos));
    for (int y = h - 1; y >= 0; --y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < channels; ++c) img.at(x, y, c) = r.f32("pfm sample");
        }
    }
    return img;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file(const std::string& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) {
        throw IoError("short write to " + path);
    }
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto b : data) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace ivb
