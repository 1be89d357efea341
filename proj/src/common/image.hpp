// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ivb {

/// Interleaved row-major image.
template <typename T>
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<T> data;

    Image() = default;
    Image(int w, int h, int c, T fill = T{})
        : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

    std::size_t index(int x, int y, int c = 0) const {
        return (static_cast<std::size_t>(y) * width + x) * channels + c;
    }
    T& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
    const T& at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool empty() const { return data.empty(); }
    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
    friend bool operator==(const Image& a, const Image& b) {
        return a.same_shape(b) && a.data == b.data;
    }
};

using ImageU8 = Image<std::uint8_t>;
using ImageF = Image<float>;

std::uint8_t to_u8(float v);
ImageU8 quantize(const ImageF& img);
ImageF to_float(const ImageU8& img);

/// Bilinear sample with clamp-to-edge; coordinates in pixel-center units.
void sample_bilinear(const ImageF& img, double x, double y, float* out);

ImageF box_downsample(const ImageF& img, int factor);

/// Binary PPM (P6, 8-bit RGB).
void write_ppm(const std::string& path, const ImageU8& img);
ImageU8 read_ppm(const std::string& path);
/// Binary PGM (P5, 8-bit single channel).
void write_pgm(const std::string& path, const ImageU8& img);
ImageU8 read_pgm(const std::string& path);
/// Little-endian PFM, single channel ("Pf") or RGB ("PF"). Rows bottom-to-top per format.
void write_pfm(const std::string& path, const ImageF& img);
ImageF read_pfm(const std::string& path);

} // namespace ivb
