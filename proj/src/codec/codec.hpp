// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "common/image.hpp"

namespace ivb {

/// Rate points 0..4; 0 is lossless, 1..4 map to quantizer scales 8, 16, 32, 64.
inline constexpr int kRatePointCount = 5;
int qscale_for(int rate_point);

struct CodedAtlas {
    std::vector<std::uint8_t> payload;
    int width = 0;
    int height = 0;
    int rate_point = 0;

    std::size_t size_bytes() const { return payload.size(); }
};

/// RGB image with both dimensions multiples of 8. Throws ConfigError otherwise.
CodedAtlas encode(const ImageU8& image, int rate_point, int workers = 0);
/// Throws ParseError on malformed payloads; block-level failures name the block.
ImageU8 decode(std::span<const std::uint8_t> payload, int workers = 0);

/// Quantizer step of zigzag coefficient k for the luma (chroma = false) or
/// chroma tables.
double quant_step(int k, int qscale, bool chroma);

/// Orthonormal 8x8 type-II DCT and its inverse on row-major blocks.
void dct8x8(const double* in, double* out);
void idct8x8(const double* in, double* out);

extern const int kZigzag[64];

/// Energy above half band (u >= 8 or v >= 8 of a 16x16 luma DCT tiling),
/// decoded over original. 1.0 when both are zero.
double spectral_report(const ImageU8& original, const ImageU8& decoded);

} // namespace ivb
