// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "codec/codec.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "codec/huffman.hpp"
#include "common/bytes.hpp"
#include "common/error.hpp"
#include "common/parallel.hpp"

namespace ivb {

const int kZigzag[64] = {0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
                         12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
                         35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
                         58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

namespace {

// Base matrices in natural (row-major) order.
constexpr int kLumaBase[64] = {16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
                               14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
                               18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
                               49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
constexpr int kChromaBase[64] = {17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
                                 24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
                                 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
                                 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

/// AC rounding offset; values below 1 - offset steps quantize to zero.
constexpr double kDeadZoneOffset = 1.0 / 3.0;

/// Deblocking thresholds in units of the pixel-domain DC step.
constexpr double kDeblockAlpha = 6.0;
constexpr double kDeblockBeta = 2.0;

constexpr std::uint8_t kModeLossless = 0;
constexpr std::uint8_t kModeDct = 1;
constexpr std::uint8_t kEob = 0x00;
constexpr std::uint8_t kZrl = 0xF0;

template <int N>
struct DctBasis {
    std::array<double, N * N> m{}; // m[u * N + x]
    DctBasis() {
        for (int u = 0; u < N; ++u) {
            const double a = u == 0 ? std::sqrt(1.0 / N) : std::sqrt(2.0 / N);
            for (int x = 0; x < N; ++x) m[u * N + x] = a * std::cos((2 * x + 1) * u * std::numbers::pi / (2 * N));
        }
    }
};

template <int N>
const DctBasis<N>& basis() {
    static const DctBasis<N> b;
    return b;
}

template <int N>
void forward_dct(const double* in, double* out) {
    const auto& c = basis<N>().m;
    std::array<double, N * N> tmp{};
    for (int u = 0; u < N; ++u) {
        for (int x = 0; x < N; ++x) {
            double s = 0;
            for (int y = 0; y < N; ++y) s += c[u * N + y] * in[y * N + x];
            tmp[u * N + x] = s;
        }
    }
    for (int u = 0; u < N; ++u) {
        for (int v = 0; v < N; ++v) {
            double s = 0;
            for (int x = 0; x < N; ++x) s += tmp[u * N + x] * c[v * N + x];
            out[u * N + v] = s;
        }
    }
}

int bit_size(int v) {
    int a = std::abs(v), n = 0;
    while (a) {
        ++n;
        a >>= 1;
    }
    return n;
}

std::uint32_t magnitude_bits(int v, int size) {
    return static_cast<std::uint32_t>(v >= 0 ? v : v + (1 << size) - 1);
}

int extend(std::uint32_t bits, int size) {
    if (size == 0) return 0;
    const int v = static_cast<int>(bits);
    return v < (1 << (size - 1)) ? v - (1 << size) + 1 : v;
}

void put_exp_golomb(BitWriter& w, std::uint32_t v) {
    const std::uint32_t x = v + 1;
    const int n = bit_size(static_cast<int>(x));
    w.put(0, n - 1);
    w.put(x, n);
}

std::uint32_t get_exp_golomb(BitReader& r) {
    int zeros = 0;
    while (r.get(1) == 0) {
        if (++zeros > 30) throw ParseError("skip run overflow");
    }
    return ((1u << zeros) | r.get(zeros)) - 1;
}

void check_dims(const ImageU8& img) {
    if (img.channels != 3) throw ConfigError("codec expects RGB images");
    if (img.width <= 0 || img.height <= 0 || img.width % 8 || img.height % 8) {
        throw ConfigError("image dimensions " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                          " are not positive multiples of 8");
    }
    if (img.width / 8 > 0xffff || img.height / 8 > 0xffff) throw ConfigError("image too large");
}

// ---- lossless ----

std::uint8_t predict(const ImageU8& img, int x, int y, int c) {
    if (x == 0 && y == 0) return 0;
    if (y == 0) return img.at(x - 1, y, c);
    if (x == 0) return img.at(x, y - 1, c);
    return static_cast<std::uint8_t>((img.at(x - 1, y, c) + img.at(x, y - 1, c) + 1) >> 1);
}

void encode_lossless(const ImageU8& img, ByteWriter& out) {
    std::vector<std::uint8_t> resid(img.data.size());
    std::array<std::array<std::uint64_t, 256>, 3> freq{};
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                const auto r = static_cast<std::uint8_t>(img.at(x, y, c) - predict(img, x, y, c));
                resid[img.index(x, y, c)] = r;
                ++freq[c][r];
            }
        }
    }
    std::array<HuffmanTable, 3> tables;
    ByteWriter tw;
    for (int c = 0; c < 3; ++c) {
        tables[c] = build_huffman(freq[c]);
        write_table(tw, tables[c]);
    }
    BitWriter bw;
    for (std::size_t i = 0; i < resid.size(); ++i) bw.put(tables[i % 3], resid[i]);
    const auto data = bw.finish();
    out.u32(static_cast<std::uint32_t>(tw.size()));
    out.bytes(tw.buffer());
    out.u32(static_cast<std::uint32_t>(data.size()));
    out.bytes(data);
}

ImageU8 decode_lossless(ByteReader& r, int width, int height) {
    const std::uint32_t table_len = r.u32("table section length");
    ByteReader tr(r.bytes(table_len, "table section"));
    std::array<HuffmanTable, 3> tables;
    for (auto& t : tables) t = read_table(tr);
    const std::uint32_t data_len = r.u32("data length");
    BitReader br(r.bytes(data_len, "coded data"));
    const std::array<HuffmanDecoder, 3> dec{HuffmanDecoder(tables[0]), HuffmanDecoder(tables[1]),
                                            HuffmanDecoder(tables[2])};
    ImageU8 img(width, height, 3);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < 3; ++c) {
                try {
                    img.at(x, y, c) = static_cast<std::uint8_t>(br.decode(dec[c]) + predict(img, x, y, c));
                } catch (const ParseError& e) {
                    throw ParseError("block (" + std::to_string(x / 8) + ", " + std::to_string(y / 8) + ") pixel (" +
                                     std::to_string(x) + ", " + std::to_string(y) + "): " + e.what());
                }
            }
        }
    }
    return img;
}

// ---- transform ----

struct BlockGrid {
    int bw = 0, bh = 0;
    std::vector<std::int32_t> coef; // [block][channel][zigzag k]

    std::int32_t* at(std::size_t block, int c) { return coef.data() + (block * 3 + c) * 64; }
    const std::int32_t* at(std::size_t block, int c) const { return coef.data() + (block * 3 + c) * 64; }
};

void forward_blocks(const ImageU8& img, int qscale, BlockGrid& g, int workers) {
    g.bw = img.width / 8;
    g.bh = img.height / 8;
    g.coef.assign(static_cast<std::size_t>(g.bw) * g.bh * 3 * 64, 0);
    parallel_for(static_cast<std::size_t>(g.bh), workers, [&](std::size_t by) {
        std::array<std::array<double, 64>, 3> plane;
        std::array<double, 64> freq;
        for (int bx = 0; bx < g.bw; ++bx) {
            for (int y = 0; y < 8; ++y) {
                for (int x = 0; x < 8; ++x) {
                    const int px = bx * 8 + x, py = static_cast<int>(by) * 8 + y;
                    const double r = img.at(px, py, 0), gg = img.at(px, py, 1), b = img.at(px, py, 2);
                    plane[0][y * 8 + x] = 0.299 * r + 0.587 * gg + 0.114 * b - 128.0;
                    plane[1][y * 8 + x] = -0.168736 * r - 0.331264 * gg + 0.5 * b;
                    plane[2][y * 8 + x] = 0.5 * r - 0.418688 * gg - 0.081312 * b;
                }
            }
            const std::size_t block = by * g.bw + bx;
            for (int c = 0; c < 3; ++c) {
                dct8x8(plane[c].data(), freq.data());
                std::int32_t* dst = g.at(block, c);
                dst[0] = static_cast<std::int32_t>(std::lround(freq[0] / quant_step(0, qscale, c > 0)));
                for (int k = 1; k < 64; ++k) {
                    const double v = freq[kZigzag[k]] / quant_step(k, qscale, c > 0);
                    const double mag = std::floor(std::abs(v) + kDeadZoneOffset);
                    dst[k] = static_cast<std::int32_t>(v < 0 ? -mag : mag);
                }
            }
        }
    });
}

// Spreads small steps across block edges into a ramp when both sides are
// flat; real edges (large steps or busy sides) are left alone.
void deblock_edge(double* v, std::ptrdiff_t stride, double alpha, double beta) {
    auto px = [&](int i) -> double& { return v[i * stride]; }; // i in [-3, 2], edge between -1 and 0
    const double d = px(0) - px(-1);
    if (std::abs(d) >= alpha) return;
    if (std::abs(px(-3) - px(-1)) >= beta || std::abs(px(2) - px(0)) >= beta) return;
    px(-3) += d / 7.0;
    px(-2) += 2.0 * d / 7.0;
    px(-1) += 3.0 * d / 7.0;
    px(0) -= 3.0 * d / 7.0;
    px(1) -= 2.0 * d / 7.0;
    px(2) -= d / 7.0;
}

void deblock(std::vector<double>& plane, int width, int height, double alpha, double beta, int workers) {
    parallel_for(static_cast<std::size_t>(height), workers, [&](std::size_t y) {
        double* row = plane.data() + y * width;
        for (int x = 8; x < width; x += 8) deblock_edge(row + x, 1, alpha, beta);
    });
    parallel_for(static_cast<std::size_t>(width), workers, [&](std::size_t x) {
        for (int y = 8; y < height; y += 8) deblock_edge(plane.data() + static_cast<std::size_t>(y) * width + x, width, alpha, beta);
    });
}

ImageU8 inverse_blocks(const BlockGrid& g, int qscale, int workers) {
    const int width = g.bw * 8, height = g.bh * 8;
    std::array<std::vector<double>, 3> planes;
    for (auto& p : planes) p.assign(static_cast<std::size_t>(width) * height, 0.0);
    parallel_for(static_cast<std::size_t>(g.bh), workers, [&](std::size_t by) {
        std::array<double, 64> freq, spatial;
        for (int bx = 0; bx < g.bw; ++bx) {
            const std::size_t block = by * g.bw + bx;
            for (int c = 0; c < 3; ++c) {
                freq.fill(0);
                const std::int32_t* src = g.at(block, c);
                for (int k = 0; k < 64; ++k) freq[kZigzag[k]] = src[k] * quant_step(k, qscale, c > 0);
                idct8x8(freq.data(), spatial.data());
                for (int y = 0; y < 8; ++y) {
                    for (int x = 0; x < 8; ++x) {
                        planes[c][(by * 8 + y) * width + bx * 8 + x] = spatial[y * 8 + x];
                    }
                }
            }
        }
    });
    for (int c = 0; c < 3; ++c) {
        const double dc_step = quant_step(0, qscale, c > 0) / 8.0;
        deblock(planes[c], width, height, kDeblockAlpha * dc_step, kDeblockBeta * dc_step, workers);
    }
    ImageU8 img(width, height, 3);
    parallel_for(static_cast<std::size_t>(height), workers, [&](std::size_t y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = y * width + x;
            const double yy = planes[0][i] + 128.0, cb = planes[1][i], cr = planes[2][i];
            const double rgb[3] = {yy + 1.402 * cr, yy - 0.344136 * cb - 0.714136 * cr, yy + 1.772 * cb};
            for (int ch = 0; ch < 3; ++ch) {
                img.at(x, static_cast<int>(y), ch) = static_cast<std::uint8_t>(std::clamp(std::lround(rgb[ch]), 0L, 255L));
            }
        }
    });
    return img;
}

// Tables: 0 DC luma, 1 AC luma, 2 DC chroma, 3 AC chroma.
struct SymbolSink {
    std::array<std::array<std::uint64_t, 256>, 4> freq{};
    void symbol(int table, std::uint8_t s) { ++freq[table][s]; }
    void bits(std::uint32_t, int) {}
    void skip(std::uint32_t) {}
};

struct WriteSink {
    const std::array<HuffmanTable, 4>* tables;
    BitWriter w;
    void symbol(int table, std::uint8_t s) { w.put((*tables)[table], s); }
    void bits(std::uint32_t v, int n) { w.put(v, n); }
    void skip(std::uint32_t n) { put_exp_golomb(w, n); }
};

template <typename Sink>
void entropy_pass(const BlockGrid& g, Sink& sink) {
    const std::size_t blocks = static_cast<std::size_t>(g.bw) * g.bh;
    std::array<std::int32_t, 3> prev_dc{};
    std::uint32_t pending_skip = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        bool skippable = true;
        for (int c = 0; c < 3 && skippable; ++c) {
            const std::int32_t* q = g.at(b, c);
            if (q[0] != prev_dc[c]) skippable = false;
            for (int k = 1; k < 64 && skippable; ++k) skippable = q[k] == 0;
        }
        if (skippable) {
            ++pending_skip;
            continue;
        }
        sink.skip(pending_skip);
        pending_skip = 0;
        for (int c = 0; c < 3; ++c) {
            const std::int32_t* q = g.at(b, c);
            const int dc_table = c == 0 ? 0 : 2, ac_table = dc_table + 1;
            const int diff = q[0] - prev_dc[c];
            prev_dc[c] = q[0];
            const int dsize = bit_size(diff);
            sink.symbol(dc_table, static_cast<std::uint8_t>(dsize));
            sink.bits(magnitude_bits(diff, dsize), dsize);
            int run = 0;
            for (int k = 1; k < 64; ++k) {
                if (q[k] == 0) {
                    ++run;
                    continue;
                }
                while (run > 15) {
                    sink.symbol(ac_table, kZrl);
                    run -= 16;
                }
                const int size = bit_size(q[k]);
                sink.symbol(ac_table, static_cast<std::uint8_t>((run << 4) | size));
                sink.bits(magnitude_bits(q[k], size), size);
                run = 0;
            }
            if (run > 0) sink.symbol(ac_table, kEob);
        }
    }
    if (pending_skip > 0) sink.skip(pending_skip);
}

void encode_dct(const ImageU8& img, int qscale, ByteWriter& out, int workers) {
    BlockGrid g;
    forward_blocks(img, qscale, g, workers);
    SymbolSink stats;
    entropy_pass(g, stats);
    std::array<HuffmanTable, 4> tables;
    ByteWriter tw;
    for (int t = 0; t < 4; ++t) {
        tables[t] = build_huffman(stats.freq[t]);
        write_table(tw, tables[t]);
    }
    WriteSink ws{&tables, {}};
    entropy_pass(g, ws);
    const auto data = ws.w.finish();
    out.u32(static_cast<std::uint32_t>(tw.size()));
    out.bytes(tw.buffer());
    out.u32(static_cast<std::uint32_t>(data.size()));
    out.bytes(data);
}

ImageU8 decode_dct(ByteReader& r, int bw, int bh, int qscale, int workers) {
    const std::uint32_t table_len = r.u32("table section length");
    ByteReader tr(r.bytes(table_len, "table section"));
    std::array<HuffmanTable, 4> tables;
    for (auto& t : tables) t = read_table(tr);
    const std::array<HuffmanDecoder, 4> dec{HuffmanDecoder(tables[0]), HuffmanDecoder(tables[1]),
                                            HuffmanDecoder(tables[2]), HuffmanDecoder(tables[3])};
    const std::uint32_t data_len = r.u32("data length");
    BitReader br(r.bytes(data_len, "coded data"));

    BlockGrid g;
    g.bw = bw;
    g.bh = bh;
    const std::size_t blocks = static_cast<std::size_t>(bw) * bh;
    g.coef.assign(blocks * 3 * 64, 0);
    std::array<std::int32_t, 3> prev_dc{};
    std::size_t b = 0;
    auto fill_skipped = [&](std::size_t until) {
        for (; b < until; ++b) {
            for (int c = 0; c < 3; ++c) g.at(b, c)[0] = prev_dc[c];
        }
    };
    while (b < blocks) {
        try {
            const std::uint32_t skip = get_exp_golomb(br);
            if (skip > blocks - b) throw ParseError("skip run of " + std::to_string(skip) + " overruns the image");
            fill_skipped(b + skip);
            if (b == blocks) break;
            for (int c = 0; c < 3; ++c) {
                std::int32_t* q = g.at(b, c);
                const int dc_table = c == 0 ? 0 : 2;
                const int dsize = br.decode(dec[dc_table]);
                if (dsize > 15) throw ParseError("DC size " + std::to_string(dsize) + " out of range");
                const std::int64_t dc = static_cast<std::int64_t>(prev_dc[c]) + extend(br.get(dsize), dsize);
                if (std::abs(dc) > (1 << 20)) throw ParseError("DC value out of range");
                q[0] = prev_dc[c] = static_cast<std::int32_t>(dc);
                for (int k = 1; k < 64;) {
                    const std::uint8_t sym = br.decode(dec[dc_table + 1]);
                    const int run = sym >> 4, size = sym & 15;
                    if (size == 0) {
                        if (sym == kEob) break;
                        if (sym != kZrl) throw ParseError("invalid AC symbol " + std::to_string(sym));
                        k += 16;
                        if (k > 63) throw ParseError("zero run past end of block");
                        continue;
                    }
                    k += run;
                    if (k > 63) throw ParseError("AC index past end of block");
                    q[k++] = extend(br.get(size), size);
                }
            }
            ++b;
        } catch (const ParseError& e) {
            throw ParseError("block (" + std::to_string(b % bw) + ", " + std::to_string(b / bw) + "): " + e.what());
        }
    }
    return inverse_blocks(g, qscale, workers);
}

} // namespace

int qscale_for(int rate_point) {
    static constexpr int kLadder[kRatePointCount] = {0, 8, 16, 32, 64};
    if (rate_point < 0 || rate_point >= kRatePointCount) {
        throw ConfigError("rate point " + std::to_string(rate_point) + " out of range 0..4");
    }
    return kLadder[rate_point];
}

double quant_step(int k, int qscale, bool chroma) {
    const int natural = kZigzag[k];
    return (chroma ? kChromaBase[natural] : kLumaBase[natural]) * qscale / 16.0;
}

void dct8x8(const double* in, double* out) { forward_dct<8>(in, out); }

void idct8x8(const double* in, double* out) {
    const auto& c = basis<8>().m;
    std::array<double, 64> tmp{};
    for (int y = 0; y < 8; ++y) {
        for (int v = 0; v < 8; ++v) {
            double s = 0;
            for (int u = 0; u < 8; ++u) s += c[u * 8 + y] * in[u * 8 + v];
            tmp[y * 8 + v] = s;
        }
    }
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            double s = 0;
            for (int v = 0; v < 8; ++v) s += tmp[y * 8 + v] * c[v * 8 + x];
            out[y * 8 + x] = s;
        }
    }
}

CodedAtlas encode(const ImageU8& image, int rate_point, int workers) {
    check_dims(image);
    const int qscale = qscale_for(rate_point);
    ByteWriter w;
    w.u8(rate_point == 0 ? kModeLossless : kModeDct);
    w.u16(static_cast<std::uint16_t>(image.width / 8));
    w.u16(static_cast<std::uint16_t>(image.height / 8));
    w.u8(static_cast<std::uint8_t>(qscale));
    if (rate_point == 0) {
        encode_lossless(image, w);
    } else {
        encode_dct(image, qscale, w, workers);
    }
    return {w.take(), image.width, image.height, rate_point};
}

ImageU8 decode(std::span<const std::uint8_t> payload, int workers) {
    ByteReader r(payload);
    const std::uint8_t mode = r.u8("mode");
    const int bw = r.u16("width_blocks");
    const int bh = r.u16("height_blocks");
    const int qscale = r.u8("qscale");
    if (bw == 0 || bh == 0) throw ParseError("empty image in payload header");
    ImageU8 out;
    if (mode == kModeLossless) {
        if (qscale != 0) throw ParseError("lossless payload with nonzero qscale");
        out = decode_lossless(r, bw * 8, bh * 8);
    } else if (mode == kModeDct) {
        if (qscale == 0) throw ParseError("transform payload with zero qscale at byte offset 5");
        out = decode_dct(r, bw, bh, qscale, workers);
    } else {
        throw ParseError("unknown payload mode " + std::to_string(mode) + " at byte offset 0");
    }
    if (r.remaining() != 0) {
        throw ParseError(std::to_string(r.remaining()) + " trailing bytes at byte offset " +
                         std::to_string(r.offset()));
    }
    return out;
}

double spectral_report(const ImageU8& original, const ImageU8& decoded) {
    if (!original.same_shape(decoded)) throw ConfigError("spectral_report: dimension mismatch");
    constexpr int N = 16;
    auto high_energy = [&](const ImageU8& img) {
        const int tx = img.width / N, ty = img.height / N;
        std::vector<double> per_row(static_cast<std::size_t>(ty), 0.0);
        parallel_for(static_cast<std::size_t>(ty), 0, [&](std::size_t j) {
            std::array<double, N * N> in, out;
            for (int i = 0; i < tx; ++i) {
                for (int y = 0; y < N; ++y) {
                    for (int x = 0; x < N; ++x) {
                        const int px = i * N + x, py = static_cast<int>(j) * N + y;
                        if (img.channels >= 3) {
                            in[y * N + x] = 0.299 * img.at(px, py, 0) + 0.587 * img.at(px, py, 1) +
                                            0.114 * img.at(px, py, 2);
                        } else {
                            in[y * N + x] = img.at(px, py, 0);
                        }
                    }
                }
                forward_dct<N>(in.data(), out.data());
                for (int u = 0; u < N; ++u) {
                    for (int v = 0; v < N; ++v) {
                        if (u >= N / 2 || v >= N / 2) per_row[j] += out[u * N + v] * out[u * N + v];
                    }
                }
            }
        });
        double total = 0;
        for (double e : per_row) total += e;
        return total;
    };
    const double e0 = high_energy(original), e1 = high_energy(decoded);
    if (e0 == 0) return e1 == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return e1 / e0;
}

} // namespace ivb
