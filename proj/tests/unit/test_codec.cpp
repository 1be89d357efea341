// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "codec/codec.hpp"
#include "codec/huffman.hpp"
#include "common/error.hpp"
#include "container/container.hpp"
#include "scenegen/scenegen.hpp"
#include "support/oracles.hpp"

namespace ivb {
namespace {

ImageU8 natural_atlas() {
    SceneSpec s;
    s.kind = SceneKind::BoxRoom;
    s.splat_count = 6000;
    s.width = 160;
    s.height = 96;
    const Dataset ds = generate(s);
    std::vector<SourceView> views;
    for (int i = 0; i < 4; ++i) views.push_back({i, ds.views[i]});
    return pack_atlases(views, ds.cameras, 1, 0).atlases[0].image;
}

TEST(Codec, QscaleLadder) {
    EXPECT_EQ(qscale_for(0), 0);
    EXPECT_EQ(qscale_for(1), 8);
    EXPECT_EQ(qscale_for(2), 16);
    EXPECT_EQ(qscale_for(3), 32);
    EXPECT_EQ(qscale_for(4), 64);
    EXPECT_THROW(qscale_for(5), ConfigError);
}

TEST(Codec, DctIsOrthonormal) {
    std::mt19937_64 rng(3);
    double in[64], freq[64], back[64];
    for (double& v : in) v = std::uniform_real_distribution<double>(-128, 128)(rng);
    dct8x8(in, freq);
    idct8x8(freq, back);
    double e_in = 0, e_freq = 0;
    for (int i = 0; i < 64; ++i) {
        EXPECT_NEAR(back[i], in[i], 1e-9);
        e_in += in[i] * in[i];
        e_freq += freq[i] * freq[i];
    }
    EXPECT_NEAR(e_in, e_freq, 1e-6 * e_in);
}

TEST(Codec, LosslessRoundTripRandom) {
    for (int trial = 0; trial < 12; ++trial) {
        const int w = 8 * (1 + trial % 5), h = 8 * (1 + trial % 3);
        const ImageU8 img = testing::random_image(50 + trial, w, h);
        const CodedAtlas coded = encode(img, 0);
        EXPECT_EQ(coded.payload[0], 0);
        EXPECT_EQ(decode(coded.payload), img);
    }
    const ImageU8 atlas = natural_atlas();
    EXPECT_EQ(decode(encode(atlas, 0).payload), atlas);
}

TEST(Codec, ZeroImageCompressesToAlmostNothing) {
    const ImageU8 zero(1920, 1080, 3, 0);
    const CodedAtlas coded = encode(zero, 4);
    EXPECT_LT(coded.size_bytes(), 4096u);
    EXPECT_EQ(decode(coded.payload), zero);
}

TEST(Codec, PayloadHeader) {
    const ImageU8 img = testing::random_image(4, 40, 24);
    const auto p = encode(img, 3).payload;
    EXPECT_EQ(p[0], 1);
    EXPECT_EQ(p[1] | (p[2] << 8), 5);
    EXPECT_EQ(p[3] | (p[4] << 8), 3);
    EXPECT_EQ(p[5], 32);
}

TEST(Codec, SizesShrinkWithRatePoint) {
    const ImageU8 atlas = natural_atlas();
    std::size_t prev = encode(atlas, 0).size_bytes();
    for (int rp = 1; rp <= 4; ++rp) {
        const std::size_t s = encode(atlas, rp).size_bytes();
        EXPECT_LT(s, prev) << "RP" << rp;
        prev = s;
    }
}

TEST(Codec, ConstantImageErrorWithinHalfStep) {
    const double ey = quant_step(0, 64, false) / 16.0;
    const double ec = quant_step(0, 64, true) / 16.0;
    for (int rp = 1; rp <= 4; ++rp) {
        const int q = qscale_for(rp);
        for (auto rgb : {std::array<int, 3>{128, 128, 128}, {17, 17, 17}, {250, 250, 250}, {200, 40, 90},
                         {10, 220, 130}}) {
            ImageU8 img(48, 32, 3);
            for (int y = 0; y < 32; ++y) {
                for (int x = 0; x < 48; ++x) {
                    for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>(rgb[c]);
                }
            }
            const ImageU8 out = decode(encode(img, rp).payload);
            const bool gray = rgb[0] == rgb[1] && rgb[1] == rgb[2];
            const double bound = (ey + (gray ? 0.0 : 1.772 * ec)) * q / 64.0 + 0.5;
            for (std::size_t i = 0; i < img.data.size(); ++i) {
                ASSERT_LE(std::abs(static_cast<int>(out.data[i]) - img.data[i]), bound) << "RP" << rp;
            }
        }
    }
}

TEST(Codec, DecodeIsDeterministic) {
    const ImageU8 img = testing::random_image(5, 64, 48);
    const auto p = encode(img, 2).payload;
    EXPECT_EQ(decode(p, 1), decode(p, 4));
    EXPECT_EQ(encode(img, 2, 1).payload, encode(img, 2, 3).payload);
}

TEST(Codec, RejectsBadDimensions) {
    EXPECT_THROW(encode(testing::random_image(6, 12, 8), 1), ConfigError);
    EXPECT_THROW(encode(testing::random_image(6, 8, 8, 1), 1), ConfigError);
}

TEST(Codec, CorruptPayloadRaisesParseError) {
    const ImageU8 img = testing::random_image(7, 32, 32);
    auto p = encode(img, 2).payload;
    p.resize(p.size() / 2);
    try {
        decode(p);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("truncated at byte offset"), std::string::npos) << e.what();
    }
    auto bad_mode = encode(img, 2).payload;
    bad_mode[0] = 7;
    EXPECT_THROW(decode(bad_mode), ParseError);
}

TEST(Codec, FuzzedPayloadsNeverCrash) {
    const ImageU8 img = testing::random_image(8, 32, 24);
    std::mt19937_64 rng(99);
    for (int rp : {0, 1, 4}) {
        const auto base = encode(img, rp).payload;
        for (int trial = 0; trial < 400; ++trial) {
            auto f = base;
            if (trial % 3 == 0) {
                f.resize(rng() % f.size());
            } else {
                for (int k = 0; k < 3; ++k) f[rng() % f.size()] ^= 1u << (rng() % 8);
            }
            try {
                const ImageU8 out = decode(f);
                EXPECT_EQ(out.channels, 3);
            } catch (const ParseError&) {
            }
        }
    }
}

TEST(Codec, SpectralReport) {
    const ImageU8 atlas = natural_atlas();
    EXPECT_EQ(spectral_report(atlas, atlas), 1.0);
    SceneSpec s;
    s.kind = SceneKind::NoiseAugmented;
    s.noise_sigma = 0.05;
    s.splat_count = 4000;
    s.width = 96;
    s.height = 64;
    const ImageU8 noisy = generate(s).views[0];
    double prev = 1.0;
    for (int rp = 1; rp <= 4; ++rp) {
        const double r = spectral_report(noisy, decode(encode(noisy, rp).payload));
        EXPECT_LE(r, 1.0);
        EXPECT_LE(r, prev + 1e-12) << "RP" << rp;
        prev = r;
    }
    EXPECT_LT(prev, 1.0);
    EXPECT_THROW(spectral_report(noisy, atlas), ConfigError);
}

TEST(Codec, HuffmanRoundTrip) {
    std::array<std::uint64_t, 256> freq{};
    std::mt19937_64 rng(10);
    std::vector<std::uint8_t> msg;
    for (int i = 0; i < 5000; ++i) {
        const auto s = static_cast<std::uint8_t>(std::min<int>(255, static_cast<int>(std::abs(
                                                                         std::normal_distribution<double>(0, 20)(rng)))));
        msg.push_back(s);
        ++freq[s];
    }
    const HuffmanTable t = build_huffman(freq);
    for (int s = 0; s < 256; ++s) {
        if (freq[s] > 0) EXPECT_GT(t.length[s], 0);
        EXPECT_LE(t.length[s], kMaxCodeLength);
    }
    BitWriter bw;
    for (auto s : msg) bw.put(t, s);
    const auto bits = bw.finish();
    ByteWriter tw;
    write_table(tw, t);
    ByteReader tr(tw.buffer());
    const HuffmanTable back = read_table(tr);
    HuffmanDecoder dec(back);
    BitReader br(bits);
    for (auto s : msg) ASSERT_EQ(br.decode(dec), s);
}

} // namespace
} // namespace ivb
