// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "common/bytes.hpp"

namespace ivb {

inline constexpr int kMaxCodeLength = 16;

/// Canonical prefix code over byte symbols. counts[L-1] codes have length L;
/// symbols are listed in code order.
struct HuffmanTable {
    std::array<std::uint16_t, kMaxCodeLength> counts{};
    std::vector<std::uint8_t> symbols;

    std::array<std::uint32_t, 256> code{};
    std::array<std::uint8_t, 256> length{}; // 0: symbol absent

    /// Fills code/length from counts/symbols.
    void assign_codes();
};

/// Length-limited Huffman code for the given symbol frequencies.
HuffmanTable build_huffman(std::span<const std::uint64_t, 256> freq);

/// 16 x u16 counts followed by the symbols as u8.
void write_table(ByteWriter& w, const HuffmanTable& t);
/// Throws ParseError on over-subscribed or oversized tables.
HuffmanTable read_table(ByteReader& r);

class BitWriter {
public:
    void put(std::uint32_t bits, int n) {
        for (int i = n - 1; i >= 0; --i) {
            acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((bits >> i) & 1u));
            if (++fill_ == 8) {
                out_.push_back(acc_);
                acc_ = 0;
                fill_ = 0;
            }
        }
    }
    void put(const HuffmanTable& t, std::uint8_t symbol) { put(t.code[symbol], t.length[symbol]); }
    /// Pads the final byte with ones.
    std::vector<std::uint8_t> finish() {
        while (fill_ != 0) put(1, 1);
        return std::move(out_);
    }

private:
    std::vector<std::uint8_t> out_;
    std::uint8_t acc_ = 0;
    int fill_ = 0;
};

class HuffmanDecoder {
public:
    explicit HuffmanDecoder(const HuffmanTable& t);
    bool empty() const { return t_->symbols.empty(); }

private:
    friend class BitReader;
    const HuffmanTable* t_;
    std::array<std::int32_t, kMaxCodeLength + 1> first_{};
    std::array<std::int32_t, kMaxCodeLength + 1> offset_{};
};

/// MSB-first bit reader; reading past the end throws ParseError.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint32_t get(int n) {
        std::uint32_t v = 0;
        for (int i = 0; i < n; ++i) v = (v << 1) | bit();
        return v;
    }
    std::uint8_t decode(const HuffmanDecoder& d);
    std::size_t bit_offset() const { return pos_; }

private:
    std::uint32_t bit() {
        if (pos_ >= data_.size() * 8) throw ParseError("coded data exhausted");
        const std::uint32_t b = (data_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
        ++pos_;
        return b;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace ivb
