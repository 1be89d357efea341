// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "codec/huffman.hpp"

#include <algorithm>
#include <queue>

namespace ivb {

void HuffmanTable::assign_codes() {
    code.fill(0);
    length.fill(0);
    std::uint32_t c = 0;
    std::size_t k = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
        for (int i = 0; i < counts[len - 1]; ++i, ++k) {
            code[symbols[k]] = c++;
            length[symbols[k]] = static_cast<std::uint8_t>(len);
        }
        c <<= 1;
    }
}

HuffmanTable build_huffman(std::span<const std::uint64_t, 256> freq) {
    HuffmanTable t;
    std::vector<int> used;
    for (int s = 0; s < 256; ++s) {
        if (freq[s] > 0) used.push_back(s);
    }
    if (used.empty()) return t;

    std::array<int, 256> depth{};
    if (used.size() == 1) {
        depth[used[0]] = 1;
    } else {
        struct Node {
            std::uint64_t weight;
            int id;
        };
        auto later = [](const Node& a, const Node& b) {
            return a.weight != b.weight ? a.weight > b.weight : a.id > b.id;
        };
        std::priority_queue<Node, std::vector<Node>, decltype(later)> heap(later);
        std::vector<int> parent(512, -1);
        for (int s : used) heap.push({freq[s], s});
        int next = 256;
        while (heap.size() > 1) {
            const Node a = heap.top();
            heap.pop();
            const Node b = heap.top();
            heap.pop();
            parent[a.id] = parent[b.id] = next;
            heap.push({a.weight + b.weight, next++});
        }
        for (int s : used) {
            int d = 0;
            for (int n = s; parent[n] >= 0; n = parent[n]) ++d;
            depth[s] = d;
        }
    }

    std::array<int, 257> bits{};
    for (int s : used) ++bits[depth[s]];
    for (int i = 256; i > kMaxCodeLength; --i) {
        while (bits[i] > 0) {
            int j = i - 2;
            while (bits[j] == 0) --j;
            bits[i] -= 2;
            bits[i - 1] += 1;
            bits[j + 1] += 2;
            bits[j] -= 1;
        }
    }

    // Shortest codes go to the most frequent symbols.
    std::sort(used.begin(), used.end(), [&](int a, int b) { return freq[a] != freq[b] ? freq[a] > freq[b] : a < b; });
    std::vector<std::pair<int, int>> by_len; // (length, symbol)
    std::size_t k = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
        t.counts[len - 1] = static_cast<std::uint16_t>(bits[len]);
        for (int i = 0; i < bits[len]; ++i) by_len.emplace_back(len, used[k++]);
    }
    std::sort(by_len.begin(), by_len.end());
    for (const auto& [len, s] : by_len) t.symbols.push_back(static_cast<std::uint8_t>(s));
    t.assign_codes();
    return t;
}

void write_table(ByteWriter& w, const HuffmanTable& t) {
    for (auto c : t.counts) w.u16(c);
    w.bytes(t.symbols);
}

HuffmanTable read_table(ByteReader& r) {
    HuffmanTable t;
    const std::size_t at = r.offset();
    std::size_t total = 0;
    std::uint64_t kraft = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
        t.counts[len - 1] = r.u16("code table counts");
        total += t.counts[len - 1];
        kraft += static_cast<std::uint64_t>(t.counts[len - 1]) << (kMaxCodeLength - len);
    }
    if (total > 256 || kraft > (1u << kMaxCodeLength)) {
        throw ParseError("invalid code table at byte offset " + std::to_string(at));
    }
    const auto syms = r.bytes(total, "code table symbols");
    t.symbols.assign(syms.begin(), syms.end());
    std::array<bool, 256> seen{};
    for (auto s : t.symbols) {
        if (seen[s]) throw ParseError("duplicate symbol in code table at byte offset " + std::to_string(at));
        seen[s] = true;
    }
    t.assign_codes();
    return t;
}

HuffmanDecoder::HuffmanDecoder(const HuffmanTable& t) : t_(&t) {
    std::int32_t c = 0, k = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
        first_[len] = c;
        offset_[len] = k;
        c = (c + t.counts[len - 1]) << 1;
        k += t.counts[len - 1];
    }
}

std::uint8_t BitReader::decode(const HuffmanDecoder& d) {
    std::int32_t c = 0;
    for (int len = 1; len <= kMaxCodeLength; ++len) {
        c = (c << 1) | static_cast<std::int32_t>(bit());
        const std::int32_t idx = c - d.first_[len];
        if (idx >= 0 && idx < d.t_->counts[len - 1]) return d.t_->symbols[static_cast<std::size_t>(d.offset_[len] + idx)];
    }
    throw ParseError("invalid prefix code");
}

} // namespace ivb
