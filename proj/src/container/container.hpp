// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "camera/camera.hpp"
#include "common/image.hpp"

namespace ivb {

inline constexpr int kViewsPerAtlas = 4;
inline constexpr std::uint8_t kBitstreamVersion = 1;
inline constexpr int kMaxRatePoint = 4;

struct Placement {
    int view_id = 0;
    int x = 0, y = 0, w = 0, h = 0;

    friend bool operator==(const Placement&, const Placement&) = default;
};

struct AtlasLayout {
    int id = 0;
    int width = 0;
    int height = 0;
    std::vector<Placement> placements;

    friend bool operator==(const AtlasLayout&, const AtlasLayout&) = default;
};

struct Atlas {
    AtlasLayout layout;
    ImageU8 image;
};

struct Manifest {
    int version = kBitstreamVersion;
    int rate_point = 0;
    std::vector<CameraParams> cameras;
    std::vector<AtlasLayout> atlases;
};

nlohmann::json manifest_to_json(const Manifest& m);
/// Throws ParseError on schema violations or dangling view ids.
Manifest manifest_from_json(const nlohmann::json& j);
std::string manifest_bytes(const Manifest& m);

struct SourceView {
    int view_id = 0;
    ImageU8 image;
};

/// Views go into a 2x2 grid per atlas in the given order; atlas dimensions
/// are rounded up to multiples of 8 and unused area is zero.
/// `cameras` is the full rig, recorded in the manifest.
struct PackResult {
    std::vector<Atlas> atlases;
    Manifest manifest;
};
PackResult pack_atlases(std::span<const SourceView> views, std::span<const CameraParams> cameras, int atlas_count,
                        int rate_point);

/// Extracts each placement; output is ordered by atlas then placement.
std::vector<SourceView> unpack_atlases(std::span<const ImageU8> atlases, const Manifest& manifest);

struct Demuxed {
    int rate_point = 0;
    std::string manifest_json;
    Manifest manifest;
    std::vector<std::vector<std::uint8_t>> payloads;
};

/// Layout: "IVB1", u8 version, u8 rate_point, u32 manifest_len, manifest,
/// u16 atlas_count, then per atlas u32 payload_len + payload.
std::vector<std::uint8_t> mux(const Manifest& manifest, std::span<const std::vector<std::uint8_t>> payloads);
Demuxed demux(std::span<const std::uint8_t> bytes);

} // namespace ivb
