// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "container/container.hpp"

#include <algorithm>
#include <cstring>
#include <set>

#include "common/bytes.hpp"
#include "common/error.hpp"
#include "scenegen/scenegen.hpp"

namespace ivb {

namespace {

constexpr char kMagic[4] = {'I', 'V', 'B', '1'};

int round_up8(int v) { return (v + 7) / 8 * 8; }

} // namespace

nlohmann::json manifest_to_json(const Manifest& m) {
    nlohmann::json j;
    j["version"] = m.version;
    j["rate_point"] = m.rate_point;
    j["cameras"] = nlohmann::json::array();
    for (const auto& c : m.cameras) j["cameras"].push_back(camera_to_json(c));
    j["atlases"] = nlohmann::json::array();
    for (const auto& a : m.atlases) {
        nlohmann::json pl = nlohmann::json::array();
        for (const auto& p : a.placements) {
            pl.push_back({{"view_id", p.view_id}, {"x", p.x}, {"y", p.y}, {"w", p.w}, {"h", p.h}});
        }
        j["atlases"].push_back({{"id", a.id}, {"width", a.width}, {"height", a.height}, {"placements", pl}});
    }
    return j;
}

Manifest manifest_from_json(const nlohmann::json& j) {
    Manifest m;
    try {
        m.version = j.at("version").get<int>();
        m.rate_point = j.at("rate_point").get<int>();
        for (const auto& c : j.at("cameras")) m.cameras.push_back(camera_from_json(c));
        for (const auto& a : j.at("atlases")) {
            AtlasLayout layout;
            layout.id = a.at("id").get<int>();
            layout.width = a.at("width").get<int>();
            layout.height = a.at("height").get<int>();
            for (const auto& p : a.at("placements")) {
                layout.placements.push_back({p.at("view_id").get<int>(), p.at("x").get<int>(), p.at("y").get<int>(),
                                             p.at("w").get<int>(), p.at("h").get<int>()});
            }
            m.atlases.push_back(std::move(layout));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
    if (m.version != kBitstreamVersion) {
        throw ParseError("manifest: unsupported version " + std::to_string(m.version));
    }
    if (m.rate_point < 0 || m.rate_point > kMaxRatePoint) {
        throw ParseError("manifest: rate_point " + std::to_string(m.rate_point) + " out of range");
    }
    std::set<int> ids;
    for (const auto& c : m.cameras) {
        if (!ids.insert(c.id).second) throw ParseError("manifest: duplicate camera id " + std::to_string(c.id));
    }
    for (const auto& a : m.atlases) {
        for (const auto& p : a.placements) {
            if (!ids.count(p.view_id)) {
                throw ParseError("manifest: placement references unknown view_id " + std::to_string(p.view_id));
            }
        }
    }
    return m;
}

std::string manifest_bytes(const Manifest& m) { return manifest_to_json(m).dump(); }

PackResult pack_atlases(std::span<const SourceView> views, std::span<const CameraParams> cameras, int atlas_count,
                        int rate_point) {
    if (atlas_count < 1) throw ConfigError("atlas_count must be at least 1");
    if (views.empty()) throw ConfigError("no views to pack");
    if (views.size() > static_cast<std::size_t>(kViewsPerAtlas * atlas_count)) {
        throw ConfigError(std::to_string(views.size()) + " views exceed capacity of " + std::to_string(atlas_count) +
                          " atlas(es)");
    }
    if (rate_point < 0 || rate_point > kMaxRatePoint) throw ConfigError("rate_point out of range");
    const int w = views[0].image.width, h = views[0].image.height;
    for (const auto& v : views) {
        if (v.image.width != w || v.image.height != h || v.image.channels != 3) {
            throw ConfigError("views must share one RGB resolution");
        }
        if (std::none_of(cameras.begin(), cameras.end(), [&](const CameraParams& c) { return c.id == v.view_id; })) {
            throw ConfigError("view " + std::to_string(v.view_id) + " has no camera");
        }
    }
    PackResult out;
    out.manifest.rate_point = rate_point;
    out.manifest.cameras.assign(cameras.begin(), cameras.end());
    const int used = static_cast<int>((views.size() + kViewsPerAtlas - 1) / kViewsPerAtlas);
    for (int a = 0; a < used; ++a) {
        Atlas atlas;
        atlas.layout.id = a;
        atlas.layout.width = round_up8(2 * w);
        atlas.layout.height = round_up8(2 * h);
        atlas.image = ImageU8(atlas.layout.width, atlas.layout.height, 3, 0);
        for (int cell = 0; cell < kViewsPerAtlas; ++cell) {
            const std::size_t vi = static_cast<std::size_t>(a * kViewsPerAtlas + cell);
            if (vi >= views.size()) break;
            const Placement p{views[vi].view_id, (cell % 2) * w, (cell / 2) * h, w, h};
            for (int y = 0; y < h; ++y) {
                std::memcpy(&atlas.image.at(p.x, p.y + y), &views[vi].image.at(0, y), static_cast<std::size_t>(w) * 3);
            }
            atlas.layout.placements.push_back(p);
        }
        out.manifest.atlases.push_back(atlas.layout);
        out.atlases.push_back(std::move(atlas));
    }
    return out;
}

std::vector<SourceView> unpack_atlases(std::span<const ImageU8> atlases, const Manifest& manifest) {
    if (atlases.size() != manifest.atlases.size()) {
        throw ParseError("manifest lists " + std::to_string(manifest.atlases.size()) + " atlases, got " +
                         std::to_string(atlases.size()));
    }
    std::vector<SourceView> out;
    for (std::size_t a = 0; a < atlases.size(); ++a) {
        const auto& layout = manifest.atlases[a];
        const ImageU8& img = atlases[a];
        if (img.width != layout.width || img.height != layout.height || img.channels != 3) {
            throw ParseError("atlas " + std::to_string(a) + " dimensions disagree with manifest");
        }
        for (const auto& p : layout.placements) {
            const auto cam = std::find_if(manifest.cameras.begin(), manifest.cameras.end(),
                                          [&](const CameraParams& c) { return c.id == p.view_id; });
            if (cam == manifest.cameras.end()) {
                throw ParseError("placement references unknown view_id " + std::to_string(p.view_id));
            }
            if (p.x < 0 || p.y < 0 || p.w <= 0 || p.h <= 0 || p.x + p.w > img.width || p.y + p.h > img.height) {
                throw ParseError("placement of view " + std::to_string(p.view_id) + " out of atlas bounds");
            }
            if (p.w != cam->intrinsics.width || p.h != cam->intrinsics.height) {
                throw ParseError("placement of view " + std::to_string(p.view_id) + " disagrees with camera size");
            }
            SourceView v{p.view_id, ImageU8(p.w, p.h, 3)};
            for (int y = 0; y < p.h; ++y) {
                std::memcpy(&v.image.at(0, y), &img.at(p.x, p.y + y), static_cast<std::size_t>(p.w) * 3);
            }
            out.push_back(std::move(v));
        }
    }
    return out;
}

std::vector<std::uint8_t> mux(const Manifest& manifest, std::span<const std::vector<std::uint8_t>> payloads) {
    if (payloads.empty()) throw ConfigError("bitstream needs at least one atlas payload");
    if (payloads.size() != manifest.atlases.size()) {
        throw ConfigError("payload count " + std::to_string(payloads.size()) + " does not match manifest atlas count " +
                          std::to_string(manifest.atlases.size()));
    }
    if (payloads.size() > 0xffff) throw ConfigError("too many atlases");
    const std::string json = manifest_bytes(manifest);
    ByteWriter w;
    w.bytes(std::span(reinterpret_cast<const std::uint8_t*>(kMagic), 4));
    w.u8(kBitstreamVersion);
    w.u8(static_cast<std::uint8_t>(manifest.rate_point));
    w.u32(static_cast<std::uint32_t>(json.size()));
    w.text(json);
    w.u16(static_cast<std::uint16_t>(payloads.size()));
    for (const auto& p : payloads) {
        w.u32(static_cast<std::uint32_t>(p.size()));
        w.bytes(p);
    }
    return w.take();
}

Demuxed demux(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    const auto magic = r.bytes(4, "magic");
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw ParseError("bad magic at byte offset 0: expected IVB1");
    const std::size_t version_at = r.offset();
    const int version = r.u8("version");
    if (version != kBitstreamVersion) {
        throw ParseError("unsupported version " + std::to_string(version) + " at byte offset " +
                         std::to_string(version_at));
    }
    Demuxed out;
    const std::size_t rp_at = r.offset();
    out.rate_point = r.u8("rate_point");
    if (out.rate_point > kMaxRatePoint) {
        throw ParseError("rate_point " + std::to_string(out.rate_point) + " out of range at byte offset " +
                         std::to_string(rp_at));
    }
    const std::uint32_t manifest_len = r.u32("manifest_len");
    const std::size_t manifest_at = r.offset();
    const auto mj = r.bytes(manifest_len, "manifest");
    out.manifest_json.assign(mj.begin(), mj.end());
    nlohmann::json j = nlohmann::json::parse(out.manifest_json, nullptr, false);
    if (j.is_discarded()) {
        throw ParseError("manifest at byte offset " + std::to_string(manifest_at) + " is not valid JSON");
    }
    out.manifest = manifest_from_json(j);
    if (out.manifest.rate_point != out.rate_point) {
        throw ParseError("header rate_point disagrees with manifest");
    }
    const std::size_t count_at = r.offset();
    const std::uint16_t count = r.u16("atlas_count");
    if (count == 0 || count != out.manifest.atlases.size()) {
        throw ParseError("atlas_count " + std::to_string(count) + " at byte offset " + std::to_string(count_at) +
                         " does not match manifest (" + std::to_string(out.manifest.atlases.size()) + ")");
    }
    for (int i = 0; i < count; ++i) {
        const std::uint32_t len = r.u32("payload_len");
        const auto p = r.bytes(len, "payload");
        out.payloads.emplace_back(p.begin(), p.end());
    }
    if (r.remaining() != 0) {
        throw ParseError("length mismatch: " + std::to_string(r.remaining()) + " trailing bytes at byte offset " +
                         std::to_string(r.offset()));
    }
    return out;
}

} // namespace ivb
