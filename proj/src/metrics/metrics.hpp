// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "common/error.hpp"
#include "common/image.hpp"

namespace ivb {

inline constexpr double kPsnrCap = 100.0;

/// 8-bit images, peak 255, MSE over all channels. Zero MSE gives kPsnrCap.
double psnr(const ImageU8& a, const ImageU8& b);
/// Float images with an explicit peak.
double psnr(const ImageF& a, const ImageF& b, double peak);

/// BT.601 luma of an 8-bit RGB image (single-channel images pass through).
ImageF luma(const ImageU8& img);

/// Mean SSIM over the valid region of an 11x11 Gaussian window (sigma 1.5),
/// computed on luma with peak 255.
double ssim(const ImageU8& a, const ImageU8& b);

struct QualityVector {
    std::vector<int> view_ids;
    std::vector<double> psnr_db;
    std::vector<double> ssim;

    std::size_t size() const { return view_ids.size(); }
    friend bool operator==(const QualityVector&, const QualityVector&) = default;
};

QualityVector evaluate_views(std::span<const ImageU8> rendered, std::span<const ImageU8> truth,
                             std::span<const int> view_ids, int workers = 0);

/// max - min; throws ConfigError on an empty list.
double interview_delta(std::span<const double> values);

struct QualityDelta {
    double psnr = 0;
    double ssim = 0;
};
QualityDelta interview_delta(const QualityVector& q);

double mean(std::span<const double> values);

struct RDPoint {
    double size_bytes = 0;
    double quality = 0;
};

struct RDCurve {
    std::string label;
    std::vector<RDPoint> points;
};

class NoOverlapError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Classic Bjontegaard: cubic least-squares fits of quality over log10 size,
/// mean difference (test - anchor) across the overlapping log-rate interval.
double bd_quality(const RDCurve& anchor, const RDCurve& test);
/// Cubic fits of log10 size over quality; percent rate change of test vs anchor.
double bd_rate(const RDCurve& anchor, const RDCurve& test);

} // namespace ivb
