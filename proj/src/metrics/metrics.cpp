// Copyright 2026 The ivbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "metrics/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "common/parallel.hpp"

namespace ivb {

namespace {

double psnr_from_mse(double mse, double peak) {
    if (mse <= 0) return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

constexpr int kWin = 11;
constexpr double kSigma = 1.5;

std::array<double, kWin> gaussian_taps() {
    std::array<double, kWin> w{};
    double sum = 0;
    for (int i = 0; i < kWin; ++i) {
        const double d = i - kWin / 2;
        w[i] = std::exp(-d * d / (2 * kSigma * kSigma));
        sum += w[i];
    }
    for (auto& v : w) v /= sum;
    return w;
}

/// Valid-region separable filter of a W x H plane.
std::vector<double> filter_valid(const std::vector<double>& src, int w, int h) {
    static const auto taps = gaussian_taps();
    const int ow = w - kWin + 1, oh = h - kWin + 1;
    std::vector<double> tmp(static_cast<std::size_t>(ow) * h), out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int k = 0; k < kWin; ++k) s += taps[k] * src[static_cast<std::size_t>(y) * w + x + k];
            tmp[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0;
            for (int k = 0; k < kWin; ++k) s += taps[k] * tmp[static_cast<std::size_t>(y + k) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    return out;
}

struct Fit {
    Eigen::Vector4d coef; // in t = x - center
    double center = 0;

    double integral(double lo, double hi) const {
        auto prim = [&](double x) {
            const double t = x - center;
            return coef[0] * t + coef[1] * t * t / 2 + coef[2] * t * t * t / 3 + coef[3] * t * t * t * t / 4;
        };
        return prim(hi) - prim(lo);
    }
};

Fit cubic_fit(const std::vector<double>& x, const std::vector<double>& y) {
    Fit f;
    for (double v : x) f.center += v;
    f.center /= static_cast<double>(x.size());
    Eigen::MatrixXd a(static_cast<Eigen::Index>(x.size()), 4);
    Eigen::VectorXd b(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i] - f.center;
        a(static_cast<Eigen::Index>(i), 0) = 1;
        a(static_cast<Eigen::Index>(i), 1) = t;
        a(static_cast<Eigen::Index>(i), 2) = t * t;
        a(static_cast<Eigen::Index>(i), 3) = t * t * t;
        b(static_cast<Eigen::Index>(i)) = y[i];
    }
    f.coef = a.colPivHouseholderQr().solve(b);
    return f;
}

void check_curve(const RDCurve& c) {
    if (c.points.size() < 4) {
        throw ConfigError("curve '" + c.label + "' needs at least 4 points, has " + std::to_string(c.points.size()));
    }
    std::set<double> sizes;
    for (const auto& p : c.points) {
        if (!(p.size_bytes > 0) || !std::isfinite(p.quality)) {
            throw ConfigError("curve '" + c.label + "' has a non-positive size or non-finite quality");
        }
        if (!sizes.insert(p.size_bytes).second) throw ConfigError("curve '" + c.label + "' repeats a size");
    }
}

/// Mean of (fit_test - fit_anchor) over the overlap of the abscissae.
double mean_gap(const std::vector<double>& xa, const std::vector<double>& ya, const std::vector<double>& xt,
                const std::vector<double>& yt, const char* axis) {
    const double lo = std::max(*std::min_element(xa.begin(), xa.end()), *std::min_element(xt.begin(), xt.end()));
    const double hi = std::min(*std::max_element(xa.begin(), xa.end()), *std::max_element(xt.begin(), xt.end()));
    if (!(hi > lo)) throw NoOverlapError(std::string("curves do not overlap in ") + axis);
    const Fit fa = cubic_fit(xa, ya), ft = cubic_fit(xt, yt);
    return (ft.integral(lo, hi) - fa.integral(lo, hi)) / (hi - lo);
}

} // namespace

double psnr(const ImageU8& a, const ImageU8& b) {
    if (!a.same_shape(b)) throw ConfigError("psnr: dimension mismatch");
    if (a.data.empty()) throw ConfigError("psnr: empty image");
    double sse = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - b.data[i];
        sse += d * d;
    }
    return psnr_from_mse(sse / static_cast<double>(a.data.size()), 255.0);
}

double psnr(const ImageF& a, const ImageF& b, double peak) {
    if (!a.same_shape(b)) throw ConfigError("psnr: dimension mismatch");
    if (a.data.empty()) throw ConfigError("psnr: empty image");
    double sse = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - b.data[i];
        sse += d * d;
    }
    return psnr_from_mse(sse / static_cast<double>(a.data.size()), peak);
}

ImageF luma(const ImageU8& img) {
    ImageF out(img.width, img.height, 1);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        const std::uint8_t* px = img.data.data() + p * img.channels;
        out.data[p] = img.channels >= 3 ? static_cast<float>(0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2])
                                        : static_cast<float>(px[0]);
    }
    return out;
}

double ssim(const ImageU8& a, const ImageU8& b) {
    if (!a.same_shape(b)) throw ConfigError("ssim: dimension mismatch");
    if (a.width < kWin || a.height < kWin) throw ConfigError("ssim: image smaller than the 11x11 window");
    const int w = a.width, h = a.height;
    const std::size_t n = a.pixel_count();
    const ImageF la = luma(a), lb = luma(b);
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = la.data[i];
        y[i] = lb.data[i];
        xx[i] = x[i] * x[i];
        yy[i] = y[i] * y[i];
        xy[i] = x[i] * y[i];
    }
    const auto mx = filter_valid(x, w, h), my = filter_valid(y, w, h);
    const auto sxx = filter_valid(xx, w, h), syy = filter_valid(yy, w, h), sxy = filter_valid(xy, w, h);
    constexpr double c1 = (0.01 * 255) * (0.01 * 255), c2 = (0.03 * 255) * (0.03 * 255);
    double total = 0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double vx = sxx[i] - mx[i] * mx[i], vy = syy[i] - my[i] * my[i], cxy = sxy[i] - mx[i] * my[i];
        total += ((2 * mx[i] * my[i] + c1) * (2 * cxy + c2)) /
                 ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(mx.size());
}

QualityVector evaluate_views(std::span<const ImageU8> rendered, std::span<const ImageU8> truth,
                             std::span<const int> view_ids, int workers) {
    if (rendered.size() != truth.size() || rendered.size() != view_ids.size()) {
        throw ConfigError("evaluate_views: list sizes differ");
    }
    QualityVector q;
    q.view_ids.assign(view_ids.begin(), view_ids.end());
    q.psnr_db.resize(rendered.size());
    q.ssim.resize(rendered.size());
    parallel_for(rendered.size(), workers, [&](std::size_t i) {
        q.psnr_db[i] = psnr(rendered[i], truth[i]);
        q.ssim[i] = ssim(rendered[i], truth[i]);
    });
    return q;
}

double interview_delta(std::span<const double> values) {
    if (values.empty()) throw ConfigError("interview_delta: empty quality vector");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

QualityDelta interview_delta(const QualityVector& q) { return {interview_delta(q.psnr_db), interview_delta(q.ssim)}; }

double mean(std::span<const double> values) {
    if (values.empty()) throw ConfigError("mean of an empty list");
    double s = 0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

double bd_quality(const RDCurve& anchor, const RDCurve& test) {
    check_curve(anchor);
    check_curve(test);
    std::vector<double> xa, ya, xt, yt;
    for (const auto& p : anchor.points) {
        xa.push_back(std::log10(p.size_bytes));
        ya.push_back(p.quality);
    }
    for (const auto& p : test.points) {
        xt.push_back(std::log10(p.size_bytes));
        yt.push_back(p.quality);
    }
    return mean_gap(xa, ya, xt, yt, "log rate");
}

double bd_rate(const RDCurve& anchor, const RDCurve& test) {
    check_curve(anchor);
    check_curve(test);
    std::vector<double> xa, ya, xt, yt;
    for (const auto& p : anchor.points) {
        xa.push_back(p.quality);
        ya.push_back(std::log10(p.size_bytes));
    }
    for (const auto& p : test.points) {
        xt.push_back(p.quality);
        yt.push_back(std::log10(p.size_bytes));
    }
    return (std::pow(10.0, mean_gap(xa, ya, xt, yt, "quality")) - 1.0) * 100.0;
}

} // namespace ivb
