#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stringfx/errors.hpp"
#include "stringfx/marketdata.hpp"

namespace stringfx {

struct ErrorReport {
    double mae = 0.0;
    double smape = 0.0;
    std::size_t n = 0;
};

// Fixed-edge histogram with integer counts. Values outside the edge range
// are clamped into the first/last bin.
struct Histogram {
    std::vector<double> edges;       // size bins+1, strictly increasing
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    static Histogram uniform(int bins, double lo, double hi) {
        if (bins < 1 || !(hi > lo)) throw ParameterError("Histogram: need bins >= 1 and hi > lo");
        Histogram h;
        h.edges.reserve(static_cast<std::size_t>(bins) + 1);
        for (int i = 0; i <= bins; ++i)
            h.edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins));
        h.counts.assign(static_cast<std::size_t>(bins), 0);
        return h;
    }

    std::size_t bins() const { return counts.size(); }

    int bin_of(double x) const {
        const double lo = edges.front(), hi = edges.back();
        if (x <= lo) return 0;
        if (x >= hi) return static_cast<int>(bins()) - 1;
        auto j = static_cast<int>((x - lo) / (hi - lo) * static_cast<double>(bins()));
        if (j < 0) j = 0;
        if (j >= static_cast<int>(bins())) j = static_cast<int>(bins()) - 1;
        return j;
    }

    void add(double x) {
        counts[static_cast<std::size_t>(bin_of(x))]++;
        total++;
    }

    bool same_edges(const Histogram& other) const { return edges == other.edges; }
};

inline double mae(std::span<const double> actual, std::span<const double> forecast) {
    if (actual.size() != forecast.size()) throw ParameterError("mae: length mismatch");
    if (actual.empty()) throw ParameterError("mae: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) acc += std::abs(actual[i] - forecast[i]);
    return acc / static_cast<double>(actual.size());
}

inline double smape(std::span<const double> actual, std::span<const double> forecast) {
    if (actual.size() != forecast.size()) throw ParameterError("smape: length mismatch");
    if (actual.empty()) throw ParameterError("smape: empty input");
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double denom = 0.5 * (std::abs(actual[i]) + std::abs(forecast[i]));
        if (denom == 0.0)
            throw NumericError("smape: |A|+|F| = 0 at index " + std::to_string(i));
        acc += std::abs(actual[i] - forecast[i]) / denom;
    }
    return 100.0 * acc / static_cast<double>(actual.size());
}

inline ErrorReport error_report(std::span<const double> actual, std::span<const double> forecast) {
    return ErrorReport{mae(actual, forecast), smape(actual, forecast), actual.size()};
}

// Persistence baseline F_t = A_{t-l_pr}. The returned series is aligned with
// actuals from index l_pr onward (origin_index = l_pr shift).
inline PriceSeries naive_forecast(const PriceSeries& s, int l_pr) {
    if (l_pr < 1) throw ParameterError("naive_forecast: horizon must be positive");
    if (s.size() <= static_cast<std::size_t>(l_pr))
        throw BoundsError("naive_forecast: series shorter than horizon");
    PriceSeries out;
    out.origin_index = s.origin_index + l_pr;
    out.values.assign(s.values.begin(), s.values.end() - l_pr);
    return out;
}

// Sharpe ratio: mean excess return over its population standard deviation.
inline double sharpe(std::span<const double> trade_returns, double benchmark_return) {
    if (trade_returns.size() < 2) throw ParameterError("sharpe: need at least 2 returns");
    const auto n = static_cast<double>(trade_returns.size());
    double mean = 0.0;
    for (double r : trade_returns) mean += r - benchmark_return;
    mean /= n;
    double var = 0.0;
    for (double r : trade_returns) {
        const double d = (r - benchmark_return) - mean;
        var += d * d;
    }
    var /= n;
    if (var == 0.0) throw NumericError("sharpe: zero variance of excess returns");
    return mean / std::sqrt(var);
}

// Sample skewness m3 / m2^(3/2) with population central moments.
inline double skewness(std::span<const double> samples) {
    if (samples.size() < 3) throw ParameterError("skewness: need at least 3 samples");
    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double x : samples) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 == 0.0) throw NumericError("skewness: zero variance");
    return m3 / std::pow(m2, 1.5);
}

// Additive smoothing with pseudo-count 1 per bin, then normalization.
// Guarantees strictly positive frequencies even for empty bins.
inline std::vector<double> smoothed_pdf(const Histogram& h) {
    std::vector<double> out;
    out.reserve(h.bins());
    const double denom = static_cast<double>(h.total) + static_cast<double>(h.bins());
    for (std::uint64_t c : h.counts) out.push_back((static_cast<double>(c) + 1.0) / denom);
    return out;
}

// KL divergence of two already-normalized frequency vectors, natural log.
inline double kl_divergence_pdf(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw ParameterError("kl_divergence: bin count mismatch");
    double acc = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] == 0.0) continue;
        if (q[j] <= 0.0) throw NumericError("kl_divergence: zero q frequency with nonzero p");
        acc += p[j] * std::log(p[j] / q[j]);
    }
    return acc;
}

// KL divergence between two histograms over identical edges, computed on
// smoothed normalized frequencies.
inline double kl_divergence(const Histogram& p, const Histogram& q) {
    if (!p.same_edges(q)) throw ParameterError("kl_divergence: histograms have different edges");
    if (p.total == 0 && q.total == 0) return 0.0;
    const auto ps = smoothed_pdf(p);
    const auto qs = smoothed_pdf(q);
    return kl_divergence_pdf(ps, qs);
}

} // namespace stringfx
