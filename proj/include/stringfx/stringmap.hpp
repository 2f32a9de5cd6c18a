#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "stringfx/errors.hpp"
#include "stringfx/marketdata.hpp"

namespace stringfx {

// Window configuration shared by the string transforms: string size ls,
// deformation exponent Q, and fold count Nm for partial compactification.
struct StringWindowConfig {
    int ls = 1;
    double Q = 1.0;
    int Nm = 1;
};

// One transformed window: values[h] for the internal coordinate h = 0..ls.
struct StringMapValues {
    std::vector<double> values;
    std::size_t base_index = 0;
};

namespace detail {

inline void check_window(const PriceSeries& s, std::size_t tau, int ls) {
    if (ls < 1) throw ParameterError("string map: ls must be >= 1");
    if (tau + static_cast<std::size_t>(ls) >= s.size())
        throw BoundsError("string map: window [tau, tau+ls] exceeds series");
    for (std::size_t i = tau; i <= tau + static_cast<std::size_t>(ls); ++i)
        if (!(s.values[i] > 0.0))
            throw NumericError("string map: non-positive price at index " + std::to_string(i));
}

// Price ratios are strictly positive, so pow is safe for any real Q.
inline double ratio_pow(double num, double den, double q) {
    return std::pow(num / den, q);
}

} // namespace detail

// 1-end-point open string map with power-law deformation:
// value(h) = 1 - [p(tau)/p(tau+h)]^Q. value(0) is exactly 0.
inline StringMapValues string1(const PriceSeries& s, std::size_t tau, const StringWindowConfig& cfg) {
    detail::check_window(s, tau, cfg.ls);
    StringMapValues out;
    out.base_index = tau;
    out.values.reserve(static_cast<std::size_t>(cfg.ls) + 1);
    const double p0 = s.values[tau];
    for (int h = 0; h <= cfg.ls; ++h)
        out.values.push_back(1.0 - detail::ratio_pow(p0, s.values[tau + static_cast<std::size_t>(h)], cfg.Q));
    return out;
}

// 2-end-point open string map, Dirichlet boundary: zero at h = 0 and h = ls.
// value(h) = (1 - [p(tau)/p(tau+h)]^Q) * (1 - [p(tau+h)/p(tau+ls)]^Q).
inline StringMapValues string2(const PriceSeries& s, std::size_t tau, const StringWindowConfig& cfg) {
    detail::check_window(s, tau, cfg.ls);
    StringMapValues out;
    out.base_index = tau;
    out.values.reserve(static_cast<std::size_t>(cfg.ls) + 1);
    const double p0 = s.values[tau];
    const double pl = s.values[tau + static_cast<std::size_t>(cfg.ls)];
    for (int h = 0; h <= cfg.ls; ++h) {
        const double ph = s.values[tau + static_cast<std::size_t>(h)];
        out.values.push_back((1.0 - detail::ratio_pow(p0, ph, cfg.Q)) *
                             (1.0 - detail::ratio_pow(ph, pl, cfg.Q)));
    }
    return out;
}

// Partial compactification: element h = (1/Nm) * sum_m p(tau + h + ls*m),
// h = 0..ls. Averaging Nm consecutive ls-length segments makes the window
// nearly periodic before it feeds an open string map.
inline PriceSeries compactify(const PriceSeries& s, const StringWindowConfig& cfg, std::size_t tau) {
    if (cfg.ls < 1 || cfg.Nm < 1) throw ParameterError("compactify: ls and Nm must be >= 1");
    const std::size_t last = tau + static_cast<std::size_t>(cfg.ls) * static_cast<std::size_t>(cfg.Nm);
    if (last >= s.size())
        throw BoundsError("compactify: needs indices up to tau + ls*Nm within the series");
    PriceSeries out;
    out.origin_index = s.origin_index + static_cast<std::int64_t>(tau);
    out.values.reserve(static_cast<std::size_t>(cfg.ls) + 1);
    for (int h = 0; h <= cfg.ls; ++h) {
        double acc = 0.0;
        for (int m = 0; m < cfg.Nm; ++m)
            acc += s.values[tau + static_cast<std::size_t>(h) +
                            static_cast<std::size_t>(cfg.ls) * static_cast<std::size_t>(m)];
        out.values.push_back(acc / cfg.Nm);
    }
    return out;
}

// Min-max standardization of a window onto [0,1]. The window minimum maps to
// 0 and the maximum to 1 exactly.
inline std::vector<double> standardize(std::span<const double> window) {
    if (window.empty()) throw ParameterError("standardize: empty window");
    double lo = window[0], hi = window[0];
    for (double v : window) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (lo == hi) throw NumericError("standardize: degenerate window (max == min)");
    std::vector<double> out;
    out.reserve(window.size());
    const double range = hi - lo;
    for (double v : window) out.push_back((v - lo) / range);
    return out;
}

inline std::vector<double> standardize(const PriceSeries& window) {
    return standardize(std::span<const double>(window.values));
}

} // namespace stringfx
