#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "stringfx/csv.hpp"
#include "stringfx/errors.hpp"

namespace stringfx {

// One bid/ask quote update. The tick index (position in a TickSeries) is the
// time variable everywhere; the millisecond timestamp is only used for
// per-day equity aggregation and the hourly trade cap.
struct TickQuote {
    std::int64_t timestamp_ms = 0;
    double bid = 0.0;
    double ask = 0.0;
};

struct TickSeries {
    std::vector<TickQuote> ticks;

    std::size_t size() const { return ticks.size(); }
    bool empty() const { return ticks.empty(); }
    const TickQuote& operator[](std::size_t i) const { return ticks[i]; }
};

// Ordered price series. origin_index records the position of values[0] in
// the series this one was cut from (0 for freshly built series).
struct PriceSeries {
    std::vector<double> values;
    std::int64_t origin_index = 0;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    double operator[](std::size_t i) const { return values[i]; }
};

// Chronological three-way split: train followed by eval followed by valid.
struct DataSplit {
    PriceSeries train;
    PriceSeries eval;
    PriceSeries valid;
};

inline double mid_price(const TickQuote& t) { return (t.ask + t.bid) / 2.0; }

inline double spread(const TickQuote& t) { return t.ask - t.bid; }

inline PriceSeries mid_series(const TickSeries& ts) {
    PriceSeries out;
    out.values.reserve(ts.size());
    for (const auto& t : ts.ticks) out.values.push_back(mid_price(t));
    return out;
}

inline std::vector<double> spread_series(const TickSeries& ts) {
    std::vector<double> out;
    out.reserve(ts.size());
    for (const auto& t : ts.ticks) out.push_back(spread(t));
    return out;
}

// Parses a tick CSV document: columns timestamp_ms,bid,ask, one record per
// line, optional header. Validates ask >= bid > 0 and non-decreasing
// timestamps.
inline TickSeries parse_ticks(std::string_view text) {
    TickSeries out;
    bool first_data_line = true;
    csv::for_each_line(text, [&](std::size_t lineno, std::string_view line) {
        auto fields = csv::split_line(line);
        if (first_data_line) {
            first_data_line = false;
            double probe;
            if (!csv::parse_double(fields[0], probe)) return; // header row
        }
        if (fields.size() != 3)
            throw ParseError("line " + std::to_string(lineno) + ": expected 3 fields, got " +
                             std::to_string(fields.size()));
        TickQuote q;
        long long ts;
        if (!csv::parse_int64(fields[0], ts) || !csv::parse_double(fields[1], q.bid) ||
            !csv::parse_double(fields[2], q.ask))
            throw ParseError("line " + std::to_string(lineno) + ": malformed record");
        q.timestamp_ms = ts;
        if (!(q.bid > 0.0) || !std::isfinite(q.bid) || !std::isfinite(q.ask))
            throw ValidationError("line " + std::to_string(lineno) + ": prices must be finite and positive");
        if (q.ask < q.bid)
            throw ValidationError("line " + std::to_string(lineno) + ": ask < bid");
        if (!out.ticks.empty() && q.timestamp_ms < out.ticks.back().timestamp_ms)
            throw ValidationError("line " + std::to_string(lineno) + ": decreasing timestamp");
        out.ticks.push_back(q);
    });
    return out;
}

inline std::string to_csv(const TickSeries& ts) {
    std::string out = "timestamp_ms,bid,ask\n";
    for (const auto& t : ts.ticks) {
        out += std::to_string(t.timestamp_ms);
        out += ',';
        out += csv::format_double(t.bid);
        out += ',';
        out += csv::format_double(t.ask);
        out += '\n';
    }
    return out;
}

// Series CSV: columns index,price, optional header.
inline PriceSeries parse_series_csv(std::string_view text) {
    PriceSeries out;
    bool first_data_line = true;
    bool have_origin = false;
    csv::for_each_line(text, [&](std::size_t lineno, std::string_view line) {
        auto fields = csv::split_line(line);
        if (first_data_line) {
            first_data_line = false;
            double probe;
            if (!csv::parse_double(fields[0], probe)) return;
        }
        if (fields.size() != 2)
            throw ParseError("line " + std::to_string(lineno) + ": expected 2 fields, got " +
                             std::to_string(fields.size()));
        long long idx;
        double price;
        if (!csv::parse_int64(fields[0], idx) || !csv::parse_double(fields[1], price))
            throw ParseError("line " + std::to_string(lineno) + ": malformed record");
        if (!std::isfinite(price))
            throw ValidationError("line " + std::to_string(lineno) + ": non-finite price");
        if (!have_origin) {
            out.origin_index = idx;
            have_origin = true;
        }
        out.values.push_back(price);
    });
    return out;
}

inline std::string to_csv(const PriceSeries& s) {
    std::string out = "index,price\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += std::to_string(s.origin_index + static_cast<std::int64_t>(i));
        out += ',';
        out += csv::format_double(s.values[i]);
        out += '\n';
    }
    return out;
}

// Series of returns (p(i+h) - p(i)) / p(i+h) with tick lag h.
inline PriceSeries returns(const PriceSeries& s, int h) {
    if (h < 1) throw ParameterError("returns: lag must be positive");
    if (s.size() <= static_cast<std::size_t>(h))
        throw BoundsError("returns: series shorter than lag");
    PriceSeries out;
    out.origin_index = s.origin_index;
    out.values.reserve(s.size() - static_cast<std::size_t>(h));
    for (std::size_t i = 0; i + static_cast<std::size_t>(h) < s.size(); ++i) {
        double denom = s.values[i + static_cast<std::size_t>(h)];
        if (denom == 0.0)
            throw NumericError("returns: zero price at index " +
                               std::to_string(i + static_cast<std::size_t>(h)));
        out.values.push_back((denom - s.values[i]) / denom);
    }
    return out;
}

// Chronological split with sizes floor(f_train*n), floor(f_eval*n), rest.
inline DataSplit split(const PriceSeries& s, double f_train, double f_eval) {
    if (f_train < 0.0 || f_eval < 0.0 || f_train + f_eval > 1.0)
        throw ParameterError("split: fractions must be non-negative with sum <= 1");
    const std::size_t n = s.size();
    const auto n_train = static_cast<std::size_t>(std::floor(f_train * static_cast<double>(n)));
    const auto n_eval = static_cast<std::size_t>(std::floor(f_eval * static_cast<double>(n)));
    DataSplit out;
    out.train.values.assign(s.values.begin(), s.values.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.train.origin_index = s.origin_index;
    out.eval.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(n_train),
                           s.values.begin() + static_cast<std::ptrdiff_t>(n_train + n_eval));
    out.eval.origin_index = s.origin_index + static_cast<std::int64_t>(n_train);
    out.valid.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(n_train + n_eval), s.values.end());
    out.valid.origin_index = s.origin_index + static_cast<std::int64_t>(n_train + n_eval);
    return out;
}

// Single full period sampled by n points: offset + amplitude*sin(2*pi*k/(n-1) + phase).
inline PriceSeries gen_sinusoid(int n, double amplitude = 1.0, double offset = 0.0, double phase = 0.0) {
    if (n < 2) throw ParameterError("gen_sinusoid: need at least 2 samples");
    PriceSeries out;
    out.values.reserve(static_cast<std::size_t>(n));
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (int k = 0; k < n; ++k)
        out.values.push_back(offset + amplitude * std::sin(two_pi * k / (n - 1) + phase));
    return out;
}

// Deterministic geometric random-walk quote stream for synthetic experiments.
// Timestamps advance ms_per_tick starting at t0.
inline TickSeries gen_random_walk(std::size_t n, std::uint64_t seed, double start = 1.3,
                                  double step = 1e-4, double spread_abs = 2e-4,
                                  std::int64_t ms_per_tick = 1000, std::int64_t t0 = 0) {
    if (n == 0) return {};
    if (!(start > 0.0) || spread_abs < 0.0)
        throw ParameterError("gen_random_walk: start must be positive, spread non-negative");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    TickSeries out;
    out.ticks.reserve(n);
    double mid = start;
    for (std::size_t i = 0; i < n; ++i) {
        TickQuote q;
        q.timestamp_ms = t0 + static_cast<std::int64_t>(i) * ms_per_tick;
        q.bid = mid - spread_abs / 2.0;
        q.ask = mid + spread_abs / 2.0;
        out.ticks.push_back(q);
        mid *= 1.0 + step * z(rng);
        if (mid < spread_abs) mid = spread_abs; // keep quotes positive
    }
    return out;
}

} // namespace stringfx
