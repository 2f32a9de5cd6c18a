#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "stringfx/backtest.hpp"
#include "stringfx/errors.hpp"
#include "stringfx/marketdata.hpp"
#include "stringfx/pmbcs.hpp"

namespace stringfx {

struct SelfEducateWindow {
    std::size_t trade_begin = 0; // tick range [trade_begin, trade_end)
    std::size_t trade_end = 0;
    PmbcsParams params;
    double learn_sharpe = std::numeric_limits<double>::quiet_NaN();
    double learn_profit_pct = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Score of one parameter set on a learn window: statistics are accumulated
// on the first half, trading is simulated on the second half, and the
// resulting (Sharpe, profit) pair is the selection objective. Undefined
// Sharpe ranks below every defined one.
struct LearnScore {
    double sharpe_ratio = -std::numeric_limits<double>::infinity();
    double profit_pct = -std::numeric_limits<double>::infinity();
    bool ok = false;

    bool better_than(const LearnScore& other) const {
        if (ok != other.ok) return ok;
        if (sharpe_ratio != other.sharpe_ratio) return sharpe_ratio > other.sharpe_ratio;
        return profit_pct > other.profit_pct;
    }
};

inline TickSeries synth_ticks(const PriceSeries& mid, std::span<const double> spreads,
                              std::size_t begin, std::size_t end) {
    TickSeries out;
    out.ticks.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        TickQuote q;
        q.timestamp_ms = static_cast<std::int64_t>(i) * 1000; // one tick per second
        q.bid = mid.values[i] - spreads[i] / 2.0;
        q.ask = mid.values[i] + spreads[i] / 2.0;
        out.ticks.push_back(q);
    }
    return out;
}

inline LearnScore evaluate_on_learn(const PriceSeries& mid, std::span<const double> spreads,
                                    std::size_t begin, std::size_t end, const PmbcsParams& p) {
    LearnScore score;
    const std::size_t half = begin + (end - begin) / 2;
    if (half <= begin || half + static_cast<std::size_t>(p.ls) + 1 >= end) return score;

    PriceSeries stats_mid;
    stats_mid.values.assign(mid.values.begin() + static_cast<std::ptrdiff_t>(begin),
                            mid.values.begin() + static_cast<std::ptrdiff_t>(half));
    std::span<const double> stats_spreads(spreads.data() + begin, half - begin);
    MomentumStats stats;
    try {
        stats = accumulate_stats(stats_mid, stats_spreads, p);
    } catch (const Error&) {
        return score;
    }

    PriceSeries sim_mid;
    sim_mid.values.assign(mid.values.begin() + static_cast<std::ptrdiff_t>(half),
                          mid.values.begin() + static_cast<std::ptrdiff_t>(end));
    std::vector<Signal> signals;
    try {
        signals = generate_signals(sim_mid, stats, p, 0, sim_mid.size() - 1);
    } catch (const Error&) {
        return score;
    }

    BacktestConfig cfg;
    cfg.max_positions = p.max_positions;
    cfg.hourly_cap = p.hourly_cap;
    cfg.horizon = p.horizon;
    const TickSeries ticks = synth_ticks(sim_mid, spreads.subspan(half, end - half), 0, end - half);
    BacktestReport report;
    try {
        report = run_backtest(ticks, signals, cfg);
    } catch (const Error&) {
        return score;
    }
    score.ok = true;
    score.profit_pct = report.final_profit_pct;
    score.sharpe_ratio = std::isnan(report.sharpe_ratio) ? -std::numeric_limits<double>::infinity()
                                                         : report.sharpe_ratio;
    return score;
}

} // namespace detail

// Rolling re-optimization: for each consecutive trade window the parameter
// set that scored best (Sharpe, then profit) on the preceding learn window
// governs trading. Selection for a window only ever sees data before it.
// Ties keep the earliest grid entry.
inline std::vector<SelfEducateWindow> self_educate(const PriceSeries& mid, std::span<const double> spreads,
                                                   std::span<const PmbcsParams> grid,
                                                   std::size_t learn_len, std::size_t trade_len) {
    if (grid.empty()) throw ParameterError("self_educate: empty parameter grid");
    if (learn_len < 4 || trade_len < 1) throw ParameterError("self_educate: window lengths too small");
    if (mid.size() != spreads.size())
        throw ParameterError("self_educate: mid and spread series differ in length");
    if (mid.size() < learn_len + trade_len)
        throw ParameterError("self_educate: series shorter than learn_len + trade_len");
    for (const auto& p : grid) validate(p);

    std::vector<SelfEducateWindow> out;
    for (std::size_t trade_begin = learn_len; trade_begin < mid.size(); trade_begin += trade_len) {
        const std::size_t trade_end = std::min(mid.size(), trade_begin + trade_len);
        const std::size_t learn_begin = trade_begin - learn_len;

        SelfEducateWindow win;
        win.trade_begin = trade_begin;
        win.trade_end = trade_end;
        detail::LearnScore best;
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto score = detail::evaluate_on_learn(mid, spreads, learn_begin, trade_begin, grid[i]);
            if (i == 0 || score.better_than(best)) {
                best = score;
                best_idx = i;
            }
        }
        win.params = grid[best_idx];
        if (best.ok) {
            win.learn_sharpe = best.sharpe_ratio;
            win.learn_profit_pct = best.profit_pct;
        }
        out.push_back(win);
    }
    return out;
}

} // namespace stringfx
