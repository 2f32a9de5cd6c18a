#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "stringfx/errors.hpp"
#include "stringfx/marketdata.hpp"
#include "stringfx/metrics.hpp"
#include "stringfx/signal.hpp"

namespace stringfx {

// One trade is exactly one open and one close. Executed prices include the
// spread: longs open at ask and close at bid, shorts open at bid and close
// at ask.
struct Trade {
    Side direction = Side::None;
    std::size_t open_index = 0;
    std::size_t close_index = 0;
    double open_price = 0.0;
    double close_price = 0.0;
    double units = 0.0;
    double pnl = 0.0;
};

struct BacktestConfig {
    double initial_equity = 100000.0;
    double leverage = 1.0;
    double position_fraction = 0.1; // fraction of initial equity allocated per trade
    int max_positions = 10;
    int hourly_cap = 10; // openings per sliding hour, by timestamp
    double commission = 0.0;
    int horizon = 1000; // maximum holding period in ticks
    bool allow_negative_equity = false;
    double benchmark_per_trade = 0.0; // risk-free return per trade for the report Sharpe
};

inline void validate(const BacktestConfig& c) {
    if (!(c.initial_equity > 0.0)) throw ParameterError("backtest: initial equity must be positive");
    if (!(c.leverage > 0.0)) throw ParameterError("backtest: leverage must be positive");
    if (!(c.position_fraction > 0.0) || c.position_fraction > 1.0)
        throw ParameterError("backtest: position_fraction must lie in (0,1]");
    if (c.max_positions < 1) throw ParameterError("backtest: max_positions must be >= 1");
    if (c.hourly_cap < 1) throw ParameterError("backtest: hourly_cap must be >= 1");
    if (c.horizon < 1) throw ParameterError("backtest: horizon must be >= 1");
}

struct DayPoint {
    std::int64_t day = 0; // UTC days since epoch
    double equity = 0.0;
};

struct BacktestReport {
    std::vector<Trade> trades;
    std::vector<double> equity_by_trade; // initial equity followed by one point per close
    std::vector<DayPoint> equity_by_day;
    double final_equity = 0.0;
    double final_profit_pct = 0.0;
    double max_drawdown_pct = 0.0;
    double sharpe_ratio = std::numeric_limits<double>::quiet_NaN(); // NaN when undefined
    std::size_t trade_count = 0;
    bool aborted = false;
    std::string diagnostic;
};

// Peak-to-trough decline as a fraction of the running peak.
inline double max_drawdown(std::span<const double> equity) {
    if (equity.empty()) throw ParameterError("max_drawdown: empty equity curve");
    double peak = equity[0];
    double dd = 0.0;
    for (double e : equity) {
        if (e > peak) peak = e;
        if (peak > 0.0) dd = std::max(dd, (peak - e) / peak);
    }
    return dd;
}

namespace detail {

constexpr std::int64_t kMsPerHour = 3'600'000;
constexpr std::int64_t kMsPerDay = 86'400'000;

inline std::int64_t utc_day(std::int64_t timestamp_ms) {
    // Timestamps are non-negative in practice; floor-divide just in case.
    return timestamp_ms >= 0 ? timestamp_ms / kMsPerDay : (timestamp_ms - kMsPerDay + 1) / kMsPerDay;
}

struct OpenPosition {
    Side direction;
    std::size_t open_index;
    double open_price;
    double units;
    std::size_t expiry; // tick index at which the horizon elapses
};

} // namespace detail

// Per-day equity aggregated by the UTC calendar day of each trade close,
// carrying equity forward over no-trade days across the tick span.
inline std::vector<DayPoint> equity_by_day_curve(const TickSeries& ticks, std::span<const Trade> trades,
                                                 const BacktestConfig& cfg) {
    std::vector<DayPoint> out;
    if (ticks.empty()) return out;
    const std::int64_t first_day = detail::utc_day(ticks.ticks.front().timestamp_ms);
    const std::int64_t last_day = detail::utc_day(ticks.ticks.back().timestamp_ms);
    double equity = cfg.initial_equity;
    std::size_t t = 0;
    for (std::int64_t day = first_day; day <= last_day; ++day) {
        while (t < trades.size() &&
               detail::utc_day(ticks.ticks[trades[t].close_index].timestamp_ms) == day) {
            equity += trades[t].pnl - cfg.commission;
            ++t;
        }
        out.push_back({day, equity});
    }
    return out;
}

// Deterministic execution over a tick stream. A directional signal first
// closes all opposite positions at the signal tick, then opens a new
// position if both the position cap and the sliding hourly cap allow it.
// Positions also close when their holding horizon elapses and at the end of
// data. Signals must be aligned to valid tick indices in non-decreasing
// order.
inline BacktestReport run_backtest(const TickSeries& ticks, std::span<const Signal> signals,
                                   const BacktestConfig& cfg) {
    validate(cfg);
    if (ticks.empty()) throw ParameterError("run_backtest: empty tick series");
    for (std::size_t i = 0; i < signals.size(); ++i) {
        if (signals[i].index >= ticks.size())
            throw BoundsError("run_backtest: signal index " + std::to_string(signals[i].index) +
                              " out of range");
        if (i > 0 && signals[i].index < signals[i - 1].index)
            throw ValidationError("run_backtest: signal stream not in tick order");
    }

    BacktestReport report;
    report.equity_by_trade.push_back(cfg.initial_equity);
    double equity = cfg.initial_equity;
    std::vector<detail::OpenPosition> open;
    std::deque<std::int64_t> recent_opens; // timestamps of openings within the last hour
    bool halted = false;

    const double notional = cfg.initial_equity * cfg.position_fraction * cfg.leverage;

    auto close_position = [&](const detail::OpenPosition& pos, std::size_t tick_idx) {
        const TickQuote& q = ticks.ticks[tick_idx];
        Trade tr;
        tr.direction = pos.direction;
        tr.open_index = pos.open_index;
        tr.close_index = tick_idx;
        tr.open_price = pos.open_price;
        tr.units = pos.units;
        if (pos.direction == Side::Long) {
            tr.close_price = q.bid;
            tr.pnl = pos.units * (q.bid - pos.open_price);
        } else {
            tr.close_price = q.ask;
            tr.pnl = pos.units * (pos.open_price - q.ask);
        }
        equity += tr.pnl - cfg.commission;
        report.trades.push_back(tr);
        report.equity_by_trade.push_back(equity);
        if (equity <= 0.0 && !cfg.allow_negative_equity && !halted) {
            halted = true;
            report.aborted = true;
            report.diagnostic = "equity depleted at tick " + std::to_string(tick_idx);
        }
    };

    auto close_matching = [&](std::size_t tick_idx, auto&& pred) {
        std::size_t kept = 0;
        for (std::size_t i = 0; i < open.size(); ++i) {
            if (pred(open[i]))
                close_position(open[i], tick_idx);
            else
                open[kept++] = open[i];
        }
        open.resize(kept);
    };

    std::size_t sig_pos = 0;
    for (std::size_t tau = 0; tau < ticks.size() && !halted; ++tau) {
        // Horizon exits first, then the signals aligned to this tick.
        close_matching(tau, [&](const detail::OpenPosition& p) { return p.expiry <= tau; });
        if (halted) break;

        const TickQuote& q = ticks.ticks[tau];
        for (; sig_pos < signals.size() && signals[sig_pos].index == tau && !halted; ++sig_pos) {
            const Signal& sig = signals[sig_pos];
            if (sig.direction == Side::None) continue;
            const Side opposite = sig.direction == Side::Long ? Side::Short : Side::Long;
            close_matching(tau, [&](const detail::OpenPosition& p) { return p.direction == opposite; });
            if (halted) break;

            if (open.size() >= static_cast<std::size_t>(cfg.max_positions)) continue;
            while (!recent_opens.empty() && recent_opens.front() <= q.timestamp_ms - detail::kMsPerHour)
                recent_opens.pop_front();
            if (recent_opens.size() >= static_cast<std::size_t>(cfg.hourly_cap)) continue;

            detail::OpenPosition pos;
            pos.direction = sig.direction;
            pos.open_index = tau;
            pos.open_price = sig.direction == Side::Long ? q.ask : q.bid;
            pos.units = notional / pos.open_price;
            pos.expiry = tau + static_cast<std::size_t>(cfg.horizon);
            open.push_back(pos);
            recent_opens.push_back(q.timestamp_ms);
        }
    }

    // End of data (or halt): flatten everything at the last processed tick.
    const std::size_t last_idx =
        report.aborted && !report.trades.empty() ? report.trades.back().close_index : ticks.size() - 1;
    for (const auto& pos : open) close_position(pos, last_idx);
    open.clear();

    report.final_equity = equity;
    report.trade_count = report.trades.size();
    report.final_profit_pct = (equity - cfg.initial_equity) / cfg.initial_equity * 100.0;
    report.max_drawdown_pct = max_drawdown(report.equity_by_trade) * 100.0;
    report.equity_by_day = equity_by_day_curve(ticks, report.trades, cfg);

    if (report.trades.size() >= 2) {
        std::vector<double> trade_returns;
        trade_returns.reserve(report.trades.size());
        const double allocated = cfg.initial_equity * cfg.position_fraction;
        for (const auto& tr : report.trades) trade_returns.push_back(tr.pnl / allocated);
        try {
            report.sharpe_ratio = sharpe(trade_returns, cfg.benchmark_per_trade);
        } catch (const Error&) {
            // zero-variance returns: Sharpe stays NaN
        }
    }
    return report;
}

inline std::pair<std::vector<double>, std::vector<DayPoint>> equity_curves(const BacktestReport& r) {
    return {r.equity_by_trade, r.equity_by_day};
}

// Ratios between two runs that differ only in leverage. Matched per-trade
// pnl ratios collapse to a single value when scaling is exactly linear.
struct LeverageComparison {
    double pnl_ratio_min = std::numeric_limits<double>::quiet_NaN();
    double pnl_ratio_max = std::numeric_limits<double>::quiet_NaN();
    double drawdown_ratio = std::numeric_limits<double>::quiet_NaN();
    double profit_pct_ratio = std::numeric_limits<double>::quiet_NaN();
};

inline LeverageComparison leverage_scaling_check(const BacktestReport& base, const BacktestReport& scaled) {
    if (base.trades.size() != scaled.trades.size())
        throw ParameterError("leverage_scaling_check: trade counts differ");
    LeverageComparison out;
    for (std::size_t i = 0; i < base.trades.size(); ++i) {
        if (base.trades[i].pnl == 0.0) continue;
        const double r = scaled.trades[i].pnl / base.trades[i].pnl;
        if (std::isnan(out.pnl_ratio_min) || r < out.pnl_ratio_min) out.pnl_ratio_min = r;
        if (std::isnan(out.pnl_ratio_max) || r > out.pnl_ratio_max) out.pnl_ratio_max = r;
    }
    if (base.max_drawdown_pct != 0.0) out.drawdown_ratio = scaled.max_drawdown_pct / base.max_drawdown_pct;
    if (base.final_profit_pct != 0.0) out.profit_pct_ratio = scaled.final_profit_pct / base.final_profit_pct;
    return out;
}

} // namespace stringfx
