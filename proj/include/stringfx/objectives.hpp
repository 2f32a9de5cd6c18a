#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>

#include "stringfx/backtest.hpp"
#include "stringfx/errors.hpp"
#include "stringfx/marketdata.hpp"
#include "stringfx/optimize.hpp"
#include "stringfx/pmbcs.hpp"
#include "stringfx/pmbsi.hpp"

namespace stringfx {

// Maps named grid axes onto PmbsiParams fields; -1 means the axis is absent
// and the base value applies.
struct PmbsiAxisMap {
    int ls = -1, lpr = -1, Q = -1, eta1 = -1, eta2 = -1, W0 = -1, epsilon = -1;

    static PmbsiAxisMap from(const ParameterGrid& grid) {
        PmbsiAxisMap m;
        for (std::size_t i = 0; i < grid.names.size(); ++i) {
            const auto& n = grid.names[i];
            const int idx = static_cast<int>(i);
            if (n == "ls")
                m.ls = idx;
            else if (n == "lpr")
                m.lpr = idx;
            else if (n == "Q")
                m.Q = idx;
            else if (n == "eta1")
                m.eta1 = idx;
            else if (n == "eta2")
                m.eta2 = idx;
            else if (n == "W0")
                m.W0 = idx;
            else if (n == "epsilon")
                m.epsilon = idx;
            else
                throw ParameterError("unknown pmbsi grid axis: " + n);
        }
        return m;
    }

    PmbsiParams apply(std::span<const double> point, PmbsiParams base) const {
        if (ls >= 0) base.ls = static_cast<int>(std::llround(point[static_cast<std::size_t>(ls)]));
        if (lpr >= 0) base.l_pr = static_cast<int>(std::llround(point[static_cast<std::size_t>(lpr)]));
        if (Q >= 0) base.Q = point[static_cast<std::size_t>(Q)];
        if (eta1 >= 0) base.eta1 = point[static_cast<std::size_t>(eta1)];
        if (eta2 >= 0) base.eta2 = point[static_cast<std::size_t>(eta2)];
        if (W0 >= 0) base.W0 = point[static_cast<std::size_t>(W0)];
        if (epsilon >= 0) base.epsilon = point[static_cast<std::size_t>(epsilon)];
        return base;
    }
};

// Walk-forward MAE of a PMBSI configuration over the target range
// [first_target, last_target]. Infeasible parameter combinations (horizon
// not below ls in direct mode, no forecastable site) fail the point.
inline PointEvaluator pmbsi_eval_mae_objective(PriceSeries series, ForecastMode mode, int horizon,
                                               std::size_t first_target, std::size_t last_target,
                                               const ParameterGrid& grid, PmbsiParams base = {}) {
    if (mode == ForecastMode::Simple)
        throw ParameterError("pmbsi_eval_mae_objective: simple mode has its own parameter set");
    const PmbsiAxisMap axis = PmbsiAxisMap::from(grid);
    return [series = std::move(series), mode, horizon, first_target, last_target, axis,
            base](std::span<const double> point) -> EvalOutcome {
        PmbsiParams p = axis.apply(point, base);
        if (axis.lpr < 0) p.l_pr = horizon;
        EvalOutcome out;
        const ForecastRun run = run_forecasts(series, p, mode, first_target, last_target);
        out.objective = run_mae(run);
        out.auxiliary["mae_eval"] = out.objective;
        std::size_t invalid = 0;
        for (const auto& r : run.rows)
            if (!r.valid) ++invalid;
        out.auxiliary["invalid_rate"] =
            static_cast<double>(invalid) / static_cast<double>(run.rows.size());
        return out;
    };
}

// Named PmbcsParams axes, same convention as PmbsiAxisMap.
struct PmbcsAxisMap {
    int ls = -1, m = -1, Q = -1, phi = -1, bins = -1, d_threshold = -1, rho_min = -1, skew_min = -1,
        sharpe_min = -1, min_bin_count = -1, horizon = -1;

    static PmbcsAxisMap from(const ParameterGrid& grid) {
        PmbcsAxisMap a;
        for (std::size_t i = 0; i < grid.names.size(); ++i) {
            const auto& n = grid.names[i];
            const int idx = static_cast<int>(i);
            if (n == "ls")
                a.ls = idx;
            else if (n == "m")
                a.m = idx;
            else if (n == "Q")
                a.Q = idx;
            else if (n == "phi")
                a.phi = idx;
            else if (n == "bins")
                a.bins = idx;
            else if (n == "d_threshold")
                a.d_threshold = idx;
            else if (n == "rho_min")
                a.rho_min = idx;
            else if (n == "skew_min")
                a.skew_min = idx;
            else if (n == "sharpe_min")
                a.sharpe_min = idx;
            else if (n == "min_bin_count")
                a.min_bin_count = idx;
            else if (n == "horizon")
                a.horizon = idx;
            else
                throw ParameterError("unknown pmbcs grid axis: " + n);
        }
        return a;
    }

    PmbcsParams apply(std::span<const double> point, PmbcsParams base) const {
        auto as_int = [&](int idx) { return static_cast<int>(std::llround(point[static_cast<std::size_t>(idx)])); };
        if (ls >= 0) base.ls = as_int(ls);
        if (m >= 0) base.m = as_int(m);
        if (Q >= 0) base.Q = point[static_cast<std::size_t>(Q)];
        if (phi >= 0) base.phi = point[static_cast<std::size_t>(phi)];
        if (bins >= 0) base.bins = as_int(bins);
        if (d_threshold >= 0) base.d_threshold = point[static_cast<std::size_t>(d_threshold)];
        if (rho_min >= 0) base.rho_min = point[static_cast<std::size_t>(rho_min)];
        if (skew_min >= 0) base.skew_min = point[static_cast<std::size_t>(skew_min)];
        if (sharpe_min >= 0) base.sharpe_min = point[static_cast<std::size_t>(sharpe_min)];
        if (min_bin_count >= 0) base.min_bin_count = as_int(min_bin_count);
        if (horizon >= 0) base.horizon = as_int(horizon);
        return base;
    }
};

// Learn-then-trade evaluation of a PMBCS configuration: statistics are
// accumulated on the first learn_frac of the ticks, signals drive a backtest
// over the remainder. Objective is the report Sharpe (maximize); runs whose
// Sharpe is undefined fail the point. Auxiliary metrics carry profit,
// drawdown and trade count for constraints and the sharpe-then-profit rule.
inline PointEvaluator pmbcs_trading_objective(TickSeries ticks, double learn_frac,
                                              const ParameterGrid& grid, PmbcsParams base = {},
                                              BacktestConfig cfg = {}) {
    if (!(learn_frac > 0.0) || learn_frac >= 1.0)
        throw ParameterError("pmbcs_trading_objective: learn_frac must lie in (0,1)");
    const PmbcsAxisMap axis = PmbcsAxisMap::from(grid);
    return [ticks = std::move(ticks), learn_frac, axis, base, cfg](std::span<const double> point) -> EvalOutcome {
        const PmbcsParams p = axis.apply(point, base);
        validate(p);
        const std::size_t n_learn = static_cast<std::size_t>(
            std::floor(learn_frac * static_cast<double>(ticks.size())));

        TickSeries learn_ticks, trade_ticks;
        learn_ticks.ticks.assign(ticks.ticks.begin(),
                                 ticks.ticks.begin() + static_cast<std::ptrdiff_t>(n_learn));
        trade_ticks.ticks.assign(ticks.ticks.begin() + static_cast<std::ptrdiff_t>(n_learn),
                                 ticks.ticks.end());
        if (learn_ticks.empty() || trade_ticks.empty())
            throw ParameterError("pmbcs_trading_objective: empty learn or trade segment");

        const PriceSeries learn_mid = mid_series(learn_ticks);
        const auto learn_spreads = spread_series(learn_ticks);
        const MomentumStats stats = accumulate_stats(learn_mid, learn_spreads, p);

        const PriceSeries trade_mid = mid_series(trade_ticks);
        const auto signals = generate_signals(trade_mid, stats, p, 0, trade_mid.size() - 1);

        BacktestConfig run_cfg = cfg;
        run_cfg.max_positions = p.max_positions;
        run_cfg.hourly_cap = p.hourly_cap;
        run_cfg.horizon = p.horizon;
        const BacktestReport report = run_backtest(trade_ticks, signals, run_cfg);

        EvalOutcome out;
        out.objective = report.sharpe_ratio;
        out.failed = std::isnan(report.sharpe_ratio);
        out.auxiliary["sharpe"] = report.sharpe_ratio;
        out.auxiliary["profit_pct"] = report.final_profit_pct;
        out.auxiliary["drawdown_pct"] = report.max_drawdown_pct;
        out.auxiliary["trades"] = static_cast<double>(report.trade_count);
        return out;
    };
}

} // namespace stringfx
