// stringfx command-line front end: string-map transforms, PMBSI forecasting,
// PMBCS signal generation, backtesting, grid optimization and metric reports,
// all driven by flags or an INI config file with one section per subcommand.

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stringfx/stringfx.hpp"

namespace {

using nlohmann::json;
using namespace stringfx;

constexpr const char* kVersion = "stringfx 0.1.0";

// Exit codes: 0 success, 2 usage, 3 data, 4 numeric failure.
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

std::string g_summary_path; // set per command so errors can still be summarized

// Relative input paths are also tried under $STRINGFX_DATA_DIR.
std::string resolve_input(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    if (std::ifstream probe(path); probe.good()) return path;
    if (const char* dir = std::getenv("STRINGFX_DATA_DIR")) {
        std::string joined = std::string(dir) + "/" + path;
        if (std::ifstream probe(joined); probe.good()) return joined;
    }
    return path;
}

void write_summary(const json& j) {
    if (g_summary_path.empty()) return;
    csv::write_file(g_summary_path, j.dump(2) + "\n");
}

void write_summary_noexcept(const json& j) {
    try {
        write_summary(j);
    } catch (...) {
    }
}

json num_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

// ---------------------------------------------------------------------------
// transform
// ---------------------------------------------------------------------------

struct TransformArgs {
    std::string input, output, summary, op = "string1";
    int ls = 2, Nm = 1;
    double Q = 1.0;
    long long tau = 0;
};

int cmd_transform(const TransformArgs& a) {
    g_summary_path = a.summary.empty() ? a.output + ".summary.json" : a.summary;
    const PriceSeries s = parse_series_csv(csv::read_file(resolve_input(a.input)));
    const StringWindowConfig cfg{a.ls, a.Q, a.Nm};
    const auto tau = static_cast<std::size_t>(a.tau);

    std::vector<double> values;
    if (a.op == "string1")
        values = string1(s, tau, cfg).values;
    else if (a.op == "string2")
        values = string2(s, tau, cfg).values;
    else if (a.op == "compactify")
        values = compactify(s, cfg, tau).values;
    else if (a.op == "standardize") {
        if (tau + static_cast<std::size_t>(a.ls) >= s.size())
            throw BoundsError("standardize: window exceeds series");
        values = standardize(std::span<const double>(s.values.data() + tau,
                                                     static_cast<std::size_t>(a.ls) + 1));
    } else
        throw ParameterError("unknown transform op: " + a.op);

    std::string out = "h,value\n";
    for (std::size_t h = 0; h < values.size(); ++h)
        out += std::to_string(h) + "," + csv::format_double(values[h]) + "\n";
    csv::write_file(a.output, out);

    write_summary(json{{"command", "transform"},
                       {"op", a.op},
                       {"input", a.input},
                       {"output", a.output},
                       {"ls", a.ls},
                       {"Q", a.Q},
                       {"Nm", a.Nm},
                       {"tau", a.tau},
                       {"n_values", values.size()}});
    return 0;
}

// ---------------------------------------------------------------------------
// forecast
// ---------------------------------------------------------------------------

struct ForecastArgs {
    std::string input, output, summary, mode = "direct";
    int ls = 2, lpr = 1, l0 = 0;
    double Q = 1.0, eta1 = 0.0, eta2 = 0.0, W0 = 0.5, epsilon = 1e-10, lambda = 1.0;
    long long from = -1, to = -1;
};

int cmd_forecast(const ForecastArgs& a) {
    g_summary_path = a.summary.empty() ? a.output + ".summary.json" : a.summary;
    const PriceSeries s = parse_series_csv(csv::read_file(resolve_input(a.input)));
    if (s.empty()) throw ValidationError("forecast: empty input series");

    ForecastMode mode;
    if (a.mode == "simple")
        mode = ForecastMode::Simple;
    else if (a.mode == "direct")
        mode = ForecastMode::Direct;
    else if (a.mode == "iterated")
        mode = ForecastMode::Iterated;
    else
        throw ParameterError("unknown forecast mode: " + a.mode);

    PmbsiParams p;
    p.ls = a.ls;
    p.l_pr = a.lpr;
    p.Q = a.Q;
    p.eta1 = a.eta1;
    p.eta2 = a.eta2;
    p.W0 = a.W0;
    p.epsilon = a.epsilon;
    SimpleInvariantParams simple{a.ls, a.l0, a.lambda};

    const std::size_t first = a.from < 0 ? 0 : static_cast<std::size_t>(a.from);
    const std::size_t last = a.to < 0 ? s.size() - 1 : static_cast<std::size_t>(a.to);
    const ForecastRun run = run_forecasts(s, p, mode, first, last,
                                          mode == ForecastMode::Simple ? &simple : nullptr);
    if (run.rows.empty()) throw BoundsError("forecast: no target with enough history in range");

    std::string out = "index,actual,forecast,valid,epsilon_observed\n";
    std::vector<double> actual, forecast;
    std::size_t invalid = 0;
    for (const auto& r : run.rows) {
        out += std::to_string(s.origin_index + static_cast<std::int64_t>(r.index)) + "," +
               csv::format_double(r.actual) + "," + csv::format_double(r.forecast) + "," +
               (r.valid ? "1" : "0") + "," + csv::format_double(r.epsilon_observed) + "\n";
        actual.push_back(r.actual);
        forecast.push_back(r.forecast);
        if (!r.valid) ++invalid;
    }
    csv::write_file(a.output, out);

    json summary{{"command", "forecast"}, {"mode", a.mode},   {"input", a.input},
                 {"output", a.output},    {"n", run.rows.size()}, {"invalid", invalid},
                 {"shift", run.shift},    {"mae", mae(actual, forecast)}};
    try {
        summary["smape"] = smape(actual, forecast);
    } catch (const NumericError&) {
        summary["smape"] = nullptr;
    }
    write_summary(summary);
    return 0;
}

// ---------------------------------------------------------------------------
// pmbcs
// ---------------------------------------------------------------------------

struct PmbcsArgs {
    std::string ticks, output, summary, template_name = "cosine";
    long long synthetic = 0;
    unsigned long long seed = 1;
    double learn_frac = 0.5;
    PmbcsParams p;
};

int cmd_pmbcs(const PmbcsArgs& a) {
    g_summary_path = a.summary.empty() ? a.output + ".summary.json" : a.summary;
    TickSeries ticks;
    if (a.synthetic > 0)
        ticks = gen_random_walk(static_cast<std::size_t>(a.synthetic), a.seed);
    else if (!a.ticks.empty())
        ticks = parse_ticks(csv::read_file(resolve_input(a.ticks)));
    else
        throw ParameterError("pmbcs: need --ticks or --synthetic");
    if (ticks.size() < 4) throw ValidationError("pmbcs: tick series too short");

    validate(a.p);
    const MomentTemplate tmpl = template_by_name(a.template_name);
    const PriceSeries mid = mid_series(ticks);
    const auto spreads = spread_series(ticks);

    const auto n_learn = static_cast<std::size_t>(a.learn_frac * static_cast<double>(ticks.size()));
    if (n_learn < static_cast<std::size_t>(a.p.ls) + 2 || n_learn >= ticks.size())
        throw ParameterError("pmbcs: learn fraction leaves too little data on one side");

    PriceSeries learn_mid;
    learn_mid.values.assign(mid.values.begin(), mid.values.begin() + static_cast<std::ptrdiff_t>(n_learn));
    const MomentumStats stats =
        accumulate_stats(learn_mid, std::span<const double>(spreads.data(), n_learn), a.p, tmpl);

    const auto signals = generate_signals(mid, stats, a.p, n_learn, mid.size() - 1, tmpl);
    csv::write_file(a.output, to_csv(signals));

    const auto gate_long = opportunity_gate(stats, Side::Long, a.p);
    const auto gate_short = opportunity_gate(stats, Side::Short, a.p);
    std::size_t n_long = 0, n_short = 0;
    for (const auto& s : signals) {
        if (s.direction == Side::Long) ++n_long;
        if (s.direction == Side::Short) ++n_short;
    }
    write_summary(json{{"command", "pmbcs"},
                       {"output", a.output},
                       {"ticks", a.synthetic > 0 ? "synthetic" : a.ticks},
                       {"seed", a.seed},
                       {"learn_ticks", n_learn},
                       {"sites_evaluated", stats.sites_evaluated},
                       {"signals", signals.size()},
                       {"long_signals", n_long},
                       {"short_signals", n_short},
                       {"gate_long",
                        {{"passed", gate_long.passed},
                         {"dkl", num_or_null(gate_long.dkl)},
                         {"skew", num_or_null(gate_long.skew)},
                         {"sharpe", num_or_null(gate_long.sharpe_ratio)},
                         {"note", gate_long.note}}},
                       {"gate_short",
                        {{"passed", gate_short.passed},
                         {"dkl", num_or_null(gate_short.dkl)},
                         {"skew", num_or_null(gate_short.skew)},
                         {"sharpe", num_or_null(gate_short.sharpe_ratio)},
                         {"note", gate_short.note}}}});
    return 0;
}

// ---------------------------------------------------------------------------
// backtest
// ---------------------------------------------------------------------------

struct BacktestArgs {
    std::string ticks, signals, output, summary;
    BacktestConfig cfg;
};

int cmd_backtest(const BacktestArgs& a) {
    g_summary_path = a.summary.empty() ? a.output + "_summary.json" : a.summary;
    const TickSeries ticks = parse_ticks(csv::read_file(resolve_input(a.ticks)));
    const auto signals = parse_signals_csv(csv::read_file(resolve_input(a.signals)));
    const BacktestReport report = run_backtest(ticks, signals, a.cfg);

    std::string trades = "open_idx,close_idx,dir,open_px,close_px,units,pnl\n";
    for (const auto& t : report.trades)
        trades += std::to_string(t.open_index) + "," + std::to_string(t.close_index) + "," +
                  to_string(t.direction) + "," + csv::format_double(t.open_price) + "," +
                  csv::format_double(t.close_price) + "," + csv::format_double(t.units) + "," +
                  csv::format_double(t.pnl) + "\n";
    csv::write_file(a.output + "_trades.csv", trades);

    std::string eq_trade = "trade,equity\n";
    for (std::size_t i = 0; i < report.equity_by_trade.size(); ++i)
        eq_trade += std::to_string(i) + "," + csv::format_double(report.equity_by_trade[i]) + "\n";
    csv::write_file(a.output + "_equity_trade.csv", eq_trade);

    std::string eq_day = "day,equity\n";
    for (const auto& d : report.equity_by_day)
        eq_day += std::to_string(d.day) + "," + csv::format_double(d.equity) + "\n";
    csv::write_file(a.output + "_equity_day.csv", eq_day);

    write_summary(json{{"command", "backtest"},
                       {"ticks", a.ticks},
                       {"signals", a.signals},
                       {"initial_equity", a.cfg.initial_equity},
                       {"leverage", a.cfg.leverage},
                       {"final_equity", report.final_equity},
                       {"profit_pct", report.final_profit_pct},
                       {"drawdown_pct", report.max_drawdown_pct},
                       {"sharpe", num_or_null(report.sharpe_ratio)},
                       {"trades", report.trade_count},
                       {"aborted", report.aborted},
                       {"diagnostic", report.diagnostic}});
    return 0;
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

struct OptimizeArgs {
    std::string input, ticks, grid, output, summary;
    std::string objective = "eval-mae", mode = "direct";
    int lpr = 1;
    double ftrain = 0.5, feval = 0.0, learn_frac = 0.5;
    double max_drawdown_pct = -1.0; // <0: no constraint
    unsigned workers = 1;
    std::string surface_x, surface_y;
    std::vector<std::string> fixed; // name=value pairs for the surface slice
};

std::string results_csv(const ParameterGrid& grid, const std::vector<GridResult>& results) {
    std::vector<std::string> aux_keys;
    for (const auto& r : results)
        for (const auto& [k, v] : r.auxiliary)
            if (std::find(aux_keys.begin(), aux_keys.end(), k) == aux_keys.end()) aux_keys.push_back(k);
    std::sort(aux_keys.begin(), aux_keys.end());

    std::string out = "rank";
    for (const auto& n : grid.names) out += "," + n;
    out += ",objective,failed,violated";
    for (const auto& k : aux_keys) out += "," + k;
    out += "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        out += std::to_string(i);
        for (double v : r.params) out += "," + csv::format_double(v);
        out += "," + csv::format_double(r.objective);
        out += r.failed ? ",1" : ",0";
        out += r.constraint_violated ? ",1" : ",0";
        for (const auto& k : aux_keys) {
            auto it = r.auxiliary.find(k);
            out += ",";
            out += it == r.auxiliary.end() ? "nan" : csv::format_double(it->second);
        }
        out += "\n";
    }
    return out;
}

std::string surface_csv(const ErrorSurface& surf) {
    std::string out = "y\\x";
    for (double x : surf.xs) out += "," + csv::format_double(x);
    out += "\n";
    for (std::size_t iy = 0; iy < surf.ys.size(); ++iy) {
        out += csv::format_double(surf.ys[iy]);
        for (std::size_t ix = 0; ix < surf.xs.size(); ++ix)
            out += "," + csv::format_double(surf.at(ix, iy));
        out += "\n";
    }
    return out;
}

int cmd_optimize(const OptimizeArgs& a) {
    g_summary_path = a.summary.empty() ? a.output + "_summary.json" : a.summary;
    const ParameterGrid grid = parse_parameter_grid(csv::read_file(resolve_input(a.grid)));

    SearchOptions opts;
    opts.workers = a.workers;
    if (a.max_drawdown_pct >= 0.0) opts.constraints.push_back({"drawdown_pct", a.max_drawdown_pct});

    std::vector<GridResult> results;
    SelectionRule rule;
    if (a.objective == "eval-mae") {
        if (a.input.empty()) throw ParameterError("optimize: eval-mae needs --input");
        const PriceSeries s = parse_series_csv(csv::read_file(resolve_input(a.input)));
        const DataSplit parts = split(s, a.ftrain, a.feval);
        std::size_t first, last;
        if (a.feval > 0.0 && !parts.eval.empty()) {
            first = parts.train.size();
            last = parts.train.size() + parts.eval.size() - 1;
        } else {
            if (parts.train.empty()) throw ParameterError("optimize: empty evaluation region");
            first = 0;
            last = parts.train.size() - 1;
        }
        const ForecastMode mode = a.mode == "iterated" ? ForecastMode::Iterated : ForecastMode::Direct;
        results = grid_search(grid, pmbsi_eval_mae_objective(s, mode, a.lpr, first, last, grid), opts);
        rule = SelectionRule::MinObjective;
    } else if (a.objective == "sharpe-then-profit") {
        if (a.ticks.empty()) throw ParameterError("optimize: sharpe-then-profit needs --ticks");
        const TickSeries ticks = parse_ticks(csv::read_file(resolve_input(a.ticks)));
        opts.maximize = true;
        results = grid_search(grid, pmbcs_trading_objective(ticks, a.learn_frac, grid), opts);
        rule = SelectionRule::SharpeThenProfit;
    } else {
        throw ParameterError("unknown objective: " + a.objective);
    }

    csv::write_file(a.output + "_results.csv", results_csv(grid, results));

    if (!a.surface_x.empty() || !a.surface_y.empty()) {
        if (a.surface_x.empty() || a.surface_y.empty())
            throw ParameterError("optimize: surface needs both --surface-x and --surface-y");
        std::map<std::string, double> fixed;
        for (const auto& f : a.fixed) {
            const auto eq = f.find('=');
            if (eq == std::string::npos) throw ParameterError("--fix expects name=value, got: " + f);
            double v;
            if (!csv::parse_double(f.substr(eq + 1), v))
                throw ParameterError("--fix: bad value in: " + f);
            fixed[f.substr(0, eq)] = v;
        }
        const ErrorSurface surf = error_surface(grid, results, a.surface_x, a.surface_y, fixed);
        csv::write_file(a.output + "_surface.csv", surface_csv(surf));
    }

    json summary{{"command", "optimize"},
                 {"objective", a.objective},
                 {"grid_size", grid.size()},
                 {"workers", a.workers},
                 {"output", a.output}};
    try {
        const GridResult& best = select_best(results, rule);
        json point;
        for (std::size_t i = 0; i < grid.names.size(); ++i) point[grid.names[i]] = best.params[i];
        summary["best"] = {{"params", point},
                           {"objective", best.objective},
                           {"auxiliary", best.auxiliary}};
    } catch (const NoCandidateError&) {
        summary["best"] = nullptr;
    }
    write_summary(summary);
    return 0;
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

struct MetricsArgs {
    std::string actual, forecast, output;
};

int cmd_metrics(const MetricsArgs& a) {
    g_summary_path = a.output;
    const PriceSeries actual = parse_series_csv(csv::read_file(resolve_input(a.actual)));
    const PriceSeries forecast = parse_series_csv(csv::read_file(resolve_input(a.forecast)));
    const ErrorReport rep = error_report(actual.values, forecast.values);
    const json j{{"command", "metrics"}, {"mae", rep.mae}, {"smape", rep.smape}, {"n", rep.n}};
    write_summary(j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// reproduce-sinusoid
// ---------------------------------------------------------------------------

struct ReproduceArgs {
    std::string output, summary, grid;
    unsigned workers = 1;
    int n = 51;
};

int cmd_reproduce(const ReproduceArgs& a) {
    g_summary_path = a.summary.empty() ? a.output + "_summary.json" : a.summary;
    const ParameterGrid grid =
        a.grid.empty() ? default_pmbsi_grid() : parse_parameter_grid(csv::read_file(resolve_input(a.grid)));
    const SinusoidReport rep = reproduce_sinusoid(grid, a.workers, a.n);

    std::string table = "method,horizon,mae_eval,mae_valid,smape_valid,ls,Q,eta1,eta2,W0\n";
    json rows = json::array();
    for (const auto& r : rep.rows) {
        table += r.method + "," + std::to_string(r.horizon) + "," + csv::format_double(r.mae_eval) +
                 "," + csv::format_double(r.mae_valid) + "," + csv::format_double(r.smape_valid);
        if (r.has_params)
            table += "," + std::to_string(r.params.ls) + "," + csv::format_double(r.params.Q) + "," +
                     csv::format_double(r.params.eta1) + "," + csv::format_double(r.params.eta2) +
                     "," + csv::format_double(r.params.W0);
        else
            table += ",,,,,";
        table += "\n";

        json row{{"method", r.method},
                 {"horizon", r.horizon},
                 {"mae_eval", num_or_null(r.mae_eval)},
                 {"mae_valid", r.mae_valid},
                 {"smape_valid", r.smape_valid}};
        if (r.has_params)
            row["params"] = {{"ls", r.params.ls},
                             {"Q", r.params.Q},
                             {"eta1", r.params.eta1},
                             {"eta2", r.params.eta2},
                             {"W0", r.params.W0}};
        rows.push_back(row);
    }
    csv::write_file(a.output + "_table.csv", table);
    write_summary(json{{"command", "reproduce-sinusoid"},
                       {"n_samples", rep.n_samples},
                       {"grid_size", rep.grid_size},
                       {"rows", rows}});
    std::cout << table;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"string-map transforms, string-invariant forecasting and momentum trading "
                 "for tick series"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "INI config file with one section per subcommand");
    app.require_subcommand(1);

    TransformArgs tr;
    auto* transform = app.add_subcommand("transform", "emit a string-map transform of a series window");
    transform->add_option("--input", tr.input, "series CSV (index,price)")->required();
    transform->add_option("--output", tr.output, "output CSV (h,value)")->required();
    transform->add_option("--op", tr.op, "string1|string2|compactify|standardize");
    transform->add_option("--ls", tr.ls, "string length");
    transform->add_option("--Q", tr.Q, "deformation exponent");
    transform->add_option("--Nm", tr.Nm, "compactification folds");
    transform->add_option("--tau", tr.tau, "window start index");
    transform->add_option("--summary", tr.summary, "summary JSON path");

    ForecastArgs fc;
    auto* forecast = app.add_subcommand("forecast", "walk-forward PMBSI forecasts over a series");
    forecast->add_option("--input", fc.input, "series CSV (index,price)")->required();
    forecast->add_option("--output", fc.output, "output CSV")->required();
    forecast->add_option("--mode", fc.mode, "simple|direct|iterated");
    forecast->add_option("--ls", fc.ls, "string length (window length in simple mode)");
    forecast->add_option("--lpr", fc.lpr, "prediction horizon in ticks");
    forecast->add_option("--Q", fc.Q, "exponent");
    forecast->add_option("--eta1", fc.eta1, "homotopy parameter 1");
    forecast->add_option("--eta2", fc.eta2, "homotopy parameter 2");
    forecast->add_option("--W0", fc.W0, "bimodal weight level");
    forecast->add_option("--epsilon", fc.epsilon, "invariance filter level");
    forecast->add_option("--lambda", fc.lambda, "exponential weight scale (simple mode)");
    forecast->add_option("--l0", fc.l0, "lower summation bound (simple mode)");
    forecast->add_option("--from", fc.from, "first target index");
    forecast->add_option("--to", fc.to, "last target index");
    forecast->add_option("--summary", fc.summary, "summary JSON path");

    PmbcsArgs pc;
    auto* pmbcs = app.add_subcommand("pmbcs", "learn momentum statistics and emit trading signals");
    pmbcs->add_option("--ticks", pc.ticks, "tick CSV (timestamp_ms,bid,ask)");
    pmbcs->add_option("--synthetic", pc.synthetic, "generate N random-walk ticks instead of reading");
    pmbcs->add_option("--seed", pc.seed, "seed for synthetic data");
    pmbcs->add_option("--output", pc.output, "signals CSV")->required();
    pmbcs->add_option("--learn-frac", pc.learn_frac, "fraction of ticks used for learning");
    pmbcs->add_option("--template", pc.template_name, "benchmark template (cosine)");
    pmbcs->add_option("--ls", pc.p.ls, "moment string length");
    pmbcs->add_option("--m", pc.p.m, "template frequency");
    pmbcs->add_option("--Q", pc.p.Q, "moment exponent");
    pmbcs->add_option("--phi", pc.p.phi, "template phase");
    pmbcs->add_option("--bins", pc.p.bins, "histogram bins");
    pmbcs->add_option("--d-threshold", pc.p.d_threshold, "KL gate level");
    pmbcs->add_option("--rho-min", pc.p.rho_min, "per-bin odds threshold");
    pmbcs->add_option("--skew-min", pc.p.skew_min, "minimum return skewness");
    pmbcs->add_option("--sharpe-min", pc.p.sharpe_min, "minimum learning Sharpe");
    pmbcs->add_option("--min-bin-count", pc.p.min_bin_count, "bin occupancy floor");
    pmbcs->add_option("--max-positions", pc.p.max_positions, "simultaneous position cap");
    pmbcs->add_option("--hourly-cap", pc.p.hourly_cap, "openings per sliding hour");
    pmbcs->add_option("--horizon", pc.p.horizon, "maximum holding period in ticks");
    pmbcs->add_option("--summary", pc.summary, "summary JSON path");

    BacktestArgs bt;
    auto* backtest = app.add_subcommand("backtest", "execute a signal stream against a tick series");
    backtest->add_option("--ticks", bt.ticks, "tick CSV")->required();
    backtest->add_option("--signals", bt.signals, "signals CSV")->required();
    backtest->add_option("--output", bt.output, "output file prefix")->required();
    backtest->add_option("--initial", bt.cfg.initial_equity, "initial equity");
    backtest->add_option("--leverage", bt.cfg.leverage, "leverage multiplier");
    backtest->add_option("--fraction", bt.cfg.position_fraction, "equity fraction per trade");
    backtest->add_option("--max-positions", bt.cfg.max_positions, "simultaneous position cap");
    backtest->add_option("--hourly-cap", bt.cfg.hourly_cap, "openings per sliding hour");
    backtest->add_option("--commission", bt.cfg.commission, "per-trade commission");
    backtest->add_option("--horizon", bt.cfg.horizon, "maximum holding period in ticks");
    backtest->add_option("--benchmark", bt.cfg.benchmark_per_trade, "risk-free return per trade");
    backtest->add_flag("--allow-negative-equity", bt.cfg.allow_negative_equity,
                       "continue through depleted equity");
    backtest->add_option("--summary", bt.summary, "summary JSON path");

    OptimizeArgs op;
    auto* optimize = app.add_subcommand("optimize", "exhaustive grid search with ranked results");
    optimize->add_option("--grid", op.grid, "grid file (name = v1,v2,...)")->required();
    optimize->add_option("--output", op.output, "output file prefix")->required();
    optimize->add_option("--objective", op.objective, "eval-mae|sharpe-then-profit");
    optimize->add_option("--input", op.input, "series CSV (eval-mae)");
    optimize->add_option("--ticks", op.ticks, "tick CSV (sharpe-then-profit)");
    optimize->add_option("--mode", op.mode, "direct|iterated (eval-mae)");
    optimize->add_option("--lpr", op.lpr, "forecast horizon (eval-mae)");
    optimize->add_option("--ftrain", op.ftrain, "train fraction");
    optimize->add_option("--feval", op.feval, "eval fraction (0: optimize on train part)");
    optimize->add_option("--learn-frac", op.learn_frac, "learning fraction (sharpe-then-profit)");
    optimize->add_option("--max-drawdown", op.max_drawdown_pct, "flag points beyond this drawdown %");
    optimize->add_option("--workers", op.workers, "evaluation threads");
    optimize->add_option("--surface-x", op.surface_x, "surface x axis name");
    optimize->add_option("--surface-y", op.surface_y, "surface y axis name");
    optimize->add_option("--fix", op.fixed, "fixed axis for the surface, name=value (repeatable)");
    optimize->add_option("--summary", op.summary, "summary JSON path");

    MetricsArgs mt;
    auto* metrics = app.add_subcommand("metrics", "MAE/SMAPE report for an actual/forecast pair");
    metrics->add_option("--actual", mt.actual, "actual series CSV")->required();
    metrics->add_option("--forecast", mt.forecast, "forecast series CSV")->required();
    metrics->add_option("--output", mt.output, "report JSON path")->required();

    ReproduceArgs rp;
    auto* reproduce = app.add_subcommand("reproduce-sinusoid",
                                         "run the artificial-data experiment end to end");
    reproduce->add_option("--output", rp.output, "output file prefix")->required();
    reproduce->add_option("--grid", rp.grid, "grid file (defaults to the built-in sweep)");
    reproduce->add_option("--workers", rp.workers, "evaluation threads");
    reproduce->add_option("--n", rp.n, "sinusoid sample count");
    reproduce->add_option("--summary", rp.summary, "summary JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (transform->parsed()) return cmd_transform(tr);
        if (forecast->parsed()) return cmd_forecast(fc);
        if (pmbcs->parsed()) return cmd_pmbcs(pc);
        if (backtest->parsed()) return cmd_backtest(bt);
        if (optimize->parsed()) return cmd_optimize(op);
        if (metrics->parsed()) return cmd_metrics(mt);
        if (reproduce->parsed()) return cmd_reproduce(rp);
        std::cerr << "no subcommand given\n";
        return kExitUsage;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        write_summary_noexcept(json{{"error", e.what()}});
        return kExitUsage;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        write_summary_noexcept(json{{"error", e.what()}});
        return kExitNumeric;
    } catch (const NoCandidateError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        write_summary_noexcept(json{{"error", e.what()}});
        return kExitNumeric;
    } catch (const Error& e) { // parse, validation, bounds
        std::cerr << "data error: " << e.what() << "\n";
        write_summary_noexcept(json{{"error", e.what()}});
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
