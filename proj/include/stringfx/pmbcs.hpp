#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stringfx/errors.hpp"
#include "stringfx/marketdata.hpp"
#include "stringfx/metrics.hpp"
#include "stringfx/signal.hpp"
#include "stringfx/stringmap.hpp"

namespace stringfx {

// Benchmark template evaluated at the internal coordinate h of a window of
// length ls+1. The cosine form is the only built-in; other shapes can be
// passed anywhere a MomentTemplate is accepted.
using MomentTemplate = double (*)(int h, int ls, int m, double phi);

inline double cosine_template(int h, int ls, int m, double phi) {
    const double two_pi = 2.0 * 3.14159265358979323846;
    return 0.5 * (1.0 + std::cos(two_pi * m * h / (ls + 1) + phi));
}

inline MomentTemplate template_by_name(const std::string& name) {
    if (name == "cosine") return &cosine_template;
    throw ParameterError("unknown template: " + name);
}

// Momentum-model parameters. The first group describes the moment itself,
// the second controls the trading gates, the last the execution limits.
struct PmbcsParams {
    int ls = 100;        // moment string length in ticks
    int m = 1;           // template frequency
    double Q = 2.0;      // moment exponent
    double phi = 0.0;    // template phase shift

    int bins = 50;             // momentum histogram bins over [0,1]
    double d_threshold = 0.0;  // KL gate level
    double rho_min = 1.5;      // per-bin smoothed profit/loss odds threshold
    double skew_min = 0.0;     // minimum skewness of learning-trade returns
    double sharpe_min = 0.0;   // minimum Sharpe of learning-trade returns
    int min_bin_count = 20;    // raw occupancy before a bin may be "good"

    int max_positions = 10; // simultaneous open trades
    int hourly_cap = 10;    // openings per sliding hour
    int horizon = 1000;     // maximum holding period in ticks
};

inline void validate(const PmbcsParams& p) {
    if (p.ls < 2) throw ParameterError("pmbcs: ls must be >= 2");
    if (p.m < 1) throw ParameterError("pmbcs: m must be >= 1");
    if (!(p.Q > 0.0)) throw ParameterError("pmbcs: Q must be positive");
    if (p.bins < 2) throw ParameterError("pmbcs: bins must be >= 2");
    if (p.min_bin_count < 1) throw ParameterError("pmbcs: min_bin_count must be >= 1");
    if (p.max_positions < 1) throw ParameterError("pmbcs: max_positions must be >= 1");
    if (p.hourly_cap < 1) throw ParameterError("pmbcs: hourly_cap must be >= 1");
    if (p.horizon < 1) throw ParameterError("pmbcs: horizon must be >= 1");
}

// Momentum of a window of ls+1 prices: the Q-norm mean distance between the
// standardized window and the template,
//   M = ( (1/(ls+1)) sum_h |p_stand(h) - tmpl(h)|^Q )^(1/Q),  M in [0,1].
inline double momentum(std::span<const double> window, const PmbcsParams& p,
                       MomentTemplate tmpl = &cosine_template) {
    if (window.size() != static_cast<std::size_t>(p.ls) + 1)
        throw ParameterError("momentum: window length must be ls+1");
    const auto stand = standardize(window); // throws on a constant window
    double acc = 0.0;
    for (int h = 0; h <= p.ls; ++h)
        acc += std::pow(std::abs(stand[static_cast<std::size_t>(h)] - tmpl(h, p.ls, p.m, p.phi)), p.Q);
    return std::pow(acc / (p.ls + 1), 1.0 / p.Q);
}

// Per-bin profit/loss evidence for both trade directions, collected over a
// learning stretch, plus the pooled returns of all simulated learning trades.
struct MomentumStats {
    Histogram long_profit;
    Histogram long_loss;
    Histogram short_profit;
    Histogram short_loss;
    std::vector<double> realized_returns;
    std::size_t sites_evaluated = 0;
    std::size_t sites_skipped = 0; // degenerate (constant) windows
};

// Simulates, at every tick with a full window ending at it, one long and one
// short position opened at ask/bid and closed after `horizon` ticks (or at
// the end of data), with the spread as the transaction cost. The momentum of
// the window is accumulated into the profit or loss histogram of each
// direction according to the trade outcome.
inline MomentumStats accumulate_stats(const PriceSeries& mid, std::span<const double> spreads,
                                      const PmbcsParams& p, MomentTemplate tmpl = &cosine_template) {
    validate(p);
    if (mid.size() != spreads.size())
        throw ParameterError("accumulate_stats: mid and spread series differ in length");
    MomentumStats stats;
    stats.long_profit = Histogram::uniform(p.bins, 0.0, 1.0);
    stats.long_loss = Histogram::uniform(p.bins, 0.0, 1.0);
    stats.short_profit = Histogram::uniform(p.bins, 0.0, 1.0);
    stats.short_loss = Histogram::uniform(p.bins, 0.0, 1.0);
    if (mid.size() < static_cast<std::size_t>(p.ls) + 2) return stats;

    const std::size_t n = mid.size();
    for (std::size_t tau = static_cast<std::size_t>(p.ls); tau + 1 < n; ++tau) {
        std::span<const double> window(mid.values.data() + tau - static_cast<std::size_t>(p.ls),
                                       static_cast<std::size_t>(p.ls) + 1);
        double lo = window[0], hi = window[0];
        for (double v : window) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo == hi) {
            stats.sites_skipped++;
            continue;
        }
        const double M = momentum(window, p, tmpl);
        const std::size_t exit = std::min(n - 1, tau + static_cast<std::size_t>(p.horizon));

        const double open_ask = mid.values[tau] + spreads[tau] / 2.0;
        const double open_bid = mid.values[tau] - spreads[tau] / 2.0;
        const double close_bid = mid.values[exit] - spreads[exit] / 2.0;
        const double close_ask = mid.values[exit] + spreads[exit] / 2.0;

        const double long_pnl = close_bid - open_ask;
        const double short_pnl = open_bid - close_ask;
        (long_pnl > 0.0 ? stats.long_profit : stats.long_loss).add(M);
        (short_pnl > 0.0 ? stats.short_profit : stats.short_loss).add(M);
        stats.realized_returns.push_back(long_pnl / open_ask);
        stats.realized_returns.push_back(short_pnl / open_bid);
        stats.sites_evaluated++;
    }
    return stats;
}

// Outcome of the opportunity gate for one direction.
struct GateReport {
    bool passed = false;
    double dkl = std::numeric_limits<double>::quiet_NaN();
    double skew = std::numeric_limits<double>::quiet_NaN();
    double sharpe_ratio = std::numeric_limits<double>::quiet_NaN();
    std::string note;
};

// A direction trades only when the profit and loss momentum distributions
// are separated (D_KL above threshold) and the pooled learning returns pass
// the skewness and Sharpe filters. Degenerate statistics fail the gate with
// a diagnostic instead of throwing.
inline GateReport opportunity_gate(const MomentumStats& stats, Side direction, const PmbcsParams& p) {
    if (direction == Side::None) throw ParameterError("opportunity_gate: direction must be long or short");
    GateReport g;
    const Histogram& profit = direction == Side::Long ? stats.long_profit : stats.short_profit;
    const Histogram& loss = direction == Side::Long ? stats.long_loss : stats.short_loss;
    g.dkl = kl_divergence(profit, loss);
    if (!(g.dkl > p.d_threshold)) {
        g.note = "dkl below threshold";
        return g;
    }
    try {
        g.skew = skewness(stats.realized_returns);
        g.sharpe_ratio = sharpe(stats.realized_returns, 0.0);
    } catch (const Error&) {
        g.note = "degenerate learning statistics";
        return g;
    }
    if (g.skew < p.skew_min) {
        g.note = "skewness below minimum";
        return g;
    }
    if (g.sharpe_ratio < p.sharpe_min) {
        g.note = "sharpe below minimum";
        return g;
    }
    g.passed = true;
    return g;
}

// Bins whose smoothed profit/loss frequency ratio is at least rho_min and
// whose raw evidence (profit + loss counts) meets the occupancy floor.
inline std::vector<int> good_bins(const MomentumStats& stats, Side direction, const PmbcsParams& p) {
    if (direction == Side::None) throw ParameterError("good_bins: direction must be long or short");
    const Histogram& profit = direction == Side::Long ? stats.long_profit : stats.short_profit;
    const Histogram& loss = direction == Side::Long ? stats.long_loss : stats.short_loss;
    const auto ppdf = smoothed_pdf(profit);
    const auto lpdf = smoothed_pdf(loss);
    std::vector<int> out;
    for (std::size_t j = 0; j < profit.bins(); ++j) {
        const auto occupancy = profit.counts[j] + loss.counts[j];
        if (occupancy < static_cast<std::uint64_t>(p.min_bin_count)) continue;
        if (ppdf[j] / lpdf[j] >= p.rho_min) out.push_back(static_cast<int>(j));
    }
    return out;
}

// Gates and good-bin membership compiled once per learning phase so that
// signal generation over a stream is a table lookup.
struct SignalPolicy {
    GateReport long_gate;
    GateReport short_gate;
    std::vector<char> good_long;  // indexed by bin
    std::vector<char> good_short;
    int bins = 0;
};

// Bin index of a momentum value over `bins` uniform bins spanning [0,1].
// Matches Histogram::bin_of for the edges used by MomentumStats.
inline int momentum_bin(double M, int bins) {
    if (M <= 0.0) return 0;
    if (M >= 1.0) return bins - 1;
    auto j = static_cast<int>(M * static_cast<double>(bins));
    return j >= bins ? bins - 1 : j;
}

inline SignalPolicy compile_policy(const MomentumStats& stats, const PmbcsParams& p) {
    SignalPolicy pol;
    pol.bins = p.bins;
    pol.long_gate = opportunity_gate(stats, Side::Long, p);
    pol.short_gate = opportunity_gate(stats, Side::Short, p);
    pol.good_long.assign(static_cast<std::size_t>(p.bins), 0);
    pol.good_short.assign(static_cast<std::size_t>(p.bins), 0);
    if (pol.long_gate.passed)
        for (int j : good_bins(stats, Side::Long, p)) pol.good_long[static_cast<std::size_t>(j)] = 1;
    if (pol.short_gate.passed)
        for (int j : good_bins(stats, Side::Short, p)) pol.good_short[static_cast<std::size_t>(j)] = 1;
    return pol;
}

inline Signal signal_from_policy(std::span<const double> window, const SignalPolicy& pol,
                                 const PmbcsParams& p, MomentTemplate tmpl = &cosine_template) {
    Signal sig;
    sig.reason.dkl_long = pol.long_gate.dkl;
    sig.reason.dkl_short = pol.short_gate.dkl;
    sig.reason.gate_long = pol.long_gate.passed;
    sig.reason.gate_short = pol.short_gate.passed;

    double lo = window[0], hi = window[0];
    for (double v : window) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) {
        sig.reason.note = "degenerate window";
        return sig;
    }
    sig.momentum = momentum(window, p, tmpl);
    sig.bin = momentum_bin(sig.momentum, p.bins);

    const bool long_ok = pol.long_gate.passed && pol.good_long[static_cast<std::size_t>(sig.bin)];
    const bool short_ok = pol.short_gate.passed && pol.good_short[static_cast<std::size_t>(sig.bin)];
    if (long_ok && short_ok) {
        sig.reason.note = "conflict: momentum good for both directions";
        return sig;
    }
    if (long_ok) sig.direction = Side::Long;
    if (short_ok) sig.direction = Side::Short;
    return sig;
}

// Signal for a single window against learned statistics. Degenerate windows
// produce a direction-none signal with a diagnostic note.
inline Signal generate_signal(std::span<const double> window, const MomentumStats& stats,
                              const PmbcsParams& p, MomentTemplate tmpl = &cosine_template) {
    validate(p);
    if (window.size() != static_cast<std::size_t>(p.ls) + 1)
        throw ParameterError("generate_signal: window length must be ls+1");
    return signal_from_policy(window, compile_policy(stats, p), p, tmpl);
}

// Signals for every tick in [first_site, last_site] with a full window
// ending at it. Every evaluated site is emitted, direction none included.
inline std::vector<Signal> generate_signals(const PriceSeries& mid, const MomentumStats& stats,
                                            const PmbcsParams& p, std::size_t first_site,
                                            std::size_t last_site,
                                            MomentTemplate tmpl = &cosine_template) {
    validate(p);
    const SignalPolicy pol = compile_policy(stats, p);
    std::vector<Signal> out;
    if (mid.empty()) return out;
    if (last_site >= mid.size()) last_site = mid.size() - 1;
    for (std::size_t tau = std::max(first_site, static_cast<std::size_t>(p.ls)); tau <= last_site; ++tau) {
        std::span<const double> window(mid.values.data() + tau - static_cast<std::size_t>(p.ls),
                                       static_cast<std::size_t>(p.ls) + 1);
        Signal sig = signal_from_policy(window, pol, p, tmpl);
        sig.index = tau;
        out.push_back(sig);
    }
    return out;
}

} // namespace stringfx
