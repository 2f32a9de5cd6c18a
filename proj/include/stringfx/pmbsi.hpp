#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "stringfx/errors.hpp"
#include "stringfx/marketdata.hpp"

namespace stringfx {

// ---------------------------------------------------------------------------
// Simple correlation-function predictor
// ---------------------------------------------------------------------------

// Time-scale parameters of the simple correlation invariant: window length l,
// lower summation bound l0, exponential decay scale lambda.
struct SimpleInvariantParams {
    int l = 2;
    int l0 = 0;
    double lambda = 1.0;
};

// Generalized string-invariant predictor parameters. In iterated mode l_pr is
// the multi-step horizon; the internal one-step predictor always runs with
// horizon 1. epsilon is a forecast-site filter level, it never alters the
// forecast value.
struct PmbsiParams {
    int ls = 2;
    int l_pr = 1;
    double Q = 1.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    double W0 = 0.5;
    double epsilon = 1e-10;
};

struct AuxTerms {
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
};

struct Forecast {
    double value = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
    double epsilon_observed = std::numeric_limits<double>::quiet_NaN();
};

inline void validate(const SimpleInvariantParams& p) {
    if (p.l < 0 || p.l0 < 0 || p.l0 > p.l)
        throw ParameterError("simple invariant: need 0 <= l0 <= l");
    if (!(p.lambda > 0.0)) throw ParameterError("simple invariant: lambda must be positive");
}

inline void validate(const PmbsiParams& p) {
    if (p.ls < 1) throw ParameterError("pmbsi: ls must be >= 1");
    if (p.l_pr < 1 || p.l_pr >= p.ls) throw ParameterError("pmbsi: need 1 <= l_pr < ls");
    if (p.Q == 0.0 || !std::isfinite(p.Q)) throw ParameterError("pmbsi: Q must be a nonzero real");
    if (!(p.eta1 > -1.0 && p.eta1 < 1.0 && p.eta2 > -1.0 && p.eta2 < 1.0))
        throw ParameterError("pmbsi: eta1, eta2 must lie in (-1,1)");
    if (p.W0 < 0.0 || p.W0 > 1.0) throw ParameterError("pmbsi: W0 must lie in [0,1]");
    if (p.epsilon < 0.0) throw ParameterError("pmbsi: epsilon must be non-negative");
}

// Normalized exponential weights w_h = e^(-h/lambda) / sum_{h'=0..l} e^(-h'/lambda).
inline std::vector<double> weights_exp(const SimpleInvariantParams& p) {
    validate(p);
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(p.l) + 1);
    double norm = 0.0;
    for (int h = 0; h <= p.l; ++h) {
        const double e = std::exp(-static_cast<double>(h) / p.lambda);
        w.push_back(e);
        norm += e;
    }
    for (double& x : w) x /= norm;
    return w;
}

// Correlation-function invariant
// C_(t,l0) = sum_{h=l0..l} w_h (1 - p_{t-h}/p_{t-1-h}) (1 - p_{t-1-h}/p_{t-2-h}).
// The weight normalization always runs over h = 0..l regardless of l0.
inline double corr_invariant_simple(const PriceSeries& s, std::size_t t, const SimpleInvariantParams& p) {
    validate(p);
    // Referenced indices span [t-2-l, t-l0].
    if (static_cast<long long>(t) - 2 - p.l < 0)
        throw BoundsError("corr_invariant_simple: insufficient history before t");
    if (t - static_cast<std::size_t>(p.l0) >= s.size())
        throw BoundsError("corr_invariant_simple: t exceeds series");
    const auto w = weights_exp(p);
    double acc = 0.0;
    for (int h = p.l0; h <= p.l; ++h) {
        const double a = s.values[t - static_cast<std::size_t>(h)];
        const double b = s.values[t - static_cast<std::size_t>(h) - 1];
        const double c = s.values[t - static_cast<std::size_t>(h) - 2];
        if (b == 0.0 || c == 0.0)
            throw NumericError("corr_invariant_simple: zero price in window");
        acc += w[static_cast<std::size_t>(h)] * (1.0 - a / b) * (1.0 - b / c);
    }
    return acc;
}

// One-step prediction from the stationarity condition C_(t,0) = C_(t+1,0):
// p_{t+1} = p_t (1 + (C_(t+1,1) - C_(t,0)) / (w_0 (1 - p_t/p_{t-1}))).
// Flat price p_t == p_{t-1} yields an invalid forecast (caller falls back).
inline Forecast predict_one_step_simple(const PriceSeries& s, std::size_t t, const SimpleInvariantParams& p) {
    validate(p);
    SimpleInvariantParams p0 = p;
    p0.l0 = 0;
    SimpleInvariantParams p1 = p;
    p1.l0 = 1;
    const double c_t = corr_invariant_simple(s, t, p0);
    const double c_next = corr_invariant_simple(s, t + 1, p1);
    const double pt = s.values[t];
    const double pt1 = s.values[t - 1];
    Forecast f;
    if (pt == pt1) return f; // flat price, denominator vanishes
    const double w0 = weights_exp(p)[0];
    const double value = pt * (1.0 + (c_next - c_t) / (w0 * (1.0 - pt / pt1)));
    if (!std::isfinite(value)) return f;
    f.value = value;
    f.valid = true;
    return f;
}

// ---------------------------------------------------------------------------
// Generalized PMBSI
// ---------------------------------------------------------------------------

// Bimodal weights W(h) = 1-W0 for h <= ls/2, W0 otherwise, h = 0..ls.
// The cutoff is evaluated in integer arithmetic as 2h <= ls.
inline std::vector<double> bimodal_weights(int ls, double W0) {
    if (ls < 0) throw ParameterError("bimodal_weights: ls must be non-negative");
    if (W0 < 0.0 || W0 > 1.0) throw ParameterError("bimodal_weights: W0 must lie in [0,1]");
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(ls) + 1);
    for (int h = 0; h <= ls; ++h) w.push_back(2 * h <= ls ? 1.0 - W0 : W0);
    return w;
}

namespace detail {

inline double bimodal_w(int h, int ls, double W0) { return 2 * h <= ls ? 1.0 - W0 : W0; }

inline void check_positive(const PriceSeries& s, std::size_t i) {
    if (!(s.values[i] > 0.0))
        throw NumericError("pmbsi: non-positive price at index " + std::to_string(i));
}

} // namespace detail

// Parametrized invariant family C(tau, Lambda): a homotopy mixture of the
// 2-end-point product term and the two 1-end-point terms, weighted
// (1-eta1)(1-eta2), eta1(1-eta2) and eta2 respectively.
inline double string_invariant(const PriceSeries& s, std::size_t tau, int Lambda, const PmbsiParams& p) {
    if (Lambda < 0 || Lambda > p.ls) throw ParameterError("string_invariant: need 0 <= Lambda <= ls");
    if (tau + static_cast<std::size_t>(p.ls) >= s.size())
        throw BoundsError("string_invariant: window [tau, tau+ls] exceeds series");
    detail::check_positive(s, tau);
    detail::check_positive(s, tau + static_cast<std::size_t>(p.ls));
    const double p0 = s.values[tau];
    const double pl = s.values[tau + static_cast<std::size_t>(p.ls)];
    double sum2 = 0.0, sum_first = 0.0, sum_second = 0.0;
    for (int h = 0; h <= Lambda; ++h) {
        detail::check_positive(s, tau + static_cast<std::size_t>(h));
        const double ph = s.values[tau + static_cast<std::size_t>(h)];
        const double w = detail::bimodal_w(h, p.ls, p.W0);
        const double first = 1.0 - std::pow(p0 / ph, p.Q);
        const double second = 1.0 - std::pow(ph / pl, p.Q);
        sum2 += w * first * second;
        sum_first += w * first;
        sum_second += w * second;
    }
    return (1.0 - p.eta1) * (1.0 - p.eta2) * sum2 + p.eta1 * (1.0 - p.eta2) * sum_first +
           p.eta2 * sum_second;
}

// Auxiliary variables A1..A5 of the prediction form. Unlike string_invariant
// they never reference p(tau+ls); only h = 0..Lambda enters.
inline AuxTerms aux_terms(const PriceSeries& s, std::size_t tau, int Lambda, const PmbsiParams& p) {
    if (Lambda < 0 || Lambda > p.ls) throw ParameterError("aux_terms: need 0 <= Lambda <= ls");
    if (tau + static_cast<std::size_t>(Lambda) >= s.size())
        throw BoundsError("aux_terms: window [tau, tau+Lambda] exceeds series");
    const double p0 = s.values[tau];
    detail::check_positive(s, tau);
    double s_first = 0.0, s_first_pq = 0.0, s_w = 0.0, s_pq = 0.0;
    for (int h = 0; h <= Lambda; ++h) {
        detail::check_positive(s, tau + static_cast<std::size_t>(h));
        const double ph = s.values[tau + static_cast<std::size_t>(h)];
        const double w = detail::bimodal_w(h, p.ls, p.W0);
        const double first = 1.0 - std::pow(p0 / ph, p.Q);
        const double pq = std::pow(ph, p.Q);
        s_first += w * first;
        s_first_pq += w * first * pq;
        s_w += w;
        s_pq += w * pq;
    }
    AuxTerms a;
    a.a1 = (1.0 - p.eta1) * (1.0 - p.eta2) * s_first;
    a.a2 = -(1.0 - p.eta1) * (1.0 - p.eta2) * s_first_pq;
    a.a3 = p.eta1 * (1.0 - p.eta2) * s_first;
    a.a4 = p.eta2 * s_w;
    a.a5 = -p.eta2 * s_pq;
    return a;
}

// Level of invariance |C(tau, ls-l_pr) - C(tau-l_pr, ls-l_pr)|. A site is
// treated as invariant when this value is <= params.epsilon.
inline double invariance_deviation(const PriceSeries& s, std::size_t tau, const PmbsiParams& p) {
    validate(p);
    const int Lambda = p.ls - p.l_pr;
    if (tau < static_cast<std::size_t>(p.l_pr))
        throw BoundsError("invariance_deviation: tau precedes the shifted window");
    return std::abs(string_invariant(s, tau, Lambda, p) -
                    string_invariant(s, tau - static_cast<std::size_t>(p.l_pr), Lambda, p));
}

// Forecast p(tau0 + l_pr) from data up to tau0. Solves the invariance
// condition C(tau, Lambda) = C(tau0-ls, Lambda) for the unknown p(tau+ls),
// with tau = tau0 + l_pr - ls and Lambda = ls - l_pr:
//   p(tau0+l_pr) = [ (A2+A5) / (C(tau0-ls,Lambda) - A1 - A3 - A4) ]^(1/Q).
// Degenerate algebra (zero denominator, non-positive root base, non-finite
// result) yields an invalid forecast instead of an exception.
inline Forecast predict(const PriceSeries& s, std::size_t tau0, const PmbsiParams& p) {
    validate(p);
    const int Lambda = p.ls - p.l_pr;
    if (tau0 < static_cast<std::size_t>(p.ls))
        throw BoundsError("predict: insufficient history before tau0");
    if (tau0 >= s.size()) throw BoundsError("predict: tau0 exceeds series");
    const std::size_t tau = tau0 + static_cast<std::size_t>(p.l_pr) - static_cast<std::size_t>(p.ls);
    const double c_known = string_invariant(s, tau0 - static_cast<std::size_t>(p.ls), Lambda, p);
    const AuxTerms a = aux_terms(s, tau, Lambda, p);

    Forecast f;
    if (tau0 >= static_cast<std::size_t>(p.ls) + static_cast<std::size_t>(p.l_pr))
        f.epsilon_observed =
            std::abs(c_known - string_invariant(
                                   s, tau0 - static_cast<std::size_t>(p.ls) - static_cast<std::size_t>(p.l_pr),
                                   Lambda, p));

    const double denom = c_known - a.a1 - a.a3 - a.a4;
    if (denom == 0.0) return f;
    const double base = (a.a2 + a.a5) / denom;
    if (!std::isfinite(base) || base <= 0.0) return f;
    const double value = std::pow(base, 1.0 / p.Q);
    if (!std::isfinite(value)) return f;
    f.value = value;
    f.valid = true;
    return f;
}

// Multi-step forecast by iterating the one-step predictor, appending each
// forecast to a private working copy of the series. An invalid intermediate
// forecast falls back to the last valid one (or the last observed price) and
// iteration continues. Requires p.l_pr == 1.
inline Forecast predict_iterated(const PriceSeries& s, std::size_t tau0, const PmbsiParams& p, int steps) {
    validate(p);
    if (p.l_pr != 1) throw ParameterError("predict_iterated: requires l_pr == 1");
    if (steps < 1) throw ParameterError("predict_iterated: steps must be positive");
    if (tau0 < static_cast<std::size_t>(p.ls))
        throw BoundsError("predict_iterated: insufficient history before tau0");
    if (tau0 >= s.size()) throw BoundsError("predict_iterated: tau0 exceeds series");

    // Only the tail [tau0-ls-1, tau0] of the history can influence the
    // iteration (one extra point for the observed-deviation window).
    const std::size_t keep = static_cast<std::size_t>(p.ls) + 2;
    const std::size_t start = tau0 + 1 >= keep ? tau0 + 1 - keep : 0;
    PriceSeries work;
    work.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(start),
                       s.values.begin() + static_cast<std::ptrdiff_t>(tau0 + 1));

    Forecast result;
    bool have_last_valid = false;
    double last_valid = 0.0;
    bool first_step = true;
    bool final_valid = false;
    for (int k = 0; k < steps; ++k) {
        const Forecast step = predict(work, work.size() - 1, p);
        if (first_step) {
            result.epsilon_observed = step.epsilon_observed;
            first_step = false;
        }
        double value;
        if (step.valid) {
            value = step.value;
            last_valid = step.value;
            have_last_valid = true;
            final_valid = true;
        } else {
            value = have_last_valid ? last_valid : work.values.back();
            final_valid = false;
        }
        work.values.push_back(value);
    }
    result.value = work.values.back();
    result.valid = final_valid;
    return result;
}

// ---------------------------------------------------------------------------
// Walk-forward forecast runner
// ---------------------------------------------------------------------------

enum class ForecastMode { Simple, Direct, Iterated };

struct ForecastRow {
    std::size_t index = 0; // target index in the input series
    double actual = 0.0;
    double forecast = 0.0;
    bool valid = true;
    double epsilon_observed = std::numeric_limits<double>::quiet_NaN();
};

struct ForecastRun {
    std::vector<ForecastRow> rows;
    double shift = 0.0; // constant added before prediction, removed after
};

// Shift constant for series containing non-positive elements: the method
// requires strictly positive data, so K = 1 + |min| is added before
// prediction and subtracted from every forecast.
inline double nonzero_shift(const PriceSeries& s) {
    double lo = std::numeric_limits<double>::infinity();
    for (double v : s.values) lo = std::min(lo, v);
    return lo <= 0.0 ? 1.0 + std::abs(lo) : 0.0;
}

// Walk-forward forecasts for every target index in [first_target, last_target]
// with enough history. Each forecast for target v is made at tau0 = v - horizon
// using true (shifted) data up to tau0. Invalid forecasts are substituted with
// the last valid forecast of the run, seeded with the last observed price.
inline ForecastRun run_forecasts(const PriceSeries& s, const PmbsiParams& p, ForecastMode mode,
                                 std::size_t first_target, std::size_t last_target,
                                 const SimpleInvariantParams* simple = nullptr) {
    PmbsiParams one_step = p;
    switch (mode) {
    case ForecastMode::Simple:
        if (simple == nullptr) throw ParameterError("run_forecasts: simple mode needs SimpleInvariantParams");
        validate(*simple);
        break;
    case ForecastMode::Direct:
        validate(p);
        break;
    case ForecastMode::Iterated:
        // l_pr is the step count here and may exceed ls; the internal
        // predictor always runs with horizon 1.
        if (p.l_pr < 1) throw ParameterError("run_forecasts: iterated horizon must be positive");
        one_step.l_pr = 1;
        validate(one_step);
        break;
    }
    if (s.empty()) throw ParameterError("run_forecasts: empty series");
    if (last_target >= s.size()) last_target = s.size() - 1;

    ForecastRun run;
    run.shift = nonzero_shift(s);
    PriceSeries shifted;
    shifted.values.reserve(s.size());
    for (double v : s.values) shifted.values.push_back(v + run.shift);

    const int horizon = mode == ForecastMode::Simple ? 1 : p.l_pr;

    std::size_t min_tau0 = 0;
    switch (mode) {
    case ForecastMode::Simple:
        min_tau0 = static_cast<std::size_t>(simple->l) + 2;
        break;
    case ForecastMode::Direct:
    case ForecastMode::Iterated:
        min_tau0 = static_cast<std::size_t>(p.ls);
        break;
    }

    bool have_last_valid = false;
    double last_valid = 0.0;

    for (std::size_t v = first_target; v <= last_target; ++v) {
        if (v < static_cast<std::size_t>(horizon)) continue;
        const std::size_t tau0 = v - static_cast<std::size_t>(horizon);
        if (tau0 < min_tau0) continue;

        Forecast fc;
        switch (mode) {
        case ForecastMode::Simple:
            fc = predict_one_step_simple(shifted, tau0, *simple);
            break;
        case ForecastMode::Direct:
            fc = predict(shifted, tau0, p);
            break;
        case ForecastMode::Iterated:
            fc = predict_iterated(shifted, tau0, one_step, horizon);
            break;
        }

        ForecastRow row;
        row.index = v;
        row.actual = s.values[v];
        row.epsilon_observed = fc.epsilon_observed;
        if (fc.valid) {
            row.forecast = fc.value - run.shift;
            row.valid = true;
            last_valid = row.forecast;
            have_last_valid = true;
        } else {
            row.forecast = have_last_valid ? last_valid : s.values[tau0];
            row.valid = false;
        }
        run.rows.push_back(row);
    }
    return run;
}

inline double run_mae(const ForecastRun& run) {
    if (run.rows.empty()) throw ParameterError("run_mae: no forecast rows");
    double acc = 0.0;
    for (const auto& r : run.rows) acc += std::abs(r.actual - r.forecast);
    return acc / static_cast<double>(run.rows.size());
}

} // namespace stringfx
