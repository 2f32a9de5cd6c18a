#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "stringfx/csv.hpp"
#include "stringfx/errors.hpp"

namespace stringfx {

// Cartesian grid of named parameter axes. Points are enumerated row-major
// with the last axis varying fastest, so flat order equals lexicographic
// order of the parameter tuples.
struct ParameterGrid {
    std::vector<std::string> names;
    std::vector<std::vector<double>> axes;

    void add_axis(std::string name, std::vector<double> values) {
        if (values.empty()) throw ParameterError("grid axis '" + name + "' is empty");
        names.push_back(std::move(name));
        axes.push_back(std::move(values));
    }

    std::size_t size() const {
        if (axes.empty()) return 0;
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.size();
        return n;
    }

    std::vector<double> point(std::size_t flat) const {
        std::vector<double> out(axes.size());
        for (std::size_t i = axes.size(); i-- > 0;) {
            out[i] = axes[i][flat % axes[i].size()];
            flat /= axes[i].size();
        }
        return out;
    }

    std::size_t axis_index(const std::string& name) const {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        throw ParameterError("grid has no axis named '" + name + "'");
    }
};

// Grid file format: one `name = v1,v2,...` per line, '#' comments allowed.
inline ParameterGrid parse_parameter_grid(std::string_view text) {
    ParameterGrid grid;
    csv::for_each_line(text, [&](std::size_t lineno, std::string_view line) {
        if (line.front() == '#') return;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("grid line " + std::to_string(lineno) + ": expected name = values");
        const auto name = csv::trim(line.substr(0, eq));
        if (name.empty()) throw ParseError("grid line " + std::to_string(lineno) + ": empty axis name");
        std::vector<double> values;
        for (auto field : csv::split_line(line.substr(eq + 1))) {
            double v;
            if (!csv::parse_double(field, v))
                throw ParseError("grid line " + std::to_string(lineno) + ": bad value '" +
                                 std::string(field) + "'");
            values.push_back(v);
        }
        grid.add_axis(std::string(name), std::move(values));
    });
    return grid;
}

struct GridResult {
    std::vector<double> params;
    double objective = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;
    bool constraint_violated = false;
    std::map<std::string, double> auxiliary;
};

// What an objective reports for one point. A failed outcome keeps its place
// in the ranking (scored as +/-infinity) instead of aborting the sweep.
struct EvalOutcome {
    double objective = std::numeric_limits<double>::quiet_NaN();
    bool failed = false;
    std::map<std::string, double> auxiliary;
};

using PointEvaluator = std::function<EvalOutcome(std::span<const double>)>;

// Upper bound on an auxiliary metric; exceeding it flags the point as
// constraint-violating (it stays in the ranking). Points missing the metric
// are not flagged.
struct Constraint {
    std::string aux_key;
    double max_value = 0.0;
};

struct SearchOptions {
    bool maximize = false;
    unsigned workers = 1; // evaluation fan-out; the ranking is identical for any value
    std::vector<Constraint> constraints;
};

namespace detail {

inline bool lex_less(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace detail

// Evaluates every grid point exactly once and returns results sorted by
// objective (ascending for minimization), failed points last, ties broken
// lexicographically by parameter tuple. The output is byte-identical for
// any worker count.
inline std::vector<GridResult> grid_search(const ParameterGrid& grid, const PointEvaluator& evaluate,
                                           const SearchOptions& opts = {}) {
    const std::size_t n = grid.size();
    if (n == 0) throw ParameterError("grid_search: empty grid");
    std::vector<GridResult> results(n);

    auto eval_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            GridResult& r = results[i];
            r.params = grid.point(i);
            EvalOutcome out;
            try {
                out = evaluate(r.params);
            } catch (const std::exception&) {
                out.failed = true;
            }
            r.failed = out.failed || !std::isfinite(out.objective);
            r.objective = r.failed ? (opts.maximize ? -std::numeric_limits<double>::infinity()
                                                    : std::numeric_limits<double>::infinity())
                                   : out.objective;
            r.auxiliary = std::move(out.auxiliary);
            if (!r.failed) {
                for (const auto& c : opts.constraints) {
                    auto it = r.auxiliary.find(c.aux_key);
                    if (it != r.auxiliary.end() && it->second > c.max_value) r.constraint_violated = true;
                }
            }
        }
    };

    const unsigned workers = std::max(1u, opts.workers);
    if (workers == 1 || n < 2) {
        eval_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(n, static_cast<std::size_t>(w) * chunk);
            const std::size_t end = std::min(n, begin + chunk);
            if (begin < end) pool.emplace_back(eval_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    std::stable_sort(results.begin(), results.end(), [&](const GridResult& a, const GridResult& b) {
        if (a.failed != b.failed) return !a.failed;
        if (a.objective != b.objective)
            return opts.maximize ? a.objective > b.objective : a.objective < b.objective;
        return detail::lex_less(a.params, b.params);
    });
    return results;
}

enum class SelectionRule { MinObjective, SharpeThenProfit };

// Best non-failed (and, by default, constraint-compliant) result under the
// rule. SharpeThenProfit maximizes auxiliary "sharpe", then "profit_pct".
inline const GridResult& select_best(std::span<const GridResult> results, SelectionRule rule,
                                     bool enforce_constraints = true) {
    const GridResult* best = nullptr;
    for (const auto& r : results) {
        if (r.failed) continue;
        if (enforce_constraints && r.constraint_violated) continue;
        if (rule == SelectionRule::SharpeThenProfit &&
            (!r.auxiliary.count("sharpe") || !r.auxiliary.count("profit_pct")))
            continue;
        if (best == nullptr) {
            best = &r;
            continue;
        }
        bool better = false;
        if (rule == SelectionRule::MinObjective) {
            if (r.objective != best->objective)
                better = r.objective < best->objective;
            else
                better = detail::lex_less(r.params, best->params);
        } else {
            const double rs = r.auxiliary.at("sharpe"), bs = best->auxiliary.at("sharpe");
            const double rp = r.auxiliary.at("profit_pct"), bp = best->auxiliary.at("profit_pct");
            if (rs != bs)
                better = rs > bs;
            else if (rp != bp)
                better = rp > bp;
            else
                better = detail::lex_less(r.params, best->params);
        }
        if (better) best = &r;
    }
    if (best == nullptr) throw NoCandidateError("select_best: no usable grid result");
    return *best;
}

// Dense objective matrix over two grid axes with every remaining axis pinned
// to a fixed value. Missing or failed cells hold NaN.
struct ErrorSurface {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> z; // row-major, z[iy * xs.size() + ix]

    double at(std::size_t ix, std::size_t iy) const { return z[iy * xs.size() + ix]; }
};

inline ErrorSurface error_surface(const ParameterGrid& grid, std::span<const GridResult> results,
                                  const std::string& axis_x, const std::string& axis_y,
                                  const std::map<std::string, double>& fixed) {
    const std::size_t ix_axis = grid.axis_index(axis_x);
    const std::size_t iy_axis = grid.axis_index(axis_y);
    if (ix_axis == iy_axis) throw ParameterError("error_surface: axes must differ");
    for (std::size_t i = 0; i < grid.names.size(); ++i) {
        if (i == ix_axis || i == iy_axis) continue;
        if (!fixed.count(grid.names[i]))
            throw ParameterError("error_surface: axis '" + grid.names[i] + "' must be fixed");
    }

    ErrorSurface surf;
    surf.xs = grid.axes[ix_axis];
    surf.ys = grid.axes[iy_axis];
    surf.z.assign(surf.xs.size() * surf.ys.size(), std::numeric_limits<double>::quiet_NaN());

    for (const auto& r : results) {
        bool match = true;
        for (std::size_t i = 0; i < grid.names.size() && match; ++i) {
            if (i == ix_axis || i == iy_axis) continue;
            match = r.params[i] == fixed.at(grid.names[i]);
        }
        if (!match) continue;
        const auto fx = std::find(surf.xs.begin(), surf.xs.end(), r.params[ix_axis]);
        const auto fy = std::find(surf.ys.begin(), surf.ys.end(), r.params[iy_axis]);
        if (fx == surf.xs.end() || fy == surf.ys.end()) continue;
        const std::size_t ix = static_cast<std::size_t>(fx - surf.xs.begin());
        const std::size_t iy = static_cast<std::size_t>(fy - surf.ys.begin());
        surf.z[iy * surf.xs.size() + ix] = r.failed ? std::numeric_limits<double>::quiet_NaN() : r.objective;
    }
    return surf;
}

} // namespace stringfx
