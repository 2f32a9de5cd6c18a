#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "stringfx/csv.hpp"
#include "stringfx/errors.hpp"

namespace stringfx {

enum class Side { None, Long, Short };

inline const char* to_string(Side s) {
    switch (s) {
    case Side::Long: return "long";
    case Side::Short: return "short";
    default: return "none";
    }
}

inline Side side_from_string(const std::string& s) {
    if (s == "long") return Side::Long;
    if (s == "short") return Side::Short;
    if (s == "none") return Side::None;
    throw ParseError("unknown direction: " + s);
}

// Gate diagnostics attached to every emitted signal.
struct SignalDiagnostics {
    double dkl_long = std::numeric_limits<double>::quiet_NaN();
    double dkl_short = std::numeric_limits<double>::quiet_NaN();
    double odds = std::numeric_limits<double>::quiet_NaN(); // smoothed profit/loss ratio at the matched bin
    bool gate_long = false;
    bool gate_short = false;
    std::string note;
};

struct Signal {
    std::size_t index = 0; // tick index the signal is aligned to
    Side direction = Side::None;
    double momentum = std::numeric_limits<double>::quiet_NaN();
    int bin = -1;
    SignalDiagnostics reason;
};

// The dkl column carries the divergence of the signal's direction, or the
// larger of the two when no direction was chosen.
inline std::string to_csv(const std::vector<Signal>& signals) {
    std::string out = "index,M,direction,bin,dkl\n";
    for (const auto& s : signals) {
        double dkl = s.reason.dkl_long;
        if (s.direction == Side::Short)
            dkl = s.reason.dkl_short;
        else if (s.direction == Side::None && !(s.reason.dkl_long >= s.reason.dkl_short))
            dkl = s.reason.dkl_short;
        out += std::to_string(s.index);
        out += ',';
        out += csv::format_double(s.momentum);
        out += ',';
        out += to_string(s.direction);
        out += ',';
        out += std::to_string(s.bin);
        out += ',';
        out += csv::format_double(dkl);
        out += '\n';
    }
    return out;
}

inline std::vector<Signal> parse_signals_csv(std::string_view text) {
    std::vector<Signal> out;
    bool first_data_line = true;
    csv::for_each_line(text, [&](std::size_t lineno, std::string_view line) {
        auto fields = csv::split_line(line);
        if (first_data_line) {
            first_data_line = false;
            double probe;
            if (!csv::parse_double(fields[0], probe)) return; // header
        }
        if (fields.size() != 5)
            throw ParseError("signals line " + std::to_string(lineno) + ": expected 5 fields");
        Signal s;
        long long idx, bin;
        double dkl;
        if (!csv::parse_int64(fields[0], idx) || !csv::parse_double(fields[1], s.momentum) ||
            !csv::parse_int64(fields[3], bin) || !csv::parse_double(fields[4], dkl))
            throw ParseError("signals line " + std::to_string(lineno) + ": malformed record");
        s.index = static_cast<std::size_t>(idx);
        s.direction = side_from_string(std::string(csv::trim(fields[2])));
        s.bin = static_cast<int>(bin);
        s.reason.dkl_long = dkl;
        s.reason.dkl_short = dkl;
        out.push_back(s);
    });
    return out;
}

} // namespace stringfx
