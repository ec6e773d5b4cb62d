// Small helpers shared by the report writers.
#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace geostream {

// Percentage of num/den at a fixed number of decimals, e.g. 42.7 or 29.42.
// An empty denominator has no defined percentage; callers render kEmptyPct.
inline constexpr const char* kEmptyPct = "–";  // en dash

inline std::string format_pct(std::uint64_t num, std::uint64_t den, int decimals) {
    if (den == 0) return kEmptyPct;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, 100.0 * static_cast<double>(num) /
                                                          static_cast<double>(den));
    return buf;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// Pipe-delimited row for a Markdown table.
inline std::string md_row(const std::vector<std::string>& cells) {
    std::string out = "|";
    for (const auto& c : cells) {
        out += ' ';
        out += c;
        out += " |";
    }
    out += '\n';
    return out;
}

inline std::string md_header(const std::vector<std::string>& cells) {
    std::string out = md_row(cells);
    out += "|";
    for (std::size_t i = 0; i < cells.size(); ++i) out += " --- |";
    out += '\n';
    return out;
}

}  // namespace geostream
