#pragma once

// Minimal CSV helpers. Doubles are printed with the shortest round-trip
// representation so output is byte-stable and lossless.

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace hrec {

inline std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Joins already formatted fields with commas (fields never contain commas
/// here, so no quoting is needed).
inline std::string csv_line(const std::vector<std::string>& fields)
{
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += fields[i];
    }
    line += '\n';
    return line;
}

}  // namespace hrec
