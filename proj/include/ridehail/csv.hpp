#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace ridehail::csv {

// Fixed decimal formatting so rerunning a sweep writes byte-identical files.
// Six decimals, trailing zeros trimmed, at least one decimal kept
// (45 -> "45.0", 100.0/3 -> "33.333333").
inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string s(buf);
    auto dot = s.find('.');
    auto last = s.find_last_not_of('0');
    s.erase(last == dot ? dot + 2 : last + 1);
    return s;
}

inline std::string fmt_int(std::int64_t v) { return std::to_string(v); }

// Commas inside free-text fields (error messages in status columns) would
// break the row structure; flatten them.
inline std::string sanitize_field(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

}  // namespace ridehail::csv
