#pragma once

// CSV dialect shared by every data file: comma separator, '.' decimal point,
// LF newlines, '#'-prefixed comment lines before the header row. Numbers are
// written in shortest round-trip form so output is byte-stable across runs.

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <string_view>

namespace catqed::csv {

inline std::string number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline void comment(std::ostream& out, std::string_view text) {
    out << "# " << text << '\n';
}

}  // namespace catqed::csv
