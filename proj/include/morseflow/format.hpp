#pragma once

#include "morseflow/signal.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

namespace morseflow {

/// x printed with 12 significant digits; -0 prints as 0.
inline std::string fmt(double x)
{
    if (x == 0.0) {
        return "0";
    }
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

/// x rounded to 12 significant digits.
inline double round12(double x)
{
    if (x == 0.0 || !std::isfinite(x)) {
        return x == 0.0 ? 0.0 : x;
    }
    return std::strtod(fmt(x).c_str(), nullptr);
}

inline std::string describe(const SymbolicSignal& s)
{
    std::ostringstream os;
    os << to_string(s.extension()) << "[";
    for (std::size_t i = 0; i < s.word().size(); ++i) {
        os << (i ? "," : "") << s.word()[i];
    }
    os << "] tau=" << fmt(s.tau()) << " anchor=" << s.anchor();
    return os.str();
}

} // namespace morseflow
