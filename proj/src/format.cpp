#include "timepref/format.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace timepref {

std::string format_real(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("format_real: non-finite value");
    if (x == 0.0 && std::signbit(x)) return "-0.0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string format_real_list(const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += format_real(xs[i]);
    }
    s += ']';
    return s;
}

}  // namespace timepref
