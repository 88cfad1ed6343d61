#include "uppex/extreal.hpp"

#include <cstdio>

namespace uppex {

std::string to_text(ExtReal v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v.raw());
    return buf;
}

} // namespace uppex
