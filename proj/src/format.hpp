#pragma once

#include <cstdio>
#include <string>

namespace fdiq {

// 17 significant digits, scientific.
inline std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

} // namespace fdiq
