#pragma once

#include <cstdio>
#include <string>

namespace rwalk {

// 17 significant digits: doubles round-trip exactly through the text formats.
inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace rwalk
