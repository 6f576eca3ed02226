#include "kgraph/common.hpp"

#include <cstdio>

namespace kgraph {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

} // namespace kgraph
