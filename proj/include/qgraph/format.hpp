// format.hpp — numeric formatting shared by exports and the CLI.
#pragma once

#include <iomanip>
#include <sstream>
#include <string>

namespace qgraph {

// All numeric output carries 15 significant digits so runs diff cleanly.
inline std::string fmt(double x) {
    std::ostringstream ss;
    ss << std::setprecision(15) << x;
    return ss.str();
}

}  // namespace qgraph
