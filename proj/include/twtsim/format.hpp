#pragma once

#include <string>

namespace twtsim {

/// Shortest decimal text that round-trips the double. Used for every CSV and
/// JSON number so artifacts are byte-stable across runs.
std::string fmt_real(double v);

}  // namespace twtsim
