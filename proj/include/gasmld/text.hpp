#pragma once

#include <string>

namespace gasmld {

// Shortest decimal form that parses back to the same double; keeps CSV and
// JSON output deterministic across runs and platforms.
std::string format_double(double v);

}  // namespace gasmld
