#pragma once

#include <string>

namespace plantnav {

// Shortest round-trip decimal form via std::to_chars; byte-stable across
// runs, locale-independent. Used for every double that lands in a CSV.
std::string format_double(double v);

}  // namespace plantnav
