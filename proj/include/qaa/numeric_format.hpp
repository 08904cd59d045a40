#pragma once

#include <string>

namespace qaa {

// Shortest decimal string that parses back to exactly the same double
// (std::to_chars). Used for every number written to CSV and audit files so
// outputs are reproducible byte for byte.
std::string format_double(double x);

}  // namespace qaa
