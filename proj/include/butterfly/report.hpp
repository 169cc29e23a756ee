#pragma once

#include <string>
#include <vector>

#include "butterfly/gaplabel.hpp"

namespace butterfly {

// JSON text for a verification run; rationals are written as "p/q".
std::string reports_to_json(const std::vector<JumpReport>& reports, bool passed);

}  // namespace butterfly
