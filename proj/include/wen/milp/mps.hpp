#pragma once

#include <map>
#include <string>

#include "wen/milp/problem.hpp"

namespace wen::milp {

struct MpsDocument {
    std::string text;
    // sanitized -> original, only for names that had to change
    std::map<std::string, std::string> name_map;
};

/// Free-format MPS with ROWS/COLUMNS (integrality markers)/RHS/BOUNDS.
MpsDocument export_mps(const MilpProblem& p);

/// Inverse of export_mps on its own output; also accepts RANGES.
/// Throws std::runtime_error on malformed input (with the offending name).
MilpProblem parse_mps(const std::string& text);

}  // namespace wen::milp
