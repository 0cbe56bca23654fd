#pragma once

#include "wen/milp/problem.hpp"

namespace wen::milp {

/// Branch-and-bound over the binary variables of p. Depth-first plunging with
/// best-bound node selection, warm-started bounded-variable simplex per node.
/// Deterministic for a fixed problem and config (single-threaded).
Solution solve_milp(const MilpProblem& p, const SolverConfig& cfg = {});

}  // namespace wen::milp
