#pragma once

#include <cstdint>
#include <vector>

#include "wen/milp/problem.hpp"

namespace wen::milp {

/// Nonbasic/basic state per variable (structurals first, then one slack per row).
enum class VarStatus : std::uint8_t { AtLower = 0, AtUpper = 1, Basic = 2, FreeNonbasic = 3 };

struct LpResult {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> values;           // structural variables only
    std::vector<VarStatus> var_status;    // size n + m, reusable as a warm start
    long iterations = 0;
};

/// Solves the LP relaxation of p (integrality ignored) with optional
/// per-variable bound overrides and an optional warm-start basis.
/// lower/upper, when non-null, must have one entry per structural variable.
LpResult solve_lp_core(const MilpProblem& p, const std::vector<double>* lower,
                       const std::vector<double>* upper,
                       const std::vector<VarStatus>* warm_start, const SolverConfig& cfg);

/// LP relaxation solve per the public solver contract.
Solution solve_lp(const MilpProblem& p, const SolverConfig& cfg = {});

}  // namespace wen::milp
