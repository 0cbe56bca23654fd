#pragma once

#include <string>
#include <vector>

#include "wen/nexus/model.hpp"
#include "wen/scenario.hpp"

namespace wen::audit {

struct Violation {
    std::string equation;  // eq04..eq36, endES, endST, endRWW
    std::string where;     // [m=..,(g|b|k)=..,t=..]
    double residual = 0;   // magnitude by which the row is broken
    double bound = 0;      // the right-hand side it was checked against
};

struct ViolationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Re-evaluates every constraint of the dispatch model directly from schedule
/// values. Deliberately does not reuse the problem builder or any solver code;
/// this is the independent second opinion.
ViolationReport check_feasibility(const Scenario& s, const nexus::Schedule& sched,
                                  double tol = 1e-6);

struct CostBreakdown {
    std::string name;
    double startup = 0;
    double no_load_generation = 0;
    double marginal_generation = 0;
    double grid_purchase = 0;
    double grid_sale = 0;      // stored negative (a credit)
    double network_power = 0;  // signed payment for P^N
    double water_no_load = 0;  // wastewater + treatment units
    double main_water = 0;
    double network_water = 0;  // signed payment for W^N
    double total = 0;
};

/// Cost of schedule member m (index into sched.mwens) priced per the scenario.
CostBreakdown mwen_cost(const Scenario& s, const nexus::Schedule& sched, int m);

struct ComparisonRow {
    std::string name;
    double baseline = 0;
    double candidate = 0;
    double percent = 0;  // (baseline - candidate) / baseline * 100
    bool percent_defined = true;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;  // one per MWEN, then TOTAL
};

/// Table of per-MWEN costs before vs after the proportional exchange pass.
ComparisonTable pea_delta_report(const std::vector<CostBreakdown>& before,
                                 const std::vector<CostBreakdown>& after);

/// Table of per-MWEN costs under separate vs networked operation.
ComparisonTable network_vs_separate_report(const std::vector<CostBreakdown>& separate,
                                           const std::vector<CostBreakdown>& networked);

/// CSV with header name,baseline,candidate,percent; undefined percents print n/a.
std::string to_csv(const ComparisonTable& table);

}  // namespace wen::audit
