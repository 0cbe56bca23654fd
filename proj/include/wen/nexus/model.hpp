#pragma once

#include <string>
#include <vector>

#include "wen/milp/problem.hpp"
#include "wen/scenario.hpp"

namespace wen::nexus {

enum class Mode { Networked, Separate };

/// Variable positions for one MWEN. Outer index is the asset (generator g,
/// storage b, tank k), inner index is the period. -1 marks a variable that
/// does not exist in the chosen mode (network exchanges in separate mode) or
/// for the asset kind (water draw of battery storages).
struct MwenVars {
    std::vector<std::vector<int>> pg, ug, vg;                       // [g][t]
    std::vector<std::vector<int>> pesc, pesd, eesc, eesd, el, wes;  // [b][t]
    std::vector<int> pgrid_imp, pgrid_exp, pn, pe, pnet;            // [t]
    std::vector<int> www, uww, wlrww, pww, pww_pump;                // [t], empty without a unit
    std::vector<int> wwt, uwt, pwt, pwt_pump;                       // [t]
    std::vector<std::vector<int>> wstc, wstd, sp, sv, wlst, pst_pump;  // [k][t]
    std::vector<int> wmain, wn, we;                                 // [t]
};

struct VariableIndex {
    Mode mode = Mode::Networked;
    int horizon = 0;
    std::vector<int> mwen_ids;     // scenario positions covered by this problem
    std::vector<MwenVars> mwens;   // parallel to mwen_ids
    std::vector<int> p_plus, p_minus;  // [t]; aggregate in networked mode, per the
                                       // single member in separate mode
};

/// Closed-form variable count for a scenario in either mode (published in
/// docs; the builders are tested against it).
long expected_variable_count(const Scenario& s, Mode mode, int only_mwen = -1);

std::pair<milp::MilpProblem, VariableIndex> build_networked(const Scenario& s);
std::pair<milp::MilpProblem, VariableIndex> build_separate(const Scenario& s, int mwen);

/// Eq. pump coupling coefficient: kW drawn to move `flow` gal/h.
double pump_power(const PumpSpec& pump, double flow);

struct MwenSchedule {
    std::string name;
    std::vector<std::vector<double>> pg, ug, vg;
    std::vector<std::vector<double>> pesc, pesd, eesc, eesd, el, wes;
    std::vector<double> pgrid_imp, pgrid_exp, pn, pe, pnet;
    std::vector<double> www, uww, wlrww, pww, pww_pump;
    std::vector<double> wwt, uwt, pwt, pwt_pump;
    std::vector<std::vector<double>> wstc, wstd, sp, sv, wlst, pst_pump;
    std::vector<double> wmain, wn, we;
};

struct Schedule {
    Mode mode = Mode::Networked;
    int horizon = 0;
    double objective = 0;
    std::vector<int> mwen_ids;
    std::vector<MwenSchedule> mwens;
    std::vector<double> p_plus, p_minus;
};

Schedule extract_schedule(const milp::Solution& sol, const VariableIndex& idx, const Scenario& s);

}  // namespace wen::nexus
