#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wen::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarType { Continuous, Binary };

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    VarType type = VarType::Continuous;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

/// One linear row: sum of terms (var index, coefficient) {<=,=,>=} rhs.
/// Terms are kept sorted by variable index with duplicates merged.
struct Constraint {
    std::string name;
    std::vector<std::pair<int, double>> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, GapLimit, NodeLimit, TimeLimit };

std::string to_string(SolveStatus s);

struct SolveStats {
    long nodes = 0;
    long simplex_iterations = 0;
    double wall_seconds = 0.0;
    double final_gap = 0.0;
};

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> values;
    SolveStats stats;
};

enum class BranchingRule { MostFractional, PseudoCost };

struct SolverConfig {
    double feasibility_tol = 1e-7;
    double integrality_tol = 1e-6;
    double relative_mip_gap = 1e-4;
    long node_limit = -1;            // < 0: unlimited
    double time_limit_seconds = -1;  // < 0: unlimited
    BranchingRule branching_rule = BranchingRule::MostFractional;
    // Test/diagnostic hook, called whenever a new incumbent is accepted.
    std::function<void(long node, double incumbent_objective)> on_incumbent;
};

/// Minimization MILP with bounded continuous and binary variables.
class MilpProblem {
public:
    std::string name = "model";

    int add_variable(const std::string& name, double lower, double upper,
                     VarType type = VarType::Continuous);
    int add_constraint(const std::string& name, std::vector<std::pair<int, double>> terms,
                       Sense sense, double rhs);
    void set_objective_coeff(int var, double coeff);
    void add_objective_coeff(int var, double coeff);
    void set_objective_constant(double c) { objective_constant_ = c; }

    int var_index(const std::string& name) const;  // -1 if absent
    const std::vector<Variable>& variables() const { return variables_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const std::vector<std::pair<int, double>>& objective() const { return objective_; }
    double objective_constant() const { return objective_constant_; }

    int num_variables() const { return static_cast<int>(variables_.size()); }
    int num_constraints() const { return static_cast<int>(constraints_.size()); }

    double objective_value(const std::vector<double>& x) const;
    double constraint_activity(const Constraint& c, const std::vector<double>& x) const;

    /// Largest violation of any row or bound at x (0 when feasible).
    double max_violation(const std::vector<double>& x) const;
    bool is_feasible(const std::vector<double>& x, double tol) const;

    /// Throws std::invalid_argument on a broken structural invariant.
    void validate() const;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    std::vector<std::pair<int, double>> objective_;
    double objective_constant_ = 0.0;
    std::unordered_map<std::string, int> var_names_;
};

}  // namespace wen::milp
