#include "wen/milp/problem.hpp"

#include <algorithm>

namespace wen::milp {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::GapLimit: return "gap-limit";
        case SolveStatus::NodeLimit: return "node-limit";
        case SolveStatus::TimeLimit: return "time-limit";
    }
    return "unknown";
}

int MilpProblem::add_variable(const std::string& name, double lower, double upper, VarType type) {
    if (var_names_.count(name))
        throw std::invalid_argument("duplicate variable name: " + name);
    if (std::isnan(lower) || std::isnan(upper))
        throw std::invalid_argument("NaN bound on variable " + name);
    if (lower > upper)
        throw std::invalid_argument("lower > upper on variable " + name);
    if (type == VarType::Binary && (lower < 0.0 || upper > 1.0))
        throw std::invalid_argument("binary variable " + name + " has bounds outside [0,1]");
    int idx = static_cast<int>(variables_.size());
    variables_.push_back({name, lower, upper, type});
    var_names_.emplace(name, idx);
    return idx;
}

int MilpProblem::add_constraint(const std::string& name, std::vector<std::pair<int, double>> terms,
                                Sense sense, double rhs) {
    for (const auto& [v, c] : terms) {
        if (v < 0 || v >= num_variables())
            throw std::invalid_argument("constraint " + name + " references unknown variable");
        if (!std::isfinite(c))
            throw std::invalid_argument("constraint " + name + " has non-finite coefficient");
    }
    if (std::isnan(rhs)) throw std::invalid_argument("constraint " + name + " has NaN rhs");
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge duplicates, drop exact zeros
    std::vector<std::pair<int, double>> merged;
    merged.reserve(terms.size());
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().first == t.first)
            merged.back().second += t.second;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
    int idx = static_cast<int>(constraints_.size());
    constraints_.push_back({name, std::move(merged), sense, rhs});
    return idx;
}

void MilpProblem::set_objective_coeff(int var, double coeff) {
    if (var < 0 || var >= num_variables())
        throw std::invalid_argument("objective references unknown variable");
    if (!std::isfinite(coeff)) throw std::invalid_argument("non-finite objective coefficient");
    auto it = std::lower_bound(objective_.begin(), objective_.end(), var,
                               [](const auto& t, int v) { return t.first < v; });
    if (it != objective_.end() && it->first == var) {
        if (coeff == 0.0)
            objective_.erase(it);
        else
            it->second = coeff;
        return;
    }
    if (coeff != 0.0) objective_.insert(it, {var, coeff});
}

void MilpProblem::add_objective_coeff(int var, double coeff) {
    if (var < 0 || var >= num_variables())
        throw std::invalid_argument("objective references unknown variable");
    if (!std::isfinite(coeff)) throw std::invalid_argument("non-finite objective coefficient");
    auto it = std::lower_bound(objective_.begin(), objective_.end(), var,
                               [](const auto& t, int v) { return t.first < v; });
    if (it != objective_.end() && it->first == var) {
        it->second += coeff;
        if (it->second == 0.0) objective_.erase(it);
        return;
    }
    if (coeff != 0.0) objective_.insert(it, {var, coeff});
}

int MilpProblem::var_index(const std::string& name) const {
    auto it = var_names_.find(name);
    return it == var_names_.end() ? -1 : it->second;
}

double MilpProblem::objective_value(const std::vector<double>& x) const {
    double v = objective_constant_;
    for (const auto& [var, c] : objective_) v += c * x[static_cast<size_t>(var)];
    return v;
}

double MilpProblem::constraint_activity(const Constraint& c, const std::vector<double>& x) const {
    double a = 0.0;
    for (const auto& [var, coeff] : c.terms) a += coeff * x[static_cast<size_t>(var)];
    return a;
}

double MilpProblem::max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (int j = 0; j < num_variables(); ++j) {
        const auto& v = variables_[static_cast<size_t>(j)];
        worst = std::max(worst, v.lower - x[static_cast<size_t>(j)]);
        worst = std::max(worst, x[static_cast<size_t>(j)] - v.upper);
    }
    for (const auto& c : constraints_) {
        double a = constraint_activity(c, x);
        switch (c.sense) {
            case Sense::LessEqual: worst = std::max(worst, a - c.rhs); break;
            case Sense::GreaterEqual: worst = std::max(worst, c.rhs - a); break;
            case Sense::Equal: worst = std::max(worst, std::abs(a - c.rhs)); break;
        }
    }
    return worst;
}

bool MilpProblem::is_feasible(const std::vector<double>& x, double tol) const {
    return max_violation(x) <= tol;
}

void MilpProblem::validate() const {
    if (variables_.empty()) throw std::invalid_argument("problem has no variables");
    for (const auto& v : variables_) {
        if (v.type == VarType::Binary && (v.lower < 0.0 || v.upper > 1.0))
            throw std::invalid_argument("binary variable " + v.name + " has bounds outside [0,1]");
    }
    for (const auto& c : constraints_) {
        for (const auto& [var, coeff] : c.terms) {
            (void)coeff;
            if (var < 0 || var >= num_variables())
                throw std::invalid_argument("constraint " + c.name + " references unknown variable");
        }
    }
    for (const auto& [var, coeff] : objective_) {
        (void)coeff;
        if (var < 0 || var >= num_variables())
            throw std::invalid_argument("objective references unknown variable");
    }
}

}  // namespace wen::milp
