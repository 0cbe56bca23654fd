#include "wen/milp/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "wen/milp/simplex.hpp"

namespace wen::milp {

namespace {

struct Node {
    double bound = -kInf;  // LP objective of the parent, valid lower bound
    long seq = 0;
    std::vector<std::pair<int, double>> fixings;  // (binary var, fixed value)
    std::vector<VarStatus> warm;
    int branch_var = -1;     // variable branched on to create this node
    double branch_dist = 0;  // fractional distance moved by the fixing
};

struct NodeCmp {
    bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
        if (a->bound != b->bound) return a->bound > b->bound;  // min-heap on bound
        return a->seq > b->seq;
    }
};

struct PseudoCost {
    double up_sum = 0, down_sum = 0;
    long up_n = 0, down_n = 0;
};

class BranchAndBound {
public:
    BranchAndBound(const MilpProblem& p, const SolverConfig& cfg) : p_(p), cfg_(cfg) {
        for (int j = 0; j < p.num_variables(); ++j) {
            const auto& v = p.variables()[static_cast<size_t>(j)];
            base_lo_.push_back(v.lower);
            base_hi_.push_back(v.upper);
            if (v.type == VarType::Binary) binaries_.push_back(j);
        }
        pc_.resize(static_cast<size_t>(p.num_variables()));
        obj_coeff_.assign(static_cast<size_t>(p.num_variables()), 0.0);
        for (const auto& [v, c] : p.objective()) obj_coeff_[static_cast<size_t>(v)] = c;
        start_ = std::chrono::steady_clock::now();
    }

    Solution run();

private:
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    LpResult solve_node(const Node& node) {
        std::vector<double> lo = base_lo_, hi = base_hi_;
        for (const auto& [v, val] : node.fixings) {
            lo[static_cast<size_t>(v)] = val;
            hi[static_cast<size_t>(v)] = val;
        }
        LpResult r = solve_lp_core(p_, &lo, &hi, node.warm.empty() ? nullptr : &node.warm, cfg_);
        total_iterations_ += r.iterations;
        return r;
    }

    std::vector<int> fractional(const std::vector<double>& x) const {
        std::vector<int> out;
        for (int b : binaries_) {
            double f = x[static_cast<size_t>(b)] - std::floor(x[static_cast<size_t>(b)]);
            double dist = std::min(f, 1.0 - f);
            if (dist > cfg_.integrality_tol) out.push_back(b);
        }
        return out;
    }

    int select_branch(const std::vector<int>& frac, const std::vector<double>& x) const {
        if (cfg_.branching_rule == BranchingRule::MostFractional) {
            int best = frac.front();
            double best_dist = -1;
            for (int b : frac) {
                double v = x[static_cast<size_t>(b)];
                double dist = std::min(v - std::floor(v), std::ceil(v) - v);
                if (dist > best_dist + 1e-12) {
                    best_dist = dist;
                    best = b;
                }
            }
            return best;
        }
        // pseudo-cost rule with a global-average fallback for uninitialized sides
        double gsum = 0;
        long gn = 0;
        for (const auto& pc : pc_) {
            gsum += pc.up_sum + pc.down_sum;
            gn += pc.up_n + pc.down_n;
        }
        double gavg = gn > 0 ? gsum / static_cast<double>(gn) : 1.0;
        int best = frac.front();
        double best_score = -1;
        for (int b : frac) {
            const auto& pc = pc_[static_cast<size_t>(b)];
            double f = x[static_cast<size_t>(b)] - std::floor(x[static_cast<size_t>(b)]);
            double up = pc.up_n > 0 ? pc.up_sum / static_cast<double>(pc.up_n) : gavg;
            double dn = pc.down_n > 0 ? pc.down_sum / static_cast<double>(pc.down_n) : gavg;
            double score = std::max(up * (1.0 - f), 1e-8) * std::max(dn * f, 1e-8);
            if (score > best_score + 1e-15) {
                best_score = score;
                best = b;
            }
        }
        return best;
    }

    void update_pseudo(const Node& node, double child_obj) {
        if (node.branch_var < 0 || node.branch_dist <= 1e-9) return;
        double gain = std::max(0.0, child_obj - node.bound) / node.branch_dist;
        auto& pc = pc_[static_cast<size_t>(node.branch_var)];
        if (node.fixings.back().second > 0.5) {
            pc.up_sum += gain;
            ++pc.up_n;
        } else {
            pc.down_sum += gain;
            ++pc.down_n;
        }
    }

    bool try_incumbent(const LpResult& lp) {
        if (!std::isnan(incumbent_obj_) && lp.objective >= incumbent_obj_ - 1e-12) return false;
        if (!p_.is_feasible(lp.values, cfg_.feasibility_tol * 10)) return false;
        incumbent_obj_ = lp.objective;
        incumbent_values_ = lp.values;
        if (cfg_.on_incumbent) cfg_.on_incumbent(nodes_, incumbent_obj_);
        return true;
    }

    // Fix every binary to its nearest integer and solve the remaining LP.
    // Ties at 0.5 round down so complementary pairs (x + y <= 1) survive.
    void rounding_heuristic(const LpResult& root) {
        Node fixed;
        fixed.warm = root.var_status;
        for (int b : binaries_)
            fixed.fixings.emplace_back(b, root.values[static_cast<size_t>(b)] > 0.5 ? 1.0 : 0.0);
        LpResult r = solve_node(fixed);
        if (r.status == SolveStatus::Optimal) try_incumbent(r);
    }

    // LP-guided diving: repeatedly pin the binaries the LP already set to an
    // integer, nudge the most fractional one to its nearest value, and
    // re-solve. An infeasible step is repaired once by flipping the nudged
    // variable before giving up.
    void dive_heuristic(const LpResult& root,
                        const std::vector<std::pair<int, double>>& base = {}) {
        Node node;
        node.warm = root.var_status;
        node.fixings = base;
        std::vector<char> fixed(static_cast<size_t>(p_.num_variables()), 0);
        for (const auto& [v, val] : base) fixed[static_cast<size_t>(v)] = 1;
        LpResult lp = root;
        int repairs = 0;
        for (int round = 0; round < 2000; ++round) {
            if (lp.objective >= cutoff()) return;
            std::vector<int> frac = fractional(lp.values);
            if (frac.empty()) {
                try_incumbent(lp);
                return;
            }
            size_t mark = node.fixings.size();
            for (int b : binaries_) {
                if (fixed[static_cast<size_t>(b)]) continue;
                double v = lp.values[static_cast<size_t>(b)];
                double r = std::round(v);
                if (std::abs(v - r) <= cfg_.integrality_tol) {
                    node.fixings.emplace_back(b, r);
                    fixed[static_cast<size_t>(b)] = 1;
                }
            }
            int b = select_branch(frac, lp.values);
            double near = near_value(b, lp.values[static_cast<size_t>(b)]);
            node.fixings.emplace_back(b, near);
            fixed[static_cast<size_t>(b)] = 1;
            node.warm = lp.var_status;
            LpResult next = solve_node(node);
            if (next.status != SolveStatus::Optimal) {
                if (++repairs > 60) return;
                // drop this round's pins, keep only the flipped branch variable
                for (size_t i = mark; i + 1 < node.fixings.size(); ++i)
                    fixed[static_cast<size_t>(node.fixings[i].first)] = 0;
                node.fixings.resize(mark);
                node.fixings.emplace_back(b, 1.0 - near);
                next = solve_node(node);
                if (next.status != SolveStatus::Optimal) return;
            }
            lp = std::move(next);
        }
    }

    // Preferred rounding direction for a fractional binary: costless gate
    // binaries (capacity enables) are harmless at 1 and often expensive to
    // force to 0, so they round up; cost-bearing ones round to nearest.
    double near_value(int b, double v) const {
        if (obj_coeff_[static_cast<size_t>(b)] == 0.0) return 1.0;
        return v > 0.5 ? 1.0 : 0.0;
    }

    double cutoff() const {
        if (std::isnan(incumbent_obj_)) return kInf;
        return incumbent_obj_ - std::max(1e-9, cfg_.relative_mip_gap * std::abs(incumbent_obj_));
    }

    const MilpProblem& p_;
    const SolverConfig& cfg_;
    std::vector<double> base_lo_, base_hi_;
    std::vector<int> binaries_;
    std::vector<PseudoCost> pc_;
    std::vector<double> obj_coeff_;
    double incumbent_obj_ = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> incumbent_values_;
    long nodes_ = 0;
    long total_iterations_ = 0;
    long seq_ = 0;
    std::chrono::steady_clock::time_point start_;
};

Solution BranchAndBound::run() {
    Solution out;
    p_.validate();

    Node root;
    LpResult root_lp = solve_node(root);
    if (root_lp.status != SolveStatus::Optimal) {
        out.status = root_lp.status;
        out.stats.simplex_iterations = total_iterations_;
        out.stats.wall_seconds = elapsed();
        return out;
    }

    std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeCmp> open;
    // until a first incumbent exists the search backtracks depth-first from
    // this stack instead of jumping to the best-bound node
    std::vector<std::shared_ptr<Node>> dfs;
    double plunge_bound = root_lp.objective;

    auto finish = [&](SolveStatus status, double global_bound) {
        out.status = status;
        if (!incumbent_values_.empty()) {
            out.objective = incumbent_obj_;
            out.values = incumbent_values_;
            out.stats.final_gap =
                std::isfinite(global_bound)
                    ? (incumbent_obj_ - global_bound) / std::max(1e-9, std::abs(incumbent_obj_))
                    : 0.0;
        }
        out.stats.nodes = nodes_;
        out.stats.simplex_iterations = total_iterations_;
        out.stats.wall_seconds = elapsed();
        return out;
    };

    if (fractional(root_lp.values).empty()) {
        try_incumbent(root_lp);
        return finish(SolveStatus::Optimal, root_lp.objective);
    }

    if (!binaries_.empty()) {
        rounding_heuristic(root_lp);
        dive_heuristic(root_lp);
    }

    // seed the plunge with the root's children
    {
        std::vector<int> frac = fractional(root_lp.values);
        int b = select_branch(frac, root_lp.values);
        double v = root_lp.values[static_cast<size_t>(b)];
        double near = near_value(b, v);
        auto mk = [&](double val) {
            auto n = std::make_shared<Node>();
            n->bound = root_lp.objective;
            n->seq = seq_++;
            n->warm = root_lp.var_status;
            n->branch_var = b;
            n->branch_dist = std::abs(val - v);
            n->fixings = {{b, val}};
            return n;
        };
        open.push(mk(1.0 - near));
        open.push(mk(near));
    }

    std::shared_ptr<Node> current;
    std::shared_ptr<Node> sibling;  // far child of the node being plunged, not yet filed
    bool plunging = false;
    long picked = 0;

    auto file_sibling = [&] {
        if (!sibling) return;
        if (std::isnan(incumbent_obj_))
            dfs.push_back(std::move(sibling));
        else
            open.push(std::move(sibling));
        sibling = nullptr;
    };

    while (true) {
        if (!std::isnan(incumbent_obj_) && !dfs.empty()) {
            for (auto& n : dfs) open.push(std::move(n));
            dfs.clear();
        }
        double queue_bound = open.empty() ? kInf : open.top()->bound;
        for (const auto& n : dfs) queue_bound = std::min(queue_bound, n->bound);
        if (sibling) queue_bound = std::min(queue_bound, sibling->bound);
        double global_bound = plunging ? std::min(plunge_bound, queue_bound) : queue_bound;

        if (!std::isnan(incumbent_obj_)) {
            double gap = (incumbent_obj_ - global_bound) / std::max(1e-9, std::abs(incumbent_obj_));
            if (gap <= cfg_.relative_mip_gap || global_bound >= cutoff())
                return finish(SolveStatus::Optimal, global_bound);
        } else if (!plunging && open.empty() && dfs.empty()) {
            return finish(SolveStatus::Infeasible, kInf);
        }

        if (cfg_.node_limit >= 0 && nodes_ >= cfg_.node_limit)
            return finish(SolveStatus::NodeLimit, global_bound);
        if (cfg_.time_limit_seconds >= 0 && elapsed() > cfg_.time_limit_seconds)
            return finish(SolveStatus::TimeLimit, global_bound);

        if (!plunging) {
            if (open.empty() && dfs.empty()) {
                // no incumbent and nothing open: every leaf was infeasible
                return finish(std::isnan(incumbent_obj_) ? SolveStatus::Infeasible
                                                         : SolveStatus::Optimal,
                              kInf);
            }
            if (std::isnan(incumbent_obj_) && !dfs.empty()) {
                current = std::move(dfs.back());
                dfs.pop_back();
            } else {
                current = open.top();
                open.pop();
            }
            if (current->bound >= cutoff()) continue;  // pruned while queued
            plunging = true;
        }

        plunge_bound = current->bound;
        LpResult lp = solve_node(*current);
        ++nodes_;

        if (lp.status == SolveStatus::Infeasible) {
            if (sibling) {  // back up one level to the unexplored twin
                current = std::move(sibling);
                sibling = nullptr;
            } else {
                plunging = false;
            }
            continue;
        }
        if (lp.status != SolveStatus::Optimal) {
            // LP trouble at a node; treat as a time limit rather than mislabel
            return finish(SolveStatus::TimeLimit, global_bound);
        }
        update_pseudo(*current, lp.objective);

        if (lp.objective >= cutoff()) {
            if (sibling && sibling->bound < cutoff()) {
                current = std::move(sibling);
                sibling = nullptr;
            } else {
                sibling = nullptr;
                plunging = false;
            }
            continue;
        }
        file_sibling();

        std::vector<int> frac = fractional(lp.values);
        if (frac.empty()) {
            try_incumbent(lp);
            plunging = false;
            continue;
        }

        if (!std::isnan(incumbent_obj_) && ++picked % 64 == 0)
            dive_heuristic(lp, current->fixings);

        int b = select_branch(frac, lp.values);
        double v = lp.values[static_cast<size_t>(b)];
        double near = near_value(b, v);

        auto far_child = std::make_shared<Node>();
        far_child->bound = lp.objective;
        far_child->seq = seq_++;
        far_child->warm = lp.var_status;
        far_child->fixings = current->fixings;
        far_child->fixings.emplace_back(b, 1.0 - near);
        far_child->branch_var = b;
        far_child->branch_dist = std::abs((1.0 - near) - v);
        sibling = far_child;

        auto near_child = std::make_shared<Node>();
        near_child->bound = lp.objective;
        near_child->seq = seq_++;
        near_child->warm = std::move(lp.var_status);
        near_child->fixings = std::move(current->fixings);
        near_child->fixings.emplace_back(b, near);
        near_child->branch_var = b;
        near_child->branch_dist = std::abs(near - v);
        current = near_child;  // keep plunging
    }
}

}  // namespace

Solution solve_milp(const MilpProblem& p, const SolverConfig& cfg) {
    for (const auto& v : p.variables()) {
        if (v.type != VarType::Continuous && v.type != VarType::Binary)
            throw std::invalid_argument("only continuous and binary variables are supported");
    }
    BranchAndBound bb(p, cfg);
    return bb.run();
}

}  // namespace wen::milp
