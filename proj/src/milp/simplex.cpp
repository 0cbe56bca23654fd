#include "wen/milp/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace wen::milp {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDualTol = 1e-8;
constexpr double kDegenerateStep = 1e-11;
constexpr int kRefactorInterval = 64;
constexpr int kBlandTrigger = 400;  // consecutive degenerate pivots before Bland's rule

struct Eta {
    int pos;                                  // basis position of the pivot
    double pivot;                             // d[pos]
    std::vector<std::pair<int, double>> off;  // nonzeros of d excluding pos
};

// Bounded-variable primal simplex over the equality system A x + s = b.
class SimplexEngine {
public:
    SimplexEngine(const MilpProblem& p, const std::vector<double>* lower,
                  const std::vector<double>* upper, const SolverConfig& cfg)
        : cfg_(cfg) {
        n_ = p.num_variables();
        m_ = p.num_constraints();
        ntot_ = n_ + m_;
        build(p, lower, upper);
    }

    LpResult run(const std::vector<VarStatus>* warm);

private:
    void build(const MilpProblem& p, const std::vector<double>* lower,
               const std::vector<double>* upper);
    void compute_scaling(const MilpProblem& p);
    void install_basis(const std::vector<VarStatus>* warm);
    bool factorize();
    void compute_basic_values();
    void ftran(Eigen::VectorXd& v) const;
    void btran(Eigen::VectorXd& v);
    double infeasibility() const;
    double col_dot(int j, const Eigen::VectorXd& y) const;
    void column_dense(int j, Eigen::VectorXd& out) const;

    const SolverConfig& cfg_;
    int n_ = 0, m_ = 0, ntot_ = 0;

    // column storage (scaled), slacks appended
    std::vector<int> colptr_;
    std::vector<int> rowind_;
    std::vector<double> vals_;
    std::vector<double> lb_, ub_, cost_;
    std::vector<double> rhs_;
    std::vector<double> rowscale_, colscale_;

    std::vector<double> x_;
    std::vector<VarStatus> status_;
    std::vector<int> basis_;      // variable at each basis position
    std::vector<int> basic_pos_;  // position of a basic variable, -1 otherwise

    Eigen::SparseMatrix<double> bmat_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    std::vector<Eta> etas_;
    long iterations_ = 0;
};

void SimplexEngine::build(const MilpProblem& p, const std::vector<double>* lower,
                          const std::vector<double>* upper) {
    lb_.assign(static_cast<size_t>(ntot_), 0.0);
    ub_.assign(static_cast<size_t>(ntot_), kInf);
    cost_.assign(static_cast<size_t>(ntot_), 0.0);

    compute_scaling(p);

    colptr_.assign(static_cast<size_t>(ntot_) + 1, 0);
    // structural columns: gather from rows
    std::vector<std::vector<std::pair<int, double>>> cols(static_cast<size_t>(n_));
    const auto& cons = p.constraints();
    for (int r = 0; r < m_; ++r) {
        for (const auto& [v, c] : cons[static_cast<size_t>(r)].terms)
            cols[static_cast<size_t>(v)].push_back(
                {r, c * rowscale_[static_cast<size_t>(r)] * colscale_[static_cast<size_t>(v)]});
    }
    for (int j = 0; j < n_; ++j) {
        colptr_[static_cast<size_t>(j) + 1] =
            colptr_[static_cast<size_t>(j)] + static_cast<int>(cols[static_cast<size_t>(j)].size());
        for (const auto& [r, c] : cols[static_cast<size_t>(j)]) {
            rowind_.push_back(r);
            vals_.push_back(c);
        }
    }
    for (int r = 0; r < m_; ++r) {
        int j = n_ + r;
        colptr_[static_cast<size_t>(j) + 1] = colptr_[static_cast<size_t>(j)] + 1;
        rowind_.push_back(r);
        vals_.push_back(rowscale_[static_cast<size_t>(r)]);
    }

    for (int j = 0; j < n_; ++j) {
        const auto& v = p.variables()[static_cast<size_t>(j)];
        double lo = lower ? (*lower)[static_cast<size_t>(j)] : v.lower;
        double hi = upper ? (*upper)[static_cast<size_t>(j)] : v.upper;
        lb_[static_cast<size_t>(j)] = lo / colscale_[static_cast<size_t>(j)];
        ub_[static_cast<size_t>(j)] = hi / colscale_[static_cast<size_t>(j)];
    }
    for (const auto& [v, c] : p.objective())
        cost_[static_cast<size_t>(v)] = c * colscale_[static_cast<size_t>(v)];

    rhs_.assign(static_cast<size_t>(m_), 0.0);
    for (int r = 0; r < m_; ++r) {
        const auto& c = cons[static_cast<size_t>(r)];
        rhs_[static_cast<size_t>(r)] = c.rhs * rowscale_[static_cast<size_t>(r)];
        int s = n_ + r;
        switch (c.sense) {
            case Sense::LessEqual:
                lb_[static_cast<size_t>(s)] = 0.0;
                ub_[static_cast<size_t>(s)] = kInf;
                break;
            case Sense::GreaterEqual:
                lb_[static_cast<size_t>(s)] = -kInf;
                ub_[static_cast<size_t>(s)] = 0.0;
                break;
            case Sense::Equal:
                lb_[static_cast<size_t>(s)] = 0.0;
                ub_[static_cast<size_t>(s)] = 0.0;
                break;
        }
    }
}

void SimplexEngine::compute_scaling(const MilpProblem& p) {
    rowscale_.assign(static_cast<size_t>(m_), 1.0);
    colscale_.assign(static_cast<size_t>(ntot_), 1.0);
    const auto& cons = p.constraints();
    for (int pass = 0; pass < 2; ++pass) {
        // rows
        for (int r = 0; r < m_; ++r) {
            double lo = kInf, hi = 0.0;
            for (const auto& [v, c] : cons[static_cast<size_t>(r)].terms) {
                double a = std::abs(c) * colscale_[static_cast<size_t>(v)];
                if (a > 0) {
                    lo = std::min(lo, a);
                    hi = std::max(hi, a);
                }
            }
            if (hi > 0) {
                double s = 1.0 / std::sqrt(lo * hi);
                rowscale_[static_cast<size_t>(r)] = std::exp2(std::round(std::log2(s)));
            }
        }
        // columns (structural only)
        std::vector<double> lo(static_cast<size_t>(n_), kInf), hi(static_cast<size_t>(n_), 0.0);
        for (int r = 0; r < m_; ++r) {
            for (const auto& [v, c] : cons[static_cast<size_t>(r)].terms) {
                double a = std::abs(c) * rowscale_[static_cast<size_t>(r)];
                if (a > 0) {
                    lo[static_cast<size_t>(v)] = std::min(lo[static_cast<size_t>(v)], a);
                    hi[static_cast<size_t>(v)] = std::max(hi[static_cast<size_t>(v)], a);
                }
            }
        }
        for (int j = 0; j < n_; ++j) {
            if (hi[static_cast<size_t>(j)] > 0) {
                double s = 1.0 / std::sqrt(lo[static_cast<size_t>(j)] * hi[static_cast<size_t>(j)]);
                colscale_[static_cast<size_t>(j)] = std::exp2(std::round(std::log2(s)));
            }
        }
    }
}

void SimplexEngine::install_basis(const std::vector<VarStatus>* warm) {
    status_.assign(static_cast<size_t>(ntot_), VarStatus::AtLower);
    basis_.clear();
    bool warm_ok = false;
    if (warm && static_cast<int>(warm->size()) == ntot_) {
        int nb = 0;
        for (auto s : *warm)
            if (s == VarStatus::Basic) ++nb;
        if (nb == m_) {
            status_ = *warm;
            warm_ok = true;
        }
    }
    if (!warm_ok) {
        for (int r = 0; r < m_; ++r) status_[static_cast<size_t>(n_ + r)] = VarStatus::Basic;
    }
    basic_pos_.assign(static_cast<size_t>(ntot_), -1);
    for (int j = 0; j < ntot_; ++j) {
        if (status_[static_cast<size_t>(j)] == VarStatus::Basic) {
            basic_pos_[static_cast<size_t>(j)] = static_cast<int>(basis_.size());
            basis_.push_back(j);
        } else {
            // snap nonbasic status to an existing finite bound
            bool lo = std::isfinite(lb_[static_cast<size_t>(j)]);
            bool hi = std::isfinite(ub_[static_cast<size_t>(j)]);
            if (status_[static_cast<size_t>(j)] == VarStatus::AtUpper && hi) continue;
            if (lo)
                status_[static_cast<size_t>(j)] = VarStatus::AtLower;
            else if (hi)
                status_[static_cast<size_t>(j)] = VarStatus::AtUpper;
            else
                status_[static_cast<size_t>(j)] = VarStatus::FreeNonbasic;
        }
    }
}

bool SimplexEngine::factorize() {
    etas_.clear();
    if (m_ == 0) return true;
    std::vector<Eigen::Triplet<double>> trips;
    for (int pos = 0; pos < m_; ++pos) {
        int j = basis_[static_cast<size_t>(pos)];
        for (int k = colptr_[static_cast<size_t>(j)]; k < colptr_[static_cast<size_t>(j) + 1]; ++k)
            trips.emplace_back(rowind_[static_cast<size_t>(k)], pos, vals_[static_cast<size_t>(k)]);
    }
    bmat_.resize(m_, m_);
    bmat_.setFromTriplets(trips.begin(), trips.end());
    lu_.compute(bmat_);
    etas_.clear();
    return lu_.info() == Eigen::Success;
}

void SimplexEngine::compute_basic_values() {
    x_.assign(static_cast<size_t>(ntot_), 0.0);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) r[i] = rhs_[static_cast<size_t>(i)];
    for (int j = 0; j < ntot_; ++j) {
        VarStatus s = status_[static_cast<size_t>(j)];
        if (s == VarStatus::Basic) continue;
        double v = 0.0;
        if (s == VarStatus::AtLower)
            v = lb_[static_cast<size_t>(j)];
        else if (s == VarStatus::AtUpper)
            v = ub_[static_cast<size_t>(j)];
        x_[static_cast<size_t>(j)] = v;
        if (v != 0.0) {
            for (int k = colptr_[static_cast<size_t>(j)]; k < colptr_[static_cast<size_t>(j) + 1];
                 ++k)
                r[rowind_[static_cast<size_t>(k)]] -= vals_[static_cast<size_t>(k)] * v;
        }
    }
    ftran(r);
    for (int pos = 0; pos < m_; ++pos) x_[static_cast<size_t>(basis_[static_cast<size_t>(pos)])] = r[pos];
}

void SimplexEngine::ftran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    v = lu_.solve(v).eval();
    for (const auto& e : etas_) {
        double piv = v[e.pos] / e.pivot;
        v[e.pos] = piv;
        if (piv != 0.0)
            for (const auto& [i, d] : e.off) v[i] -= d * piv;
    }
}

void SimplexEngine::btran(Eigen::VectorXd& v) {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double acc = v[it->pos];
        for (const auto& [i, d] : it->off) acc -= d * v[i];
        v[it->pos] = acc / it->pivot;
    }
    v = lu_.transpose().solve(v).eval();
}

double SimplexEngine::infeasibility() const {
    double worst = 0.0;
    for (int pos = 0; pos < m_; ++pos) {
        int j = basis_[static_cast<size_t>(pos)];
        worst = std::max(worst, lb_[static_cast<size_t>(j)] - x_[static_cast<size_t>(j)]);
        worst = std::max(worst, x_[static_cast<size_t>(j)] - ub_[static_cast<size_t>(j)]);
    }
    return worst;
}

double SimplexEngine::col_dot(int j, const Eigen::VectorXd& y) const {
    double acc = 0.0;
    for (int k = colptr_[static_cast<size_t>(j)]; k < colptr_[static_cast<size_t>(j) + 1]; ++k)
        acc += vals_[static_cast<size_t>(k)] * y[rowind_[static_cast<size_t>(k)]];
    return acc;
}

void SimplexEngine::column_dense(int j, Eigen::VectorXd& out) const {
    out.setZero();
    for (int k = colptr_[static_cast<size_t>(j)]; k < colptr_[static_cast<size_t>(j) + 1]; ++k)
        out[rowind_[static_cast<size_t>(k)]] = vals_[static_cast<size_t>(k)];
}

LpResult SimplexEngine::run(const std::vector<VarStatus>* warm) {
    LpResult res;
    const double feastol = cfg_.feasibility_tol;

    for (int j = 0; j < ntot_; ++j) {
        if (lb_[static_cast<size_t>(j)] > ub_[static_cast<size_t>(j)] + feastol) {
            res.status = SolveStatus::Infeasible;
            return res;
        }
        // collapse numerically-equal bounds
        if (lb_[static_cast<size_t>(j)] > ub_[static_cast<size_t>(j)])
            lb_[static_cast<size_t>(j)] = ub_[static_cast<size_t>(j)];
    }

    install_basis(warm);
    if (!factorize()) {
        install_basis(nullptr);  // fall back to the slack basis
        if (!factorize()) {
            res.status = SolveStatus::Infeasible;
            return res;
        }
    }
    compute_basic_values();

    int phase = infeasibility() > feastol ? 1 : 2;
    bool bland = false;
    int degenerate_streak = 0;
    const long iter_limit = 20000L + 500L * static_cast<long>(m_ + n_);

    Eigen::VectorXd y(m_), d(m_);
    std::vector<double> pcost(static_cast<size_t>(ntot_));

    while (true) {
        if (iterations_ >= iter_limit) {
            res.status = SolveStatus::TimeLimit;
            res.iterations = iterations_;
            return res;
        }

        // cost vector for the current phase
        if (phase == 1) {
            std::fill(pcost.begin(), pcost.end(), 0.0);
            for (int pos = 0; pos < m_; ++pos) {
                int j = basis_[static_cast<size_t>(pos)];
                if (x_[static_cast<size_t>(j)] < lb_[static_cast<size_t>(j)] - feastol)
                    pcost[static_cast<size_t>(j)] = -1.0;
                else if (x_[static_cast<size_t>(j)] > ub_[static_cast<size_t>(j)] + feastol)
                    pcost[static_cast<size_t>(j)] = 1.0;
            }
        }
        const std::vector<double>& c = phase == 1 ? pcost : cost_;

        for (int pos = 0; pos < m_; ++pos) y[pos] = c[static_cast<size_t>(basis_[static_cast<size_t>(pos)])];
        btran(y);

        // pricing
        int enter = -1;
        int dir = 0;
        double best = kDualTol;
        for (int j = 0; j < ntot_; ++j) {
            VarStatus s = status_[static_cast<size_t>(j)];
            if (s == VarStatus::Basic) continue;
            if (lb_[static_cast<size_t>(j)] == ub_[static_cast<size_t>(j)]) continue;  // fixed
            double red = c[static_cast<size_t>(j)] - col_dot(j, y);
            int cand_dir = 0;
            if (s == VarStatus::AtLower && red < -kDualTol)
                cand_dir = +1;
            else if (s == VarStatus::AtUpper && red > kDualTol)
                cand_dir = -1;
            else if (s == VarStatus::FreeNonbasic && std::abs(red) > kDualTol)
                cand_dir = red < 0 ? +1 : -1;
            if (cand_dir == 0) continue;
            if (bland) {
                enter = j;
                dir = cand_dir;
                break;
            }
            if (std::abs(red) > best) {
                best = std::abs(red);
                enter = j;
                dir = cand_dir;
            }
        }

        if (enter < 0) {
            if (phase == 1) {
                if (infeasibility() <= feastol) {
                    phase = 2;
                    continue;
                }
                res.status = SolveStatus::Infeasible;
                res.iterations = iterations_;
                return res;
            }
            // re-price from a fresh factorization before declaring optimality
            if (!etas_.empty()) {
                factorize();
                compute_basic_values();
                continue;
            }
            if (infeasibility() > feastol) {
                phase = 1;
                continue;
            }
            break;  // optimal
        }

        column_dense(enter, d);
        ftran(d);

        // ratio test: entering moves by theta*dir, basic position i moves by -dir*d[i]
        double theta = kInf;
        int block_pos = -1;     // basis position of blocker, -1 for a bound flip
        int block_bound = 0;    // -1 lower, +1 upper
        double block_piv = 0.0;
        double own_range = ub_[static_cast<size_t>(enter)] - lb_[static_cast<size_t>(enter)];
        if (std::isfinite(own_range)) theta = own_range;

        for (int pos = 0; pos < m_; ++pos) {
            double piv = d[pos];
            if (std::abs(piv) < kPivotTol) continue;
            int k = basis_[static_cast<size_t>(pos)];
            double g = -dir * piv;  // dx_k per unit theta
            double xk = x_[static_cast<size_t>(k)];
            double lk = lb_[static_cast<size_t>(k)], uk = ub_[static_cast<size_t>(k)];
            double lim = kInf;
            int hit = 0;
            if (phase == 1 && xk < lk - feastol) {
                if (g > 0) {
                    lim = (lk - xk) / g;  // stop where it becomes feasible
                    hit = -1;
                }
            } else if (phase == 1 && xk > uk + feastol) {
                if (g < 0) {
                    lim = (xk - uk) / (-g);
                    hit = +1;
                }
            } else {
                if (g > 0 && std::isfinite(uk)) {
                    lim = (uk - xk) / g;
                    hit = +1;
                } else if (g < 0 && std::isfinite(lk)) {
                    lim = (xk - lk) / (-g);
                    hit = -1;
                }
            }
            if (hit == 0) continue;
            if (lim < 0) lim = 0;
            bool better = lim < theta - 1e-12;
            bool tie = std::abs(lim - theta) <= 1e-12;
            if (better || (tie && block_pos >= 0 && std::abs(piv) > std::abs(block_piv)) ||
                (tie && block_pos < 0)) {
                if (bland && tie && block_pos >= 0 &&
                    basis_[static_cast<size_t>(block_pos)] < k)
                    continue;  // Bland: keep lowest-index leaving on ties
                theta = lim;
                block_pos = pos;
                block_bound = hit;
                block_piv = piv;
            }
        }

        if (!std::isfinite(theta)) {
            res.status = phase == 1 ? SolveStatus::Infeasible : SolveStatus::Unbounded;
            res.iterations = iterations_;
            return res;
        }

        // apply the step
        x_[static_cast<size_t>(enter)] += dir * theta;
        if (theta != 0.0) {
            for (int pos = 0; pos < m_; ++pos) {
                if (d[pos] != 0.0)
                    x_[static_cast<size_t>(basis_[static_cast<size_t>(pos)])] -= dir * theta * d[pos];
            }
        }

        ++iterations_;
        if (theta <= kDegenerateStep) {
            if (++degenerate_streak >= kBlandTrigger) bland = true;
        } else {
            degenerate_streak = 0;
            bland = false;
        }

        if (block_pos < 0) {
            // bound flip
            status_[static_cast<size_t>(enter)] =
                status_[static_cast<size_t>(enter)] == VarStatus::AtLower ? VarStatus::AtUpper
                                                                          : VarStatus::AtLower;
            x_[static_cast<size_t>(enter)] = status_[static_cast<size_t>(enter)] == VarStatus::AtLower
                                                 ? lb_[static_cast<size_t>(enter)]
                                                 : ub_[static_cast<size_t>(enter)];
            continue;
        }

        int leave = basis_[static_cast<size_t>(block_pos)];
        status_[static_cast<size_t>(leave)] = block_bound < 0 ? VarStatus::AtLower : VarStatus::AtUpper;
        x_[static_cast<size_t>(leave)] = block_bound < 0 ? lb_[static_cast<size_t>(leave)]
                                                         : ub_[static_cast<size_t>(leave)];
        basic_pos_[static_cast<size_t>(leave)] = -1;
        basis_[static_cast<size_t>(block_pos)] = enter;
        basic_pos_[static_cast<size_t>(enter)] = block_pos;
        status_[static_cast<size_t>(enter)] = VarStatus::Basic;

        Eta e;
        e.pos = block_pos;
        e.pivot = d[block_pos];
        for (int pos = 0; pos < m_; ++pos)
            if (pos != block_pos && d[pos] != 0.0) e.off.emplace_back(pos, d[pos]);
        double pivot_mag = std::abs(e.pivot);
        etas_.push_back(std::move(e));

        if (static_cast<int>(etas_.size()) >= kRefactorInterval || pivot_mag < 1e-7) {
            if (!factorize()) {
                install_basis(nullptr);
                factorize();
            }
            compute_basic_values();
            if (phase == 2 && infeasibility() > feastol) phase = 1;
        }
    }

    res.status = SolveStatus::Optimal;
    res.iterations = iterations_;
    res.var_status = status_;
    res.values.resize(static_cast<size_t>(n_));
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) {
        double v = x_[static_cast<size_t>(j)] * colscale_[static_cast<size_t>(j)];
        res.values[static_cast<size_t>(j)] = v;
        obj += v * (cost_[static_cast<size_t>(j)] / colscale_[static_cast<size_t>(j)]);
    }
    res.objective = obj;
    return res;
}

}  // namespace

LpResult solve_lp_core(const MilpProblem& p, const std::vector<double>* lower,
                       const std::vector<double>* upper,
                       const std::vector<VarStatus>* warm_start, const SolverConfig& cfg) {
    if (p.num_variables() == 0) throw std::invalid_argument("LP has no variables");
    SimplexEngine engine(p, lower, upper, cfg);
    LpResult r = engine.run(warm_start);
    if (r.status == SolveStatus::Optimal) r.objective += p.objective_constant();
    return r;
}

Solution solve_lp(const MilpProblem& p, const SolverConfig& cfg) {
    LpResult r = solve_lp_core(p, nullptr, nullptr, nullptr, cfg);
    Solution s;
    s.status = r.status;
    s.objective = r.objective;
    s.values = std::move(r.values);
    s.stats.simplex_iterations = r.iterations;
    return s;
}

}  // namespace wen::milp
