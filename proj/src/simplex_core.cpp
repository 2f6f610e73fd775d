#include "simplex_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "tfacpp/errors.hpp"

namespace tfacpp::detail {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kZeroTol = 1e-11;
constexpr int kRefactorEvery = 64;
constexpr int kStallLimit = 600;  // consecutive degenerate pivots before Bland

enum class VStat : unsigned char { Basic, AtLower, AtUpper, FreeZero };

// Column kinds by index range: [0, n_struct) structural, [n_struct,
// n_struct+m) logicals, >= n_struct+m artificials (synthesized unit columns).
struct Tableau {
    int m;
    int n_struct;
    int n_logical_end;  // n_struct + m
    const LpCore* core = nullptr;
    const std::vector<double>* col = nullptr;  // structural dense columns

    std::vector<double> lb, ub;        // per column, artificials appended
    std::vector<double> cost;          // phase-dependent
    std::vector<int> art_row;          // artificial -> row
    std::vector<double> art_sign;      // artificial -> +-1

    std::vector<VStat> stat;
    std::vector<int> basis;            // row -> column
    std::vector<double> xb;            // basic values, per row
    std::vector<double> xn_value;      // value of each column when nonbasic
    std::vector<double> binv;          // m x m row-major
    std::vector<double> rhs;

    int total() const { return static_cast<int>(lb.size()); }

    // out += column j (dense m-vector accumulate with coefficient factor)
    void axpy_col(int j, double factor, std::vector<double>& out) const {
        if (j < n_struct) {
            const double* c = col->data() + static_cast<size_t>(j) * m;
            for (int i = 0; i < m; ++i) out[i] += factor * c[i];
        } else if (j < n_logical_end) {
            out[j - n_struct] += factor;
        } else {
            int a = j - n_logical_end;
            out[art_row[a]] += factor * art_sign[a];
        }
    }

    double col_entry(int j, int i) const {
        if (j < n_struct) return (*col)[static_cast<size_t>(j) * m + i];
        if (j < n_logical_end) return (j - n_struct == i) ? 1.0 : 0.0;
        int a = j - n_logical_end;
        return (art_row[a] == i) ? art_sign[a] : 0.0;
    }

    double nonbasic_value(int j) const {
        switch (stat[j]) {
            case VStat::AtLower: return lb[j];
            case VStat::AtUpper: return ub[j];
            default: return 0.0;
        }
    }
};

void refactorize(Tableau& t) {
    const int m = t.m;
    // Gauss-Jordan inversion of the basis matrix with partial pivoting.
    std::vector<double> B(static_cast<size_t>(m) * m, 0.0);
    for (int k = 0; k < m; ++k) {
        std::vector<double> colv(m, 0.0);
        t.axpy_col(t.basis[k], 1.0, colv);
        for (int i = 0; i < m; ++i) B[static_cast<size_t>(i) * m + k] = colv[i];
    }
    std::vector<double>& inv = t.binv;
    inv.assign(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) inv[static_cast<size_t>(i) * m + i] = 1.0;
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    for (int k = 0; k < m; ++k) {
        int piv = k;
        double best = std::abs(B[static_cast<size_t>(k) * m + k]);
        for (int i = k + 1; i < m; ++i) {
            double v = std::abs(B[static_cast<size_t>(i) * m + k]);
            if (v > best) { best = v; piv = i; }
        }
        if (best < 1e-12) throw SolveError("singular basis during refactorization");
        if (piv != k) {
            for (int j = 0; j < m; ++j) {
                std::swap(B[static_cast<size_t>(piv) * m + j], B[static_cast<size_t>(k) * m + j]);
                std::swap(inv[static_cast<size_t>(piv) * m + j], inv[static_cast<size_t>(k) * m + j]);
            }
        }
        double d = B[static_cast<size_t>(k) * m + k];
        for (int j = 0; j < m; ++j) {
            B[static_cast<size_t>(k) * m + j] /= d;
            inv[static_cast<size_t>(k) * m + j] /= d;
        }
        for (int i = 0; i < m; ++i) {
            if (i == k) continue;
            double f = B[static_cast<size_t>(i) * m + k];
            if (f == 0.0) continue;
            for (int j = 0; j < m; ++j) {
                B[static_cast<size_t>(i) * m + j] -= f * B[static_cast<size_t>(k) * m + j];
                inv[static_cast<size_t>(i) * m + j] -= f * inv[static_cast<size_t>(k) * m + j];
            }
        }
    }
}

// xb = binv * (rhs - sum_j nonbasic column_j * value_j)
void recompute_basics(Tableau& t) {
    const int m = t.m;
    std::vector<double> r = t.rhs;
    for (int j = 0; j < t.total(); ++j) {
        if (t.stat[j] == VStat::Basic) continue;
        double v = t.nonbasic_value(j);
        if (v != 0.0) t.axpy_col(j, -v, r);
    }
    for (int i = 0; i < m; ++i) {
        double s = 0.0;
        const double* row = t.binv.data() + static_cast<size_t>(i) * m;
        for (int k = 0; k < m; ++k) s += row[k] * r[k];
        t.xb[i] = s;
    }
}

// y' = c_B' * binv
void compute_duals(const Tableau& t, std::vector<double>& y) {
    const int m = t.m;
    y.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double cb = t.cost[t.basis[i]];
        if (cb == 0.0) continue;
        const double* row = t.binv.data() + static_cast<size_t>(i) * m;
        for (int k = 0; k < m; ++k) y[k] += cb * row[k];
    }
}

double reduced_cost(const Tableau& t, const std::vector<double>& y, int j) {
    double d = t.cost[j];
    if (j < t.n_struct) {
        const double* c = t.col->data() + static_cast<size_t>(j) * t.m;
        for (int i = 0; i < t.m; ++i) d -= y[i] * c[i];
    } else if (j < t.n_logical_end) {
        d -= y[j - t.n_struct];
    } else {
        int a = j - t.n_logical_end;
        d -= y[t.art_row[a]] * t.art_sign[a];
    }
    return d;
}

struct IterOutcome {
    LpStatus status = LpStatus::Optimal;
    int iterations = 0;
};

// Core bounded-variable simplex loop on the current t.cost. Assumes the
// basis is primal feasible; maintains feasibility throughout.
IterOutcome iterate(Tableau& t, double dual_tol, int iter_cap) {
    const int m = t.m;
    std::vector<double> y(m), w(m);
    bool bland = false;
    int stall = 0;
    int since_refactor = 0;
    IterOutcome out;

    for (int iter = 0; iter < iter_cap; ++iter) {
        out.iterations = iter;
        compute_duals(t, y);

        // Pricing: pick an entering column.
        int q = -1;
        double best_violation = dual_tol;
        int dir = +1;
        for (int j = 0; j < t.total(); ++j) {
            if (t.stat[j] == VStat::Basic) continue;
            if (t.lb[j] == t.ub[j]) continue;  // fixed, cannot move
            double d = reduced_cost(t, y, j);
            double viol = 0.0;
            int cand_dir = 0;
            switch (t.stat[j]) {
                case VStat::AtLower:
                    if (d < -dual_tol) { viol = -d; cand_dir = +1; }
                    break;
                case VStat::AtUpper:
                    if (d > dual_tol) { viol = d; cand_dir = -1; }
                    break;
                case VStat::FreeZero:
                    if (std::abs(d) > dual_tol) { viol = std::abs(d); cand_dir = d < 0 ? +1 : -1; }
                    break;
                case VStat::Basic: break;
            }
            if (cand_dir == 0) continue;
            if (bland) { q = j; dir = cand_dir; break; }
            if (viol > best_violation) { best_violation = viol; q = j; dir = cand_dir; }
        }
        if (q < 0) { out.status = LpStatus::Optimal; return out; }

        // w = binv * column_q
        std::vector<double> colq(m, 0.0);
        t.axpy_col(q, 1.0, colq);
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            const double* row = t.binv.data() + static_cast<size_t>(i) * m;
            for (int k = 0; k < m; ++k) s += row[k] * colq[k];
            w[i] = s;
        }

        // Ratio test: entering moves by delta >= 0 in direction dir.
        double span = t.ub[q] - t.lb[q];  // may be inf
        double delta = std::isfinite(span) ? span : kInf;
        int leave = -1;       // row index of leaving basic
        bool leave_upper = false;
        for (int i = 0; i < m; ++i) {
            double step = dir * w[i];
            double cand;
            bool to_upper;
            if (step > kPivotTol) {  // basic i decreases toward its lower bound
                double lbi = t.lb[t.basis[i]];
                if (!std::isfinite(lbi)) continue;
                cand = (t.xb[i] - lbi) / step;
                to_upper = false;
            } else if (step < -kPivotTol) {  // basic i increases toward its upper bound
                double ubi = t.ub[t.basis[i]];
                if (!std::isfinite(ubi)) continue;
                cand = (ubi - t.xb[i]) / (-step);
                to_upper = true;
            } else {
                continue;
            }
            if (cand < 0.0) cand = 0.0;
            bool better = cand < delta - 1e-12;
            bool tie = !better && cand < delta + 1e-12 && leave >= 0;
            if (tie) {
                if (bland) {
                    better = t.basis[i] < t.basis[leave];
                } else {
                    better = std::abs(w[i]) > std::abs(w[leave]);
                }
            }
            if (better || (leave < 0 && cand < delta)) {
                delta = cand;
                leave = i;
                leave_upper = to_upper;
            }
        }

        if (!std::isfinite(delta)) { out.status = LpStatus::Unbounded; return out; }

        if (delta <= kZeroTol) ++stall; else stall = 0;
        if (stall > kStallLimit) bland = true;

        // Apply movement to basic values.
        if (delta != 0.0) {
            for (int i = 0; i < m; ++i) t.xb[i] -= dir * delta * w[i];
        }

        if (leave < 0) {
            // Bound flip: entering runs to its opposite bound; basis unchanged.
            t.stat[q] = (dir > 0) ? VStat::AtUpper : VStat::AtLower;
            continue;
        }

        // Pivot: q enters at row `leave`, the old basic goes to a bound.
        int p = t.basis[leave];
        double enter_val;
        switch (t.stat[q]) {
            case VStat::AtLower: enter_val = t.lb[q] + delta; break;
            case VStat::AtUpper: enter_val = t.ub[q] - delta; break;
            default: enter_val = dir * delta; break;
        }
        t.stat[p] = leave_upper ? VStat::AtUpper : VStat::AtLower;
        t.stat[q] = VStat::Basic;
        t.basis[leave] = q;
        t.xb[leave] = enter_val;

        // Product-form update of binv.
        double piv = w[leave];
        if (std::abs(piv) < kPivotTol) {
            refactorize(t);
            recompute_basics(t);
            since_refactor = 0;
            continue;
        }
        double* prow = t.binv.data() + static_cast<size_t>(leave) * m;
        for (int k = 0; k < m; ++k) prow[k] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            double f = w[i];
            if (f == 0.0) continue;
            double* irow = t.binv.data() + static_cast<size_t>(i) * m;
            for (int k = 0; k < m; ++k) irow[k] -= f * prow[k];
        }

        if (++since_refactor >= kRefactorEvery) {
            refactorize(t);
            recompute_basics(t);
            since_refactor = 0;
        }
    }
    out.status = LpStatus::IterLimit;
    return out;
}

}  // namespace

LpCore::LpCore(const LinearModel& model) {
    model.validate();
    m_ = model.num_rows();
    n_struct_ = model.num_vars();
    maximize_ = model.sense == ObjSense::Maximize;

    cost_.resize(n_struct_);
    base_lb_.resize(n_struct_);
    base_ub_.resize(n_struct_);
    for (int j = 0; j < n_struct_; ++j) {
        const auto& v = model.var(j);
        cost_[j] = maximize_ ? -v.obj : v.obj;
        double lb = v.lb, ub = v.ub;
        if (v.kind == VarKind::Binary) { lb = std::max(lb, 0.0); ub = std::min(ub, 1.0); }
        base_lb_[j] = lb;
        base_ub_[j] = ub;
        cost_scale_ = std::max(cost_scale_, std::abs(cost_[j]));
    }

    rhs_.resize(m_);
    logical_lb_.resize(m_);
    logical_ub_.resize(m_);
    col_.assign(static_cast<size_t>(m_) * n_struct_, 0.0);
    for (int i = 0; i < m_; ++i) {
        const auto& r = model.row(i);
        rhs_[i] = r.rhs;
        switch (r.sense) {
            case RowSense::LE: logical_lb_[i] = 0.0;   logical_ub_[i] = kInf; break;
            case RowSense::GE: logical_lb_[i] = -kInf; logical_ub_[i] = 0.0;  break;
            case RowSense::EQ: logical_lb_[i] = 0.0;   logical_ub_[i] = 0.0;  break;
        }
        for (const auto& [j, a] : r.coeffs) {
            col_[static_cast<size_t>(j) * m_ + i] += a;
        }
    }
}

LpSolution LpCore::solve(const std::vector<double>& struct_lb,
                         const std::vector<double>& struct_ub) const {
    LpSolution sol;
    Tableau t;
    t.m = m_;
    t.n_struct = n_struct_;
    t.n_logical_end = n_struct_ + m_;
    t.col = &col_;
    t.rhs = rhs_;

    const int n_total0 = n_struct_ + m_;
    t.lb.resize(n_total0);
    t.ub.resize(n_total0);
    t.cost.assign(n_total0, 0.0);
    t.stat.assign(n_total0, VStat::AtLower);
    for (int j = 0; j < n_struct_; ++j) {
        t.lb[j] = struct_lb[j];
        t.ub[j] = struct_ub[j];
        if (t.lb[j] > t.ub[j] + 1e-12) {  // empty box, e.g. from branching
            sol.status = LpStatus::Infeasible;
            return sol;
        }
    }
    for (int i = 0; i < m_; ++i) {
        t.lb[n_struct_ + i] = logical_lb_[i];
        t.ub[n_struct_ + i] = logical_ub_[i];
    }
    for (int j = 0; j < n_total0; ++j) {
        if (std::isfinite(t.lb[j])) t.stat[j] = VStat::AtLower;
        else if (std::isfinite(t.ub[j])) t.stat[j] = VStat::AtUpper;
        else t.stat[j] = VStat::FreeZero;
    }

    // Initial basis: the logicals. Rows whose logical cannot hold the
    // residual get an artificial column instead.
    t.basis.resize(m_);
    t.xb.assign(m_, 0.0);
    std::vector<double> act(m_, 0.0);
    for (int j = 0; j < n_struct_; ++j) {
        double v = t.nonbasic_value(j);
        if (v != 0.0) t.axpy_col(j, v, act);
    }
    double need_phase1 = 0.0;
    for (int i = 0; i < m_; ++i) {
        double resid = rhs_[i] - act[i];
        int lg = n_struct_ + i;
        if (resid >= t.lb[lg] - 1e-9 && resid <= t.ub[lg] + 1e-9) {
            t.basis[i] = lg;
            t.stat[lg] = VStat::Basic;
            t.xb[i] = resid;
        } else {
            double clamped = std::clamp(resid, t.lb[lg], t.ub[lg]);
            t.stat[lg] = (clamped == t.lb[lg]) ? VStat::AtLower : VStat::AtUpper;
            double excess = resid - clamped;
            t.art_row.push_back(i);
            t.art_sign.push_back(excess >= 0 ? 1.0 : -1.0);
            t.lb.push_back(0.0);
            t.ub.push_back(kInf);
            t.cost.push_back(0.0);
            t.stat.push_back(VStat::Basic);
            t.basis[i] = static_cast<int>(t.lb.size()) - 1;
            t.xb[i] = std::abs(excess);
            need_phase1 += std::abs(excess);
        }
    }
    t.binv.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) t.binv[static_cast<size_t>(i) * m_ + i] = 1.0;
    for (double s : t.art_sign) {
        if (s < 0) {  // negative artificial columns make the basis non-identity
            refactorize(t);
            recompute_basics(t);
            break;
        }
    }

    const int iter_cap = 200 * (m_ + n_struct_) + 20000;

    if (need_phase1 > 0.0) {
        for (size_t a = 0; a < t.art_row.size(); ++a)
            t.cost[t.n_logical_end + static_cast<int>(a)] = 1.0;
        IterOutcome ph1 = iterate(t, 1e-9, iter_cap);
        sol.iterations += ph1.iterations;
        if (ph1.status == LpStatus::IterLimit) { sol.status = LpStatus::IterLimit; return sol; }
        double infeas = 0.0;
        for (int i = 0; i < m_; ++i)
            if (t.basis[i] >= t.n_logical_end) infeas += std::abs(t.xb[i]);
        double scale = 1.0;
        for (int i = 0; i < m_; ++i) scale = std::max(scale, std::abs(rhs_[i]));
        if (infeas > 1e-7 * scale) { sol.status = LpStatus::Infeasible; return sol; }

        // Pin artificials at zero for phase 2; basic ones stay at value 0.
        for (size_t a = 0; a < t.art_row.size(); ++a) {
            int j = t.n_logical_end + static_cast<int>(a);
            t.cost[j] = 0.0;
            t.ub[j] = 0.0;
            if (t.stat[j] != VStat::Basic) t.stat[j] = VStat::AtLower;
        }
    }

    // Phase 2 with the real costs.
    for (int j = 0; j < n_struct_; ++j) t.cost[j] = cost_[j];
    double dual_tol = std::max(1e-9, 1e-13 * cost_scale_);
    IterOutcome ph2 = iterate(t, dual_tol, iter_cap);
    sol.iterations += ph2.iterations;
    if (ph2.status == LpStatus::IterLimit) { sol.status = LpStatus::IterLimit; return sol; }
    if (ph2.status == LpStatus::Unbounded) { sol.status = LpStatus::Unbounded; return sol; }

    // Clean final factorization for accurate primal/duals.
    refactorize(t);
    recompute_basics(t);

    sol.status = LpStatus::Optimal;
    sol.primal.assign(n_struct_, 0.0);
    for (int j = 0; j < n_struct_; ++j)
        if (t.stat[j] != VStat::Basic) sol.primal[j] = t.nonbasic_value(j);
    for (int i = 0; i < m_; ++i)
        if (t.basis[i] < n_struct_) sol.primal[t.basis[i]] = t.xb[i];

    double obj = 0.0;
    for (int j = 0; j < n_struct_; ++j) obj += cost_[j] * sol.primal[j];
    sol.objective = maximize_ ? -obj : obj;

    std::vector<double> y;
    compute_duals(t, y);
    sol.duals.resize(m_);
    for (int i = 0; i < m_; ++i) sol.duals[i] = maximize_ ? -y[i] : y[i];
    return sol;
}

}  // namespace tfacpp::detail
