#include "tfacpp/linear_model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>
#include <unordered_set>

#include "simplex_core.hpp"
#include "tfacpp/errors.hpp"

namespace tfacpp {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::Limit: return "limit";
    }
    return "?";
}

int LinearModel::add_var(std::string id, double lb, double ub, VarKind kind, double obj) {
    vars_.push_back(Var{std::move(id), lb, ub, obj, kind});
    return static_cast<int>(vars_.size()) - 1;
}

int LinearModel::add_row(std::string id, RowSense sense, double rhs) {
    rows_.push_back(Row{std::move(id), sense, rhs, {}});
    return static_cast<int>(rows_.size()) - 1;
}

void LinearModel::add_coeff(int row, int var, double value) {
    rows_[row].coeffs.emplace_back(var, value);
}

bool LinearModel::has_integers() const {
    return std::any_of(vars_.begin(), vars_.end(),
                       [](const Var& v) { return v.kind != VarKind::Continuous; });
}

void LinearModel::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& v : vars_) {
        if (!seen.insert(v.id).second) throw SolveError("duplicate variable id: " + v.id);
        if (std::isnan(v.lb) || std::isnan(v.ub) || !std::isfinite(v.obj))
            throw SolveError("non-finite data on variable " + v.id);
    }
    seen.clear();
    for (const auto& r : rows_) {
        if (!seen.insert(r.id).second) throw SolveError("duplicate row id: " + r.id);
        if (!std::isfinite(r.rhs)) throw SolveError("non-finite rhs on row " + r.id);
        for (const auto& [j, a] : r.coeffs) {
            if (j < 0 || j >= num_vars()) throw SolveError("bad var index in row " + r.id);
            if (!std::isfinite(a)) throw SolveError("non-finite coefficient in row " + r.id);
        }
    }
}

namespace {

SolveStatus from_lp_status(detail::LpStatus s) {
    switch (s) {
        case detail::LpStatus::Optimal: return SolveStatus::Optimal;
        case detail::LpStatus::Infeasible: return SolveStatus::Infeasible;
        case detail::LpStatus::Unbounded: return SolveStatus::Unbounded;
        case detail::LpStatus::IterLimit: return SolveStatus::Limit;
    }
    return SolveStatus::Limit;
}

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

}  // namespace

SolveResult solve_lp(const LinearModel& model) {
    double t0 = now_seconds();
    detail::LpCore core(model);
    detail::LpSolution s = core.solve();
    SolveResult r;
    r.status = from_lp_status(s.status);
    r.objective = s.objective;
    r.primal = std::move(s.primal);
    r.duals = std::move(s.duals);
    r.wall_time = now_seconds() - t0;
    return r;
}

namespace {

constexpr double kIntTol = 1e-6;

struct BnbNode {
    int parent = -1;
    int var = -1;        // branching variable (-1 for root)
    double lb = 0.0;     // new bound applied to var
    double ub = 0.0;
    double bound;        // parent LP objective, ordering key
    long id = 0;
};

struct NodeOrder {
    bool maximize;
    // Best-bound first; node id breaks ties for determinism.
    bool operator()(const std::pair<double, long>& a, const std::pair<double, long>& b) const {
        if (a.first != b.first) return maximize ? a.first < b.first : a.first > b.first;
        return a.second > b.second;
    }
};

}  // namespace

SolveResult solve_mip(const LinearModel& model, const MipOptions& opts) {
    double t0 = now_seconds();
    detail::LpCore core(model);
    const bool maximize = model.sense == ObjSense::Maximize;
    const int n = model.num_vars();

    std::vector<double> root_lb = core.base_lb();
    std::vector<double> root_ub = core.base_ub();
    for (int j = 0; j < n; ++j) {
        if (model.var(j).kind == VarKind::Continuous) continue;
        if (std::isfinite(root_lb[j])) root_lb[j] = std::ceil(root_lb[j] - kIntTol);
        if (std::isfinite(root_ub[j])) root_ub[j] = std::floor(root_ub[j] + kIntTol);
    }

    std::vector<BnbNode> pool;
    pool.push_back(BnbNode{-1, -1, 0, 0, maximize ? kInf : -kInf, 0});
    std::priority_queue<std::pair<double, long>, std::vector<std::pair<double, long>>, NodeOrder>
        open{NodeOrder{maximize}};
    open.push({pool[0].bound, 0});

    SolveResult best;
    best.status = SolveStatus::Infeasible;
    bool have_incumbent = false;
    double incumbent = maximize ? -kInf : kInf;
    bool hit_limit = false;
    long explored = 0;

    double pruned_frontier = maximize ? -kInf : kInf;  // best bound lost to pruning
    auto rel_gap = [&](double ub, double lb) {
        double denom = std::max(1e-10, std::abs(lb));
        return std::abs(ub - lb) / denom;
    };
    auto improves = [&](double cand) {
        return maximize ? cand > incumbent + 1e-12 : cand < incumbent - 1e-12;
    };
    auto can_prune = [&](double bound) {
        if (!have_incumbent) return false;
        bool prune = rel_gap(bound, incumbent) <= opts.rel_gap ||
                     (maximize ? bound <= incumbent + 1e-12 : bound >= incumbent - 1e-12);
        if (prune && std::isfinite(bound))
            pruned_frontier = maximize ? std::max(pruned_frontier, bound)
                                       : std::min(pruned_frontier, bound);
        return prune;
    };

    std::vector<double> lb(n), ub(n);
    while (!open.empty()) {
        if (explored >= opts.node_limit || now_seconds() - t0 > opts.time_limit) {
            hit_limit = true;
            break;
        }
        auto [bound, idx] = open.top();
        open.pop();
        if (can_prune(bound)) continue;

        // Reconstruct this node's box by walking to the root.
        lb = root_lb;
        ub = root_ub;
        for (int at = static_cast<int>(idx); at > 0; at = pool[at].parent) {
            const BnbNode& nd = pool[at];
            lb[nd.var] = std::max(lb[nd.var], nd.lb);
            ub[nd.var] = std::min(ub[nd.var], nd.ub);
        }
        ++explored;

        detail::LpSolution rel = core.solve(lb, ub);
        if (rel.status == detail::LpStatus::Infeasible) continue;
        if (rel.status == detail::LpStatus::Unbounded) {
            if (idx == 0) {
                best.status = SolveStatus::Unbounded;
                best.wall_time = now_seconds() - t0;
                return best;
            }
            continue;
        }
        if (rel.status == detail::LpStatus::IterLimit) { hit_limit = true; continue; }
        if (can_prune(rel.objective)) continue;

        // Most-fractional branching.
        int branch = -1;
        double branch_score = kIntTol;
        for (int j = 0; j < n; ++j) {
            if (model.var(j).kind == VarKind::Continuous) continue;
            double v = rel.primal[j];
            double frac = v - std::floor(v);
            double dist = std::min(frac, 1.0 - frac);
            if (dist > branch_score) { branch_score = dist; branch = j; }
        }
        if (branch < 0) {
            if (improves(rel.objective)) {
                incumbent = rel.objective;
                have_incumbent = true;
                best.status = SolveStatus::Optimal;
                best.objective = rel.objective;
                best.primal = rel.primal;
                for (int j = 0; j < n; ++j)
                    if (model.var(j).kind != VarKind::Continuous)
                        best.primal[j] = std::round(best.primal[j]);
            }
            continue;
        }
        double v = rel.primal[branch];
        long id0 = static_cast<long>(pool.size());
        pool.push_back(BnbNode{static_cast<int>(idx), branch, -kInf, std::floor(v), rel.objective, id0});
        open.push({rel.objective, id0});
        long id1 = static_cast<long>(pool.size());
        pool.push_back(BnbNode{static_cast<int>(idx), branch, std::ceil(v), kInf, rel.objective, id1});
        open.push({rel.objective, id1});
    }

    best.wall_time = now_seconds() - t0;
    if (!have_incumbent) {
        best.status = hit_limit ? SolveStatus::Limit : SolveStatus::Infeasible;
        return best;
    }
    double frontier = incumbent;
    if (std::isfinite(pruned_frontier))
        frontier = maximize ? std::max(frontier, pruned_frontier)
                            : std::min(frontier, pruned_frontier);
    // Remaining open nodes bound the optimum.
    while (!open.empty()) {
        double b = open.top().first;
        open.pop();
        if (maximize ? b > frontier : b < frontier) { frontier = b; break; }
    }
    best.gap = rel_gap(frontier, incumbent);
    best.status = (hit_limit && best.gap > opts.rel_gap) ? SolveStatus::Limit : SolveStatus::Optimal;
    return best;
}

void write_lp_format(const LinearModel& model, std::ostream& out) {
    out << (model.sense == ObjSense::Maximize ? "Maximize" : "Minimize") << "\n obj:";
    for (int j = 0; j < model.num_vars(); ++j) {
        const auto& v = model.var(j);
        if (v.obj == 0.0) continue;
        out << (v.obj >= 0 ? " + " : " - ") << std::abs(v.obj) << " " << v.id;
    }
    out << "\nSubject To\n";
    for (int i = 0; i < model.num_rows(); ++i) {
        const auto& r = model.row(i);
        out << " " << r.id << ":";
        for (const auto& [j, a] : r.coeffs) {
            if (a == 0.0) continue;
            out << (a >= 0 ? " + " : " - ") << std::abs(a) << " " << model.var(j).id;
        }
        switch (r.sense) {
            case RowSense::LE: out << " <= "; break;
            case RowSense::EQ: out << " = "; break;
            case RowSense::GE: out << " >= "; break;
        }
        out << r.rhs << "\n";
    }
    out << "Bounds\n";
    for (int j = 0; j < model.num_vars(); ++j) {
        const auto& v = model.var(j);
        if (std::isfinite(v.lb) && std::isfinite(v.ub))
            out << " " << v.lb << " <= " << v.id << " <= " << v.ub << "\n";
        else if (std::isfinite(v.lb))
            out << " " << v.id << " >= " << v.lb << "\n";
        else if (std::isfinite(v.ub))
            out << " -inf <= " << v.id << " <= " << v.ub << "\n";
        else
            out << " " << v.id << " free\n";
    }
    bool any_int = model.has_integers();
    if (any_int) {
        out << "Generals\n";
        for (int j = 0; j < model.num_vars(); ++j)
            if (model.var(j).kind != VarKind::Continuous) out << " " << model.var(j).id << "\n";
    }
    out << "End\n";
}

}  // namespace tfacpp
