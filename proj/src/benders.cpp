#include "tfacpp/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>

#include "parallel.hpp"
#include "tfacpp/errors.hpp"

namespace tfacpp {

namespace {

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

// Legs of the month the assignment hands to this family's fleet types.
std::vector<int> assigned_legs(const Instance& inst,
                               const std::map<std::string, std::string>& assignment,
                               const std::string& month, const std::string& family) {
    std::vector<int> out;
    for (int li : inst.legs_in_month(month)) {
        auto it = assignment.find(inst.legs[li].id);
        if (it == assignment.end()) continue;
        if (inst.fleet_types[inst.fleet_index(it->second)].family_id == family)
            out.push_back(li);
    }
    return out;
}

double assignment_profit(const Instance& inst,
                         const std::map<std::string, std::string>& assignment) {
    double p = 0.0;
    for (const auto& [leg_id, fleet_id] : assignment) {
        const FlightLeg& l = inst.legs[inst.leg_index(leg_id)];
        p += leg_profit(l, inst.fleet_types[inst.fleet_index(fleet_id)]);
    }
    return p;
}

}  // namespace

BspResult solve_bsp(const Instance& inst, const PairingPools& pools,
                    const std::map<std::string, std::string>& assignment,
                    const std::string& month, const std::string& family) {
    BspResult out;
    std::vector<int> legs = assigned_legs(inst, assignment, month, family);
    if (legs.empty()) {
        out.status = SolveStatus::Optimal;
        out.objective = 0.0;
        return out;
    }
    const auto& pool = pools.at({month, family});
    CppSolution cpp = solve_cpp(pool, legs, /*relax=*/true);
    out.status = cpp.status;
    if (cpp.status != SolveStatus::Optimal) return out;
    out.objective = cpp.objective;
    out.duals = cpp.duals;
    out.selection = cpp.selection;
    return out;
}

BendersCut make_cut(const std::map<int, double>& duals, const std::string& month,
                    const std::string& family, CutKind kind) {
    BendersCut cut;
    cut.month = month;
    cut.family = family;
    cut.omega = duals;
    cut.empirical = kind == CutKind::Empirical;
    return cut;
}

std::map<int, double> estimate_empirical_duals(std::vector<Pairing> historical_pool,
                                               const Instance& inst, const std::string& month,
                                               const std::string& family, double markup) {
    ensure_complete_recourse(historical_pool, inst, month, family);
    CppSolution cpp = solve_cpp(historical_pool, inst.legs_in_month(month), /*relax=*/true);
    if (cpp.status != SolveStatus::Optimal)
        throw SolveError("empirical dual estimation failed for " + month + "/" + family);
    std::map<int, double> out;
    for (const auto& [li, w] : cpp.duals) out[li] = markup * w;
    return out;
}

BendersOutcome benders_loop(const Instance& inst, const NetworkSet& nets,
                            const PairingPools& pools, const BendersOptions& opts) {
    BendersOutcome out;
    double t0 = now_seconds();

    if (opts.mode == BendersMode::Empirical) {
        const PairingPools& hist = opts.historical ? *opts.historical : pools;
        for (const auto& m : inst.months) {
            for (const auto& fam : inst.families) {
                auto it = hist.find({m, fam.id});
                std::vector<Pairing> pool = it == hist.end() ? std::vector<Pairing>{}
                                                             : it->second;
                auto omega = estimate_empirical_duals(std::move(pool), inst, m, fam.id,
                                                      opts.markup);
                out.cuts.push_back(make_cut(omega, m, fam.id, CutKind::Empirical));
            }
        }
        FleetModel master = build_monolithic_bmp(inst, nets, out.cuts);
        MipOptions mo;
        mo.rel_gap = 1e-9;
        SolveResult res = solve_mip(master.model, mo);
        out.solution = extract_solution(inst, master, res, nullptr);
        out.upper_bound = res.objective;
        out.converged = res.status == SolveStatus::Optimal;
        out.solution.hit_iteration_cap = !out.converged;
        // True crew cost of the returned assignment, for reporting.
        if (res.status == SolveStatus::Optimal) {
            for (const auto& m : inst.months)
                for (const auto& fam : inst.families) {
                    BspResult bsp = solve_bsp(inst, pools, out.solution.assignment, m, fam.id);
                    out.solution.omega_sum[{m, fam.id}] = bsp.objective;
                }
        }
        out.trace.push_back(BendersTraceRow{1, res.objective, res.objective,
                                            static_cast<int>(out.cuts.size()),
                                            now_seconds() - t0});
        return out;
    }

    double best_lb = -kInf;
    double ub = kInf;
    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        FleetModel master = build_monolithic_bmp(inst, nets, out.cuts);
        MipOptions mo;
        mo.rel_gap = 1e-9;
        SolveResult res = solve_mip(master.model, mo);
        if (res.status == SolveStatus::Infeasible) {
            out.solution.status = SolveStatus::Infeasible;
            return out;
        }
        if (res.status != SolveStatus::Optimal)
            throw SolveError("master solve failed: " + std::string(to_string(res.status)));
        ub = res.objective;

        Solution xbar = extract_solution(inst, master, res, nullptr);

        // True monthly crew costs at the incumbent assignment.
        struct Cell { std::string month, family; BspResult bsp; };
        std::vector<Cell> cells;
        for (const auto& m : inst.months)
            for (const auto& fam : inst.families) cells.push_back({m, fam.id, {}});
        detail::parallel_for(static_cast<int>(cells.size()), opts.threads, [&](int i) {
            cells[i].bsp = solve_bsp(inst, pools, xbar.assignment, cells[i].month,
                                     cells[i].family);
        });

        double crew_cost = 0.0;
        int added = 0;
        for (auto& c : cells) {
            if (c.bsp.status != SolveStatus::Optimal)
                throw SolveError("BSP failed for " + c.month + "/" + c.family);
            crew_cost += c.bsp.objective;
            out.cuts.push_back(make_cut(c.bsp.duals, c.month, c.family, CutKind::Exact));
            ++added;
        }
        double lb = assignment_profit(inst, xbar.assignment) - crew_cost;
        if (lb > best_lb + 1e-12) {
            best_lb = lb;
            out.solution = xbar;
            out.solution.objective = lb;
            for (const auto& c : cells)
                out.solution.omega_sum[{c.month, c.family}] = c.bsp.objective;
        }
        out.trace.push_back(BendersTraceRow{iter, ub, best_lb, added, now_seconds() - t0});

        if (ub - best_lb <= opts.tol * std::max(1.0, std::abs(ub))) {
            out.converged = true;
            break;
        }
    }
    out.upper_bound = ub;
    out.solution.hit_iteration_cap = !out.converged;
    if (out.solution.status != SolveStatus::Optimal && best_lb > -kInf)
        out.solution.status = SolveStatus::Optimal;
    return out;
}

void write_benders_trace_csv(const std::vector<BendersTraceRow>& trace, std::ostream& outs) {
    outs << "iteration,upper_bound,lower_bound,cuts_added,wall_time_s\n";
    for (const auto& r : trace)
        outs << r.iteration << "," << r.upper_bound << "," << r.lower_bound << ","
             << r.cuts_added << "," << r.wall_time << "\n";
}

}  // namespace tfacpp
