#include "tfacpp/colgen.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
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

void hash_mix(std::uint64_t& h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

// eta_b implied by the cuts at a fixed assignment: max(0, max_cut omega.x).
std::map<int, double> eta_at(const Instance& inst, const std::vector<BendersCut>& cuts,
                             const std::string& month,
                             const std::map<std::pair<int, int>, double>& x) {
    std::map<int, double> eta;
    for (size_t bi = 0; bi < inst.families.size(); ++bi) eta[static_cast<int>(bi)] = 0.0;
    for (const auto& cut : cuts) {
        if (cut.month != month) continue;
        int bi = inst.family_index(cut.family);
        const FleetFamily& fam = inst.families[bi];
        double lhs = 0.0;
        for (const auto& [li, omega] : cut.omega) {
            for (const auto& ftid : fam.fleet_type_ids) {
                auto it = x.find({li, inst.fleet_index(ftid)});
                if (it != x.end()) lhs += omega * it->second;
            }
        }
        eta[bi] = std::max(eta[bi], lhs);
    }
    return eta;
}

}  // namespace

std::uint64_t column_hash(const Column& col) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : col.month) hash_mix(h, static_cast<std::uint64_t>(c));
    for (const auto& [key, v] : col.x) {
        hash_mix(h, static_cast<std::uint64_t>(key.first));
        hash_mix(h, static_cast<std::uint64_t>(key.second));
        hash_mix(h, static_cast<std::uint64_t>(std::llround(v * 1e9)));
    }
    return h;
}

void Column::check_consistency(const Instance& inst,
                               const std::vector<BendersCut>& cuts) const {
    double r = 0.0;
    std::map<int, double> t;
    for (const auto& [key, v] : x) {
        const FlightLeg& l = inst.legs[key.first];
        const FleetType& f = inst.fleet_types[key.second];
        r += leg_profit(l, f) * v;
        int bi = inst.family_index(f.family_id);
        t[bi] += inst.leg_family_hours(l, f.family_id) * v;
    }
    auto eta = eta_at(inst, cuts, month, x);
    double eta_sum = 0.0;
    for (const auto& [bi, e] : eta) eta_sum += e;
    r -= eta_sum;
    if (std::abs(r - profit) > 1e-9 * std::max(1.0, std::abs(profit)))
        throw SolveError("column profit drifted from its assignment");
    for (const auto& [bi, hours] : t) {
        auto it = crew_time.find(bi);
        double stored = it == crew_time.end() ? 0.0 : it->second;
        if (std::abs(stored - hours) > 1e-9 * std::max(1.0, std::abs(hours)))
            throw SolveError("column crew time drifted from its assignment");
    }
}

CgmpModel build_cgmp(const Instance& inst, const std::vector<Column>& columns, bool relax) {
    CgmpModel cm;
    cm.model.sense = ObjSense::Maximize;
    std::map<std::string, bool> month_seen;
    for (size_t c = 0; c < columns.size(); ++c) {
        // The convexity rows already cap u at one; an explicit upper bound in
        // LP mode would let optimal columns finish nonbasic at the bound and
        // detach the convexity duals from the column profits.
        double ub = relax ? kInf : 1.0;
        cm.u.push_back(cm.model.add_var("u" + std::to_string(c), 0, ub,
                                        relax ? VarKind::Continuous : VarKind::Binary,
                                        columns[c].profit));
        month_seen[columns[c].month] = true;
    }
    for (const auto& m : inst.months) {
        if (!month_seen.count(m))
            throw SolveError("column generation master has no column for month " + m);
        cm.convexity_row[m] = cm.model.add_row("conv[" + m + "]", RowSense::EQ, 1.0);
    }
    for (size_t bi = 0; bi < inst.families.size(); ++bi) {
        double tb = family_time_budget(inst.families[bi]).yearly;
        cm.yearly_row[static_cast<int>(bi)] =
            cm.model.add_row("yr[" + inst.families[bi].id + "]", RowSense::LE, tb);
    }
    for (size_t c = 0; c < columns.size(); ++c) {
        cm.model.add_coeff(cm.convexity_row.at(columns[c].month), cm.u[c], 1.0);
        for (const auto& [bi, t] : columns[c].crew_time)
            if (t != 0.0) cm.model.add_coeff(cm.yearly_row.at(bi), cm.u[c], t);
    }
    return cm;
}

namespace {

struct CgspSolve {
    FleetModel fm;
    SolveResult res;
};

// Builds the monthly pricing model. beta empty means zero duals; when
// monthly_rhs carries values they replace the instance budgets (finishing).
CgspSolve solve_cgsp(const Instance& inst, const NetworkSet& nets, const std::string& month,
                     const std::map<std::string, double>& beta,
                     const std::vector<BendersCut>& cuts, RowSense cover_sense,
                     const std::map<std::string, double>* monthly_rhs, bool as_mip,
                     double mip_gap) {
    FamCoreOptions opts;
    opts.months = {month};
    opts.cover_sense = cover_sense;
    opts.yearly_budget_row = false;
    opts.with_eta = true;
    opts.cuts = &cuts;

    std::map<std::pair<int, int>, double> coeff;
    for (int li : inst.legs_in_month(month)) {
        const FlightLeg& l = inst.legs[li];
        for (size_t fi = 0; fi < inst.fleet_types.size(); ++fi) {
            const FleetType& f = inst.fleet_types[fi];
            double r = leg_profit(l, f);
            auto bit = beta.find(f.family_id);
            if (bit != beta.end())
                r -= inst.leg_family_hours(l, f.family_id) * bit->second;
            coeff[{li, static_cast<int>(fi)}] = r;
        }
    }
    opts.obj_coeff = &coeff;
    if (monthly_rhs)
        for (const auto& [fam, rhs] : *monthly_rhs) opts.monthly_rhs_override[{month, fam}] = rhs;

    CgspSolve out{build_fam_core(inst, nets, opts), {}};
    if (as_mip) {
        MipOptions mo;
        mo.rel_gap = mip_gap;
        out.res = solve_mip(out.fm.model, mo);
    } else {
        out.res = solve_lp(out.fm.model);
    }
    return out;
}

Column column_from_solve(const Instance& inst, const std::string& month, const CgspSolve& s) {
    Column col;
    col.month = month;
    double rx = 0.0;
    for (const auto& [key, var] : s.fm.x) {
        double v = s.res.value(var);
        if (std::abs(v) < 1e-9) continue;
        col.x[key] = v;
        const FlightLeg& l = inst.legs[key.first];
        const FleetType& f = inst.fleet_types[key.second];
        rx += leg_profit(l, f) * v;
        int bi = inst.family_index(f.family_id);
        col.crew_time[bi] += inst.leg_family_hours(l, f.family_id) * v;
    }
    double eta_sum = 0.0;
    for (const auto& [key, var] : s.fm.eta) eta_sum += s.res.value(var);
    col.eta_total = eta_sum;
    col.profit = rx - eta_sum;
    col.hash = column_hash(col);
    return col;
}

}  // namespace

PriceOutcome price_month(const Instance& inst, const NetworkSet& nets, const std::string& month,
                         double alpha, const std::map<std::string, double>& beta,
                         const std::vector<BendersCut>& cuts, double tol) {
    CgspSolve s = solve_cgsp(inst, nets, month, beta, cuts, RowSense::LE, nullptr,
                             /*as_mip=*/false, 0.0);
    if (s.res.status != SolveStatus::Optimal)
        throw SolveError("pricing LP failed for month " + month);
    PriceOutcome out;
    out.chi = s.res.objective;
    for (const auto& [key, row] : s.fm.count_row)
        out.gamma[inst.fleet_types[key.second].id] = std::max(0.0, s.res.dual(row));
    if (out.chi > alpha + tol) out.column = column_from_solve(inst, month, s);
    return out;
}

CgState run_colgen(const Instance& inst, const NetworkSet& nets,
                   const std::vector<BendersCut>& cuts, const CgOptions& opts) {
    CgState st;
    double t0 = now_seconds();

    // Seed: the empty schedule (always feasible under <= cover) plus one
    // zero-dual MIP schedule per month.
    for (const auto& m : inst.months) {
        Column empty;
        empty.month = m;
        empty.hash = column_hash(empty);
        st.columns.push_back(empty);
    }
    {
        std::vector<Column> init(inst.months.size());
        double tic = now_seconds();
        detail::parallel_for(static_cast<int>(inst.months.size()), opts.threads, [&](int i) {
            CgspSolve s = solve_cgsp(inst, nets, inst.months[i], {}, cuts, RowSense::LE,
                                     nullptr, /*as_mip=*/true, opts.init_mip_gap);
            if (s.res.status != SolveStatus::Optimal && s.res.status != SolveStatus::Limit)
                throw SolveError("initial schedule solve failed for " + inst.months[i]);
            init[i] = column_from_solve(inst, inst.months[i], s);
        });
        st.cgsp_calls += static_cast<int>(inst.months.size());
        st.cgsp_time += now_seconds() - tic;
        for (auto& col : init) st.columns.push_back(std::move(col));
    }

    std::set<std::pair<std::string, std::uint64_t>> seen;
    for (const auto& col : st.columns) seen.insert({col.month, col.hash});

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        double tic = now_seconds();
        CgmpModel cm = build_cgmp(inst, st.columns, /*relax=*/true);
        SolveResult mres = solve_lp(cm.model);
        st.cgmp_time += now_seconds() - tic;
        if (mres.status != SolveStatus::Optimal)
            throw SolveError("master LP failed: " + std::string(to_string(mres.status)));
        ++st.cgmp_solves;
        st.lp_objective = mres.objective;
        st.weights = mres.primal;
        for (const auto& [m, row] : cm.convexity_row) st.alpha[m] = mres.dual(row);
        for (const auto& [bi, row] : cm.yearly_row)
            st.beta[inst.families[bi].id] = std::max(0.0, mres.dual(row));

        // Price every month against the fresh duals. The acceptance threshold
        // keeps the configured floor but never drops below what doubles can
        // resolve at the objective's scale.
        std::vector<PriceOutcome> probes(inst.months.size());
        tic = now_seconds();
        detail::parallel_for(static_cast<int>(inst.months.size()), opts.threads, [&](int i) {
            double a = st.alpha[inst.months[i]];
            double tol = std::max(opts.tol, 1e-9 * (1.0 + std::abs(a)));
            probes[i] = price_month(inst, nets, inst.months[i], a, st.beta, cuts, tol);
        });
        st.cgsp_calls += static_cast<int>(inst.months.size());
        st.cgsp_time += now_seconds() - tic;

        for (size_t i = 0; i < inst.months.size(); ++i)
            for (const auto& [fleet, g] : probes[i].gamma)
                st.gamma[{inst.months[i], fleet}] = g;

        // Deterministic insertion order: month order, then content hash.
        std::vector<Column> fresh;
        for (auto& p : probes)
            if (p.column) fresh.push_back(std::move(*p.column));
        std::sort(fresh.begin(), fresh.end(), [](const Column& a, const Column& b) {
            if (a.month != b.month) return a.month < b.month;
            return a.hash < b.hash;
        });
        int added = 0;
        for (auto& col : fresh) {
            if (!seen.insert({col.month, col.hash}).second) continue;
            st.columns.push_back(std::move(col));
            ++added;
        }
        st.trace.push_back(CgTraceRow{iter, st.lp_objective, added, st.cgsp_calls,
                                      now_seconds() - t0});
        if (added == 0) {
            // Improving columns that are already in the master are numerical
            // noise around zero reduced cost; the LP is optimal either way.
            st.converged = true;
            break;
        }
    }

    // LP crew-time allocation per (month, family).
    for (const auto& m : inst.months)
        for (const auto& fam : inst.families) st.t_tilde[{m, fam.id}] = 0.0;
    for (size_t c = 0; c < st.columns.size(); ++c) {
        double w = c < st.weights.size() ? st.weights[c] : 0.0;
        if (w < 1e-12) continue;
        for (const auto& [bi, t] : st.columns[c].crew_time)
            st.t_tilde[{st.columns[c].month, inst.families[bi].id}] += w * t;
    }
    return st;
}

double column_reduced_cost(const Column& col, const std::map<std::string, double>& alpha,
                           const std::map<std::string, double>& beta, const Instance& inst) {
    double chi = col.profit;
    auto ait = alpha.find(col.month);
    double a = ait == alpha.end() ? 0.0 : ait->second;
    for (const auto& [bi, t] : col.crew_time) {
        auto bit = beta.find(inst.families[bi].id);
        if (bit != beta.end()) chi -= t * bit->second;
    }
    return chi - a;
}

FinishOutcome mip_finish(const CgState& state, const Instance& inst, const NetworkSet& nets,
                         const std::vector<BendersCut>& cuts, const CgOptions& opts) {
    FinishOutcome out;
    out.solution.status = SolveStatus::Optimal;
    out.solution.has_duals = true;
    out.solution.alpha = state.alpha;
    out.solution.beta = state.beta;
    out.solution.gamma = state.gamma;

    // Unused yearly budget is split evenly over the months on top of the LP
    // allocation; the monthly sums still respect the yearly caps, and slack
    // families keep enough room for integral covers.
    std::map<std::string, double> slack_share;
    for (const auto& fam : inst.families) {
        double allocated = 0.0;
        for (const auto& m : inst.months) allocated += state.t_tilde.at({m, fam.id});
        double slack = std::max(0.0, family_time_budget(fam).yearly - allocated);
        slack_share[fam.id] = slack / static_cast<double>(inst.months.size());
    }

    double total = 0.0;
    for (const auto& m : inst.months) {
        std::map<std::string, double> rhs;
        for (const auto& fam : inst.families) {
            double t = state.t_tilde.at({m, fam.id}) + slack_share.at(fam.id);
            t = std::min(t, family_time_budget(fam).monthly.at(m));
            rhs[fam.id] = t * (1.0 + 1e-9) + 1e-9;  // numeric headroom only
        }
        CgspSolve lp = solve_cgsp(inst, nets, m, {}, cuts, RowSense::EQ, &rhs,
                                  /*as_mip=*/false, 0.0);
        if (lp.res.status != SolveStatus::Optimal)
            throw SolveError("finishing LP infeasible for month " + m);
        double tic = now_seconds();
        CgspSolve mip = solve_cgsp(inst, nets, m, {}, cuts, RowSense::EQ, &rhs,
                                   /*as_mip=*/true, opts.finish_mip_gap);
        double mip_time = now_seconds() - tic;
        if (mip.res.status != SolveStatus::Optimal)
            throw SolveError("finishing MIP infeasible for month " + m);

        FinishRow row;
        row.month = m;
        row.lp_objective = lp.res.objective;
        row.mip_objective = mip.res.objective;
        row.int_gap = (mip.res.objective - lp.res.objective) /
                      std::max(1e-10, std::abs(lp.res.objective));
        row.mip_time = mip_time;
        row.lp_integral = true;
        for (const auto& [key, var] : lp.fm.x) {
            double v = lp.res.value(var);
            if (v > 1e-9 && v < 1.0 - 1e-9) row.lp_integral = false;
        }
        out.rows.push_back(row);
        total += mip.res.objective;

        for (const auto& [key, var] : mip.fm.x)
            if (mip.res.value(var) > 0.5)
                out.solution.assignment[inst.legs[key.first].id] =
                    inst.fleet_types[key.second].id;
    }
    out.solution.objective = total;
    out.solution.crew_time_used = crew_usage_of_assignment(inst, out.solution.assignment);
    return out;
}

void write_cg_trace_csv(const CgState& state, std::ostream& out) {
    out << "iteration,lp_objective,columns_added,cgsp_calls,wall_time_s\n";
    for (const auto& r : state.trace)
        out << r.iteration << "," << r.lp_objective << "," << r.columns_added << ","
            << r.cgsp_calls << "," << r.wall_time << "\n";
}

void write_cg_summary_csv(const CgState& state, std::ostream& out) {
    out << "cgmp_calls,avg_cgmp_time_s,cgsp_calls,avg_cgsp_time_s,schedules_generated,"
           "lp_objective,total_lp_time_s\n";
    double avg_m = state.cgmp_solves ? state.cgmp_time / state.cgmp_solves : 0.0;
    double avg_s = state.cgsp_calls ? state.cgsp_time / state.cgsp_calls : 0.0;
    out << state.cgmp_solves << "," << avg_m << "," << state.cgsp_calls << "," << avg_s << ","
        << state.columns.size() << "," << state.lp_objective << ","
        << state.cgmp_time + state.cgsp_time << "\n";
}

void write_finish_csv(const std::vector<FinishRow>& rows, std::ostream& out) {
    out << "month,lp_objective,mip_objective,int_gap_pct,mip_time_s\n";
    for (const auto& r : rows)
        out << r.month << "," << r.lp_objective << "," << r.mip_objective << ","
            << r.int_gap * 100.0 << "," << r.mip_time << "\n";
}

}  // namespace tfacpp
