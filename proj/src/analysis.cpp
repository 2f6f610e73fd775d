#include "tfacpp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tfacpp/errors.hpp"

namespace tfacpp {

MarginalProfitReport marginal_profits(const Solution& sol, const Instance& inst) {
    if (!sol.has_duals)
        throw SolveError(
            "marginal profits need LP duals; solve in an LP mode (colgen) first");
    MarginalProfitReport rep;
    for (const auto& fam : inst.families) {
        MarginalProfitReport::CrewEntry e;
        auto it = sol.beta.find(fam.id);
        e.dual = it == sol.beta.end() ? 0.0 : it->second;
        e.yearly_marginal = e.dual * fam.yearly_cap_per_crew;
        rep.crew[fam.id] = e;
    }
    for (const auto& f : inst.fleet_types) {
        MarginalProfitReport::AircraftEntry e;
        for (const auto& m : inst.months) {
            auto it = sol.gamma.find({m, f.id});
            double g = it == sol.gamma.end() ? 0.0 : it->second;
            e.monthly[m] = g;
            e.yearly += g;
        }
        rep.aircraft[f.id] = e;
    }
    return rep;
}

const char* to_string(Quadrant q) {
    switch (q) {
        case Quadrant::I: return "I";
        case Quadrant::II: return "II";
        case Quadrant::III: return "III";
        case Quadrant::IV: return "IV";
    }
    return "?";
}

QuadrantGrouping quadrant_grouping(const MarginalProfitReport& report, const Instance& inst,
                                   double gamma0, double beta0) {
    QuadrantGrouping g;
    g.gamma0 = gamma0;
    g.beta0 = beta0;
    for (const auto& f : inst.fleet_types) {
        QuadrantGrouping::Entry e;
        e.family = f.family_id;
        e.gamma = report.aircraft.at(f.id).yearly;
        e.beta = report.crew.at(f.family_id).yearly_marginal;
        bool hi_gamma = e.gamma >= gamma0;  // boundary counts as the high side
        bool hi_beta = e.beta >= beta0;
        if (hi_gamma && hi_beta) e.quadrant = Quadrant::I;
        else if (!hi_gamma && hi_beta) e.quadrant = Quadrant::II;
        else if (!hi_gamma && !hi_beta) e.quadrant = Quadrant::III;
        else e.quadrant = Quadrant::IV;
        g.assignment[f.id] = e;
    }
    return g;
}

EamResult eam_baseline(const Instance& inst, const NetworkSet& nets,
                       const std::vector<BendersCut>& cuts) {
    EamResult out;
    for (const auto& fam : inst.families)
        out.monthly_cap_per_crew[fam.id] = fam.yearly_cap_per_crew / 12.0;

    for (const auto& m : inst.months) {
        FamCoreOptions opts;
        opts.months = {m};
        opts.cover_sense = RowSense::LE;
        opts.yearly_budget_row = false;
        opts.with_eta = true;
        opts.cuts = &cuts;
        for (const auto& fam : inst.families)
            opts.monthly_rhs_override[{m, fam.id}] =
                fam.crew_count * out.monthly_cap_per_crew.at(fam.id);
        FleetModel fm = build_fam_core(inst, nets, opts);
        SolveResult res = solve_lp(fm.model);
        if (res.status != SolveStatus::Optimal)
            throw SolveError("equal-allocation LP failed for month " + m);
        out.month_objective[m] = res.objective;
        // Profit metric counts assignment revenue only.
        for (const auto& [key, var] : fm.x) {
            double v = res.value(var);
            if (v < 1e-12) continue;
            const FlightLeg& l = inst.legs[key.first];
            const FleetType& f = inst.fleet_types[key.second];
            out.profit += leg_profit(l, f) * v;
            out.usage[{m, f.family_id}] += inst.leg_family_hours(l, f.family_id) * v;
        }
        for (const auto& fam : inst.families) out.usage.try_emplace({m, fam.id}, 0.0);
    }
    return out;
}

AllocationReport allocation_report(const Solution& sol, const Instance& inst) {
    AllocationReport rep;
    for (const auto& fam : inst.families) {
        AllocationReport::FamilyRow fr;
        fr.family = fam.id;
        fr.mon_min = kInf;
        for (const auto& m : inst.months) {
            AllocationReport::MonthRow mr;
            mr.month = m;
            mr.family = fam.id;
            auto it = sol.crew_time_used.find({m, fam.id});
            mr.used_hours = it == sol.crew_time_used.end() ? 0.0 : it->second;
            mr.per_crew = fam.crew_count > 0 ? mr.used_hours / fam.crew_count : 0.0;
            mr.cap_per_crew = fam.monthly_cap_per_crew.at(m);
            fr.yearly_used += mr.used_hours;
            fr.mon_max = std::max(fr.mon_max, mr.per_crew);
            fr.mon_min = std::min(fr.mon_min, mr.per_crew);
            rep.months.push_back(mr);
        }
        if (!std::isfinite(fr.mon_min)) fr.mon_min = 0.0;
        fr.yearly_per_crew = fam.crew_count > 0 ? fr.yearly_used / fam.crew_count : 0.0;
        fr.diff = fr.mon_max - fr.mon_min;
        rep.families.push_back(fr);
    }
    return rep;
}

void write_marginal_csv(const MarginalProfitReport& report, const Instance& inst,
                        std::ostream& out) {
    out << "kind,id,month,dual,yearly_marginal\n";
    for (const auto& fam : inst.families) {
        const auto& e = report.crew.at(fam.id);
        out << "crew," << fam.id << ",," << e.dual << "," << e.yearly_marginal << "\n";
    }
    for (const auto& f : inst.fleet_types) {
        const auto& e = report.aircraft.at(f.id);
        for (const auto& [m, g] : e.monthly)
            out << "aircraft," << f.id << "," << m << "," << g << ",\n";
        out << "aircraft," << f.id << ",year,," << e.yearly << "\n";
    }
}

void write_quadrant_csv(const QuadrantGrouping& grouping, std::ostream& out) {
    out << "fleet_type,gamma_f,family,beta_b,quadrant\n";
    for (const auto& [fleet, e] : grouping.assignment)
        out << fleet << "," << e.gamma << "," << e.family << "," << e.beta << ","
            << to_string(e.quadrant) << "\n";
}

void write_allocation_csv(const AllocationReport& report, std::ostream& out) {
    out << "month,family,used_hours,per_crew_hours,cap_per_crew\n";
    for (const auto& r : report.months)
        out << r.month << "," << r.family << "," << r.used_hours << "," << r.per_crew << ","
            << r.cap_per_crew << "\n";
    out << "\nfamily,yearly_used,yearly_per_crew,mon_max,mon_min,diff\n";
    for (const auto& r : report.families)
        out << r.family << "," << r.yearly_used << "," << r.yearly_per_crew << "," << r.mon_max
            << "," << r.mon_min << "," << r.diff << "\n";
}

void write_eam_comparison_csv(const EamResult& eam, double cgmp_profit, std::ostream& out) {
    double growth = cgmp_profit - eam.profit;
    double rate = eam.profit != 0.0 ? growth / eam.profit : 0.0;
    out << "eam_profit,cgmp_profit,growth_profit,growth_rate_pct\n";
    out << eam.profit << "," << cgmp_profit << "," << growth << "," << rate * 100.0 << "\n";
}

}  // namespace tfacpp
