#include "tfacpp/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tfacpp/errors.hpp"

namespace tfacpp {

FleetModel build_tfacpp_ct(const Instance& inst, const NetworkSet& nets,
                           const CtOptions& opts) {
    FamCoreOptions core;
    FleetModel fm = build_fam_core(inst, nets, core);

    // Transfer variables with their caps and costs.
    for (const auto& t : inst.transition) {
        double cost = t.cost;
        auto ov = opts.cost_override.find({t.from, t.to});
        if (ov != opts.cost_override.end()) cost = ov->second;
        int var = fm.model.add_var("v[" + t.from + "|" + t.to + "]", 0, t.cap,
                                   opts.integral_transfers ? VarKind::Integer
                                                           : VarKind::Continuous,
                                   -cost);
        fm.v[{t.from, t.to}] = var;
    }

    // Budgets scale with the post-transition crew count: the leg-based usage
    // minus cap_per_crew * (inflow - outflow) stays within k_b * cap_per_crew.
    for (size_t bi = 0; bi < inst.families.size(); ++bi) {
        const FleetFamily& fam = inst.families[bi];
        for (const auto& m : inst.months) {
            int row = fm.monthly_row.at({m, static_cast<int>(bi)});
            double cap = fam.monthly_cap_per_crew.at(m);
            for (const auto& t : inst.transition) {
                if (t.to == fam.id) fm.model.add_coeff(row, fm.v.at({t.from, t.to}), -cap);
                if (t.from == fam.id) fm.model.add_coeff(row, fm.v.at({t.from, t.to}), cap);
            }
        }
        int yrow = fm.yearly_row.at(static_cast<int>(bi));
        for (const auto& t : inst.transition) {
            if (t.to == fam.id)
                fm.model.add_coeff(yrow, fm.v.at({t.from, t.to}), -fam.yearly_cap_per_crew);
            if (t.from == fam.id)
                fm.model.add_coeff(yrow, fm.v.at({t.from, t.to}), fam.yearly_cap_per_crew);
        }
        // k_b + inflow - outflow >= 0
        int crow = fm.model.add_row("crew[" + fam.id + "]", RowSense::GE, -fam.crew_count);
        for (const auto& t : inst.transition) {
            if (t.to == fam.id) fm.model.add_coeff(crow, fm.v.at({t.from, t.to}), 1.0);
            if (t.from == fam.id) fm.model.add_coeff(crow, fm.v.at({t.from, t.to}), -1.0);
        }
    }
    return fm;
}

TransitionPlan extract_transition_plan(const Instance& inst, const FleetModel& fm,
                                       const SolveResult& res, const CtOptions& opts) {
    TransitionPlan plan;
    for (const auto& fam : inst.families)
        plan.effective_crew[fam.id] = fam.crew_count;
    for (const auto& t : inst.transition) {
        double v = res.value(fm.v.at({t.from, t.to}));
        if (v < 1e-9) v = 0.0;
        plan.v[{t.from, t.to}] = v;
        plan.effective_crew[t.from] -= v;
        plan.effective_crew[t.to] += v;
        double cost = t.cost;
        auto ov = opts.cost_override.find({t.from, t.to});
        if (ov != opts.cost_override.end()) cost = ov->second;
        plan.total_cost += cost * v;
    }
    return plan;
}

double absence_cost(double training_years, double beta, double yearly_cap_per_crew) {
    return training_years * beta * yearly_cap_per_crew;
}

ScenarioQuantile quantile_index(const std::vector<double>& rho, const std::vector<double>& phi,
                                double epsilon, const std::string& family) {
    if (rho.empty() || rho.size() != phi.size())
        throw SolveError("quantile_index: bad scenario data for " + family);
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw SolveError("quantile_index: epsilon outside (0,1)");
    double cum = 0.0;
    for (size_t q = 0; q < rho.size(); ++q) {
        cum += phi[q];
        if (epsilon <= cum) {
            ScenarioQuantile out;
            out.family = family;
            out.q0 = static_cast<int>(q) + 1;
            out.value = rho[q];
            return out;
        }
    }
    // Probabilities sum to one, so the last index always qualifies.
    ScenarioQuantile out;
    out.family = family;
    out.q0 = static_cast<int>(rho.size());
    out.value = rho.back();
    return out;
}

std::map<std::string, double> cu_yearly_rhs(const Instance& inst) {
    std::map<std::string, double> rhs;
    for (const auto& fam : inst.families) {
        UncertaintySpec u = inst.scenario_for(fam.id);
        rhs[fam.id] = quantile_index(u.rho, u.phi, u.epsilon, fam.id).value;
    }
    return rhs;
}

FleetModel build_tfacpp_cu(const Instance& inst, const NetworkSet& nets) {
    FamCoreOptions core;
    auto rhs = cu_yearly_rhs(inst);
    for (size_t bi = 0; bi < inst.families.size(); ++bi)
        core.yearly_rhs_override[static_cast<int>(bi)] = rhs.at(inst.families[bi].id);
    return build_fam_core(inst, nets, core);
}

std::vector<ChanceCheck> monte_carlo_chance_check(
    const Instance& inst, const std::map<std::pair<std::string, std::string>, double>& usage,
    int draws, std::uint64_t seed) {
    std::vector<ChanceCheck> out;
    std::mt19937_64 rng(seed);
    for (const auto& fam : inst.families) {
        double total = 0.0;
        for (const auto& m : inst.months) {
            auto it = usage.find({m, fam.id});
            if (it != usage.end()) total += it->second;
        }
        UncertaintySpec u = inst.scenario_for(fam.id);
        int hits = 0;
        for (int d = 0; d < draws; ++d) {
            double r = (rng() >> 11) * 0x1.0p-53;
            double cum = 0.0;
            double draw = u.rho.back();
            for (size_t q = 0; q < u.rho.size(); ++q) {
                cum += u.phi[q];
                if (r < cum) { draw = u.rho[q]; break; }
            }
            if (total <= draw + 1e-9) ++hits;
        }
        ChanceCheck c;
        c.family = fam.id;
        c.usage = total;
        c.satisfied_prob = static_cast<double>(hits) / draws;
        c.stderr_ = std::sqrt(std::max(c.satisfied_prob * (1 - c.satisfied_prob), 1e-12) /
                              draws);
        c.required = 1.0 - u.epsilon;
        c.ok = c.satisfied_prob >= c.required - 3.0 * c.stderr_;
        out.push_back(c);
    }
    return out;
}

}  // namespace tfacpp
