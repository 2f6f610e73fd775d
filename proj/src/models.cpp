#include "tfacpp/models.hpp"

#include <algorithm>
#include <cmath>

#include "tfacpp/errors.hpp"

namespace tfacpp {

NetworkSet::NetworkSet(const Instance& inst, int count_time) : count_time_(count_time) {
    for (const auto& m : inst.months)
        for (const auto& f : inst.fleet_types)
            nets_.emplace(std::make_pair(m, f.id), build_network(inst, m, f.id, count_time));
}

const TimeSpaceNetwork& NetworkSet::at(const std::string& month,
                                       const std::string& fleet) const {
    auto it = nets_.find({month, fleet});
    if (it == nets_.end()) throw SolveError("no network for " + month + "/" + fleet);
    return it->second;
}

PairingPools build_pairing_pools(const Instance& inst, std::size_t cap) {
    PairingPools pools;
    for (const auto& m : inst.months) {
        for (const auto& fam : inst.families) {
            auto pool = enumerate_pairings(inst, m, fam.id, inst.rules, {}, cap);
            ensure_complete_recourse(pool, inst, m, fam.id);
            pools[{m, fam.id}] = std::move(pool);
        }
    }
    return pools;
}

FleetModel build_fam_core(const Instance& inst, const NetworkSet& nets,
                          const FamCoreOptions& opts) {
    FleetModel fm;
    fm.model.sense = ObjSense::Maximize;
    const std::vector<std::string>& months = opts.months.empty() ? inst.months : opts.months;

    // Assignment and ground-flow variables.
    for (const auto& m : months) {
        for (size_t fi = 0; fi < inst.fleet_types.size(); ++fi) {
            const FleetType& f = inst.fleet_types[fi];
            const TimeSpaceNetwork& net = nets.at(m, f.id);
            for (const auto& arc : net.leg_arcs) {
                double coeff;
                if (opts.obj_coeff) {
                    auto it = opts.obj_coeff->find({arc.leg, static_cast<int>(fi)});
                    coeff = it == opts.obj_coeff->end() ? 0.0 : it->second;
                } else {
                    coeff = leg_profit(inst.legs[arc.leg], f);
                }
                int var = fm.model.add_var("x[" + inst.legs[arc.leg].id + "|" + f.id + "]", 0, 1,
                                           VarKind::Binary, coeff);
                fm.x[{arc.leg, static_cast<int>(fi)}] = var;
            }
            for (size_t g = 0; g < net.ground_arcs.size(); ++g) {
                int var = fm.model.add_var(
                    "y[" + m + "|" + f.id + "|g" + std::to_string(g) + "]", 0, kInf,
                    VarKind::Continuous, 0.0);
                fm.y[{m, static_cast<int>(fi), static_cast<int>(g)}] = var;
            }
        }
    }

    // Cover rows: one per leg across fleet types.
    for (const auto& m : months) {
        for (int li : inst.legs_in_month(m)) {
            int row = fm.model.add_row("cover[" + inst.legs[li].id + "]", opts.cover_sense, 1.0);
            fm.cover_row[li] = row;
            for (size_t fi = 0; fi < inst.fleet_types.size(); ++fi)
                fm.model.add_coeff(row, fm.x.at({li, static_cast<int>(fi)}), 1.0);
        }
    }

    // Flow balance per node and count row per (month, fleet type).
    for (const auto& m : months) {
        for (size_t fi = 0; fi < inst.fleet_types.size(); ++fi) {
            const FleetType& f = inst.fleet_types[fi];
            const TimeSpaceNetwork& net = nets.at(m, f.id);
            for (size_t n = 0; n < net.nodes.size(); ++n) {
                int row = fm.model.add_row(
                    "bal[" + m + "|" + f.id + "|n" + std::to_string(n) + "]", RowSense::EQ, 0.0);
                const NodeAdjacency& adj = net.adjacency(static_cast<int>(n));
                for (int a : adj.legs_out)
                    fm.model.add_coeff(row, fm.x.at({net.leg_arcs[a].leg, static_cast<int>(fi)}),
                                       1.0);
                for (int a : adj.legs_in)
                    fm.model.add_coeff(row, fm.x.at({net.leg_arcs[a].leg, static_cast<int>(fi)}),
                                       -1.0);
                for (int g : adj.ground_out) {
                    // A single-node wraparound contributes to both sides.
                    fm.model.add_coeff(row, fm.y.at({m, static_cast<int>(fi), g}), 1.0);
                }
                for (int g : adj.ground_in)
                    fm.model.add_coeff(row, fm.y.at({m, static_cast<int>(fi), g}), -1.0);
            }
            int crow = fm.model.add_row("count[" + m + "|" + f.id + "]", RowSense::LE,
                                        f.aircraft_count);
            fm.count_row[{m, static_cast<int>(fi)}] = crow;
            for (int a : net.leg_crossers)
                fm.model.add_coeff(crow, fm.x.at({net.leg_arcs[a].leg, static_cast<int>(fi)}),
                                   1.0);
            for (int g : net.ground_crossers)
                fm.model.add_coeff(crow, fm.y.at({m, static_cast<int>(fi), g}), 1.0);
        }
    }

    // Leg-based crew budget rows.
    if (opts.monthly_budget_rows) {
        for (const auto& m : months) {
            for (size_t bi = 0; bi < inst.families.size(); ++bi) {
                const FleetFamily& fam = inst.families[bi];
                double rhs = family_time_budget(fam).monthly.at(m);
                auto ov = opts.monthly_rhs_override.find({m, fam.id});
                if (ov != opts.monthly_rhs_override.end()) rhs = ov->second;
                int row = fm.model.add_row("mon[" + m + "|" + fam.id + "]", RowSense::LE, rhs);
                fm.monthly_row[{m, static_cast<int>(bi)}] = row;
                for (int li : inst.legs_in_month(m)) {
                    double t = inst.leg_family_hours(inst.legs[li], fam.id);
                    for (const auto& ftid : fam.fleet_type_ids) {
                        int fi = inst.fleet_index(ftid);
                        fm.model.add_coeff(row, fm.x.at({li, fi}), t);
                    }
                }
            }
        }
    }
    if (opts.yearly_budget_row) {
        for (size_t bi = 0; bi < inst.families.size(); ++bi) {
            const FleetFamily& fam = inst.families[bi];
            double rhs = family_time_budget(fam).yearly;
            auto ov = opts.yearly_rhs_override.find(static_cast<int>(bi));
            if (ov != opts.yearly_rhs_override.end()) rhs = ov->second;
            int row = fm.model.add_row("yr[" + fam.id + "]", RowSense::LE, rhs);
            fm.yearly_row[static_cast<int>(bi)] = row;
            for (const auto& m : months) {
                for (int li : inst.legs_in_month(m)) {
                    double t = inst.leg_family_hours(inst.legs[li], fam.id);
                    for (const auto& ftid : fam.fleet_type_ids) {
                        int fi = inst.fleet_index(ftid);
                        fm.model.add_coeff(row, fm.x.at({li, fi}), t);
                    }
                }
            }
        }
    }

    // Crew-cost surrogates: eta >= 0 enters the objective as -eta, and each
    // cut bounds it from below by its omega-weighted assignment.
    if (opts.with_eta) {
        for (const auto& m : months) {
            for (size_t bi = 0; bi < inst.families.size(); ++bi) {
                int var = fm.model.add_var("eta[" + m + "|" + inst.families[bi].id + "]", 0,
                                           kInf, VarKind::Continuous, -1.0);
                fm.eta[{m, static_cast<int>(bi)}] = var;
            }
        }
        if (opts.cuts) {
            int serial = 0;
            for (const BendersCut& cut : *opts.cuts) {
                if (std::find(months.begin(), months.end(), cut.month) == months.end())
                    continue;
                int bi = inst.family_index(cut.family);
                int row = fm.model.add_row(
                    "cut" + std::to_string(++serial) + "[" + cut.month + "|" + cut.family + "]",
                    RowSense::GE, 0.0);
                fm.model.add_coeff(row, fm.eta.at({cut.month, bi}), 1.0);
                const FleetFamily& fam = inst.families[bi];
                for (const auto& [li, omega] : cut.omega) {
                    if (omega == 0.0) continue;
                    for (const auto& ftid : fam.fleet_type_ids) {
                        int fi = inst.fleet_index(ftid);
                        fm.model.add_coeff(row, fm.x.at({li, fi}), -omega);
                    }
                }
            }
        }
    }
    return fm;
}

FleetModel build_fam(const Instance& inst, const NetworkSet& nets, const std::string& month) {
    FamCoreOptions opts;
    opts.months = {month};
    opts.monthly_budget_rows = false;
    opts.yearly_budget_row = false;
    return build_fam_core(inst, nets, opts);
}

namespace {

// Adds pairing variables, their costs, and per-(month, leg, family) linking
// rows to a fleet core. When budgets_in_pairing_form is set, the monthly and
// yearly crew rows are built from pairing flight times instead of leg form.
void add_pairing_block(FleetModel& fm, const Instance& inst, const PairingPools& pools,
                       bool budgets_in_pairing_form) {
    std::map<std::pair<std::string, int>, int> monthly_z_row;
    std::map<int, int> yearly_z_row;
    if (budgets_in_pairing_form) {
        for (const auto& m : inst.months)
            for (size_t bi = 0; bi < inst.families.size(); ++bi) {
                double rhs = family_time_budget(inst.families[bi]).monthly.at(m);
                monthly_z_row[{m, static_cast<int>(bi)}] = fm.model.add_row(
                    "monz[" + m + "|" + inst.families[bi].id + "]", RowSense::LE, rhs);
                fm.monthly_row[{m, static_cast<int>(bi)}] =
                    monthly_z_row[{m, static_cast<int>(bi)}];
            }
        for (size_t bi = 0; bi < inst.families.size(); ++bi) {
            double rhs = family_time_budget(inst.families[bi]).yearly;
            yearly_z_row[static_cast<int>(bi)] = fm.model.add_row(
                "yrz[" + inst.families[bi].id + "]", RowSense::LE, rhs);
            fm.yearly_row[static_cast<int>(bi)] = yearly_z_row[static_cast<int>(bi)];
        }
    }

    for (const auto& m : inst.months) {
        for (size_t bi = 0; bi < inst.families.size(); ++bi) {
            const FleetFamily& fam = inst.families[bi];
            auto pit = pools.find({m, fam.id});
            if (pit == pools.end())
                throw SolveError("missing pairing pool for " + m + "/" + fam.id);
            const auto& pool = pit->second;
            auto& zvars = fm.z[{m, static_cast<int>(bi)}];
            for (const auto& p : pool)
                zvars.push_back(fm.model.add_var("z[" + p.id + "]", 0, 1, VarKind::Binary,
                                                 -p.cost));
            // Linking rows: pairings covering l equal the family's share of l.
            for (int li : inst.legs_in_month(m)) {
                int row = fm.model.add_row(
                    "link[" + inst.legs[li].id + "|" + fam.id + "]", RowSense::EQ, 0.0);
                fm.link_row[{li, static_cast<int>(bi)}] = row;
                for (size_t p = 0; p < pool.size(); ++p)
                    if (pool[p].covers(li)) fm.model.add_coeff(row, zvars[p], 1.0);
                for (const auto& ftid : fam.fleet_type_ids)
                    fm.model.add_coeff(row, fm.x.at({li, inst.fleet_index(ftid)}), -1.0);
            }
            if (budgets_in_pairing_form) {
                for (size_t p = 0; p < pool.size(); ++p) {
                    fm.model.add_coeff(monthly_z_row.at({m, static_cast<int>(bi)}), zvars[p],
                                       pool[p].flight_time);
                    fm.model.add_coeff(yearly_z_row.at(static_cast<int>(bi)), zvars[p],
                                       pool[p].flight_time);
                }
            }
        }
    }
}

}  // namespace

FleetModel build_tfacpp_pairing(const Instance& inst, const NetworkSet& nets,
                                const PairingPools& pools) {
    FamCoreOptions opts;
    opts.monthly_budget_rows = false;
    opts.yearly_budget_row = false;
    FleetModel fm = build_fam_core(inst, nets, opts);
    add_pairing_block(fm, inst, pools, /*budgets_in_pairing_form=*/true);
    return fm;
}

FleetModel build_bim_legbased(const Instance& inst, const NetworkSet& nets,
                              const PairingPools* pools, bool pure) {
    FamCoreOptions opts;
    FleetModel fm = build_fam_core(inst, nets, opts);
    if (!pure) {
        if (!pools) throw SolveError("leg-based model with pairings requires pools");
        add_pairing_block(fm, inst, *pools, /*budgets_in_pairing_form=*/false);
    }
    return fm;
}

FleetModel build_monolithic_bmp(const Instance& inst, const NetworkSet& nets,
                                const std::vector<BendersCut>& cuts) {
    FamCoreOptions opts;
    opts.with_eta = true;
    opts.cuts = &cuts;
    return build_fam_core(inst, nets, opts);
}

Solution extract_solution(const Instance& inst, const FleetModel& fm, const SolveResult& res,
                          const PairingPools* pools) {
    Solution sol;
    sol.status = res.status;
    sol.objective = res.objective;
    if (res.status != SolveStatus::Optimal) return sol;
    for (const auto& [key, var] : fm.x) {
        if (res.value(var) > 0.5)
            sol.assignment[inst.legs[key.first].id] = inst.fleet_types[key.second].id;
    }
    sol.crew_time_used = crew_usage_of_assignment(inst, sol.assignment);
    for (const auto& [key, var] : fm.y) {
        double v = res.value(var);
        if (v > 1e-9)
            sol.ground_flows[{std::get<0>(key),
                              inst.fleet_types[std::get<1>(key)].id + "#g" +
                                  std::to_string(std::get<2>(key))}] = v;
    }
    if (pools) {
        for (const auto& [key, zvars] : fm.z) {
            const auto& pool = pools->at({key.first, inst.families[key.second].id});
            for (size_t p = 0; p < zvars.size(); ++p) {
                double w = res.value(zvars[p]);
                if (w < 1e-9) continue;
                Solution::PickedPairing pick;
                pick.month = key.first;
                pick.family = inst.families[key.second].id;
                for (int li : pool[p].legs) pick.leg_ids.push_back(inst.legs[li].id);
                pick.cost = pool[p].cost;
                pick.weight = w;
                sol.pairings.push_back(std::move(pick));
            }
        }
    }
    return sol;
}

std::map<std::pair<std::string, std::string>, double> crew_usage_of_assignment(
    const Instance& inst, const std::map<std::string, std::string>& assignment) {
    std::map<std::pair<std::string, std::string>, double> used;
    for (const auto& m : inst.months)
        for (const auto& fam : inst.families) used[{m, fam.id}] = 0.0;
    for (const auto& [leg_id, fleet_id] : assignment) {
        const FlightLeg& l = inst.legs[inst.leg_index(leg_id)];
        const FleetFamily& fam = inst.family_of_type(fleet_id);
        used[{l.month, fam.id}] += inst.leg_family_hours(l, fam.id);
    }
    return used;
}

}  // namespace tfacpp
