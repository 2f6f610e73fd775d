// Command-line front end: instance generation, the integrated solve modes,
// the equal-allocation baseline, and shadow-price analytics.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "tfacpp/analysis.hpp"
#include "tfacpp/benders.hpp"
#include "tfacpp/colgen.hpp"
#include "tfacpp/errors.hpp"
#include "tfacpp/extensions.hpp"
#include "tfacpp/models.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace tfacpp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIterationCap = 3;
constexpr int kExitInfeasible = 4;

struct CommonFlags {
    std::string instance_path;
    std::string out;
    std::uint64_t seed = 0;
    int threads = 1;
    double tol = 1e-6;
    std::string demand = "mid";
    int count_time = 180;
};

Instance load_with_demand(const CommonFlags& flags) {
    Instance inst = load_instance(flags.instance_path);
    return perturb_demand(inst, demand_level_from_string(flags.demand), flags.seed);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    out << text;
}

template <typename Fn>
void write_csv(const fs::path& path, Fn&& fn) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path.string());
    fn(out);
}

ordered_json solution_to_json(const Solution& sol, const Instance& inst,
                              const std::string& mode, const CommonFlags& flags,
                              double lp_objective) {
    ordered_json j;
    j["mode"] = mode;
    j["status"] = to_string(sol.status);
    j["hit_iteration_cap"] = sol.hit_iteration_cap;
    j["objective"] = sol.objective;
    j["lp_objective"] = lp_objective;
    j["demand"] = flags.demand;
    j["seed"] = flags.seed;
    ordered_json assign;
    for (const auto& [leg, fleet] : sol.assignment) assign[leg] = fleet;
    j["assignment"] = assign;
    ordered_json used;
    for (const auto& m : inst.months) {
        ordered_json row;
        for (const auto& fam : inst.families) {
            auto it = sol.crew_time_used.find({m, fam.id});
            row[fam.id] = it == sol.crew_time_used.end() ? 0.0 : it->second;
        }
        used[m] = row;
    }
    j["crew_time_used"] = used;
    if (sol.has_duals) {
        ordered_json duals;
        ordered_json alpha, beta, gamma;
        for (const auto& [m, v] : sol.alpha) alpha[m] = v;
        for (const auto& [b, v] : sol.beta) beta[b] = v;
        for (const auto& m : inst.months) {
            ordered_json row;
            for (const auto& f : inst.fleet_types) {
                auto it = sol.gamma.find({m, f.id});
                row[f.id] = it == sol.gamma.end() ? 0.0 : it->second;
            }
            gamma[m] = row;
        }
        duals["alpha"] = alpha;
        duals["beta"] = beta;
        duals["gamma"] = gamma;
        j["duals"] = duals;
    }
    if (!sol.pairings.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& p : sol.pairings) {
            ordered_json e;
            e["month"] = p.month;
            e["family"] = p.family;
            e["legs"] = p.leg_ids;
            e["cost"] = p.cost;
            e["weight"] = p.weight;
            arr.push_back(e);
        }
        j["pairings"] = arr;
    }
    return j;
}

Solution solution_from_json(const ordered_json& j) {
    Solution sol;
    sol.objective = j.at("objective").get<double>();
    sol.hit_iteration_cap = j.value("hit_iteration_cap", false);
    sol.status = SolveStatus::Optimal;
    for (auto it = j.at("assignment").begin(); it != j.at("assignment").end(); ++it)
        sol.assignment[it.key()] = it.value().get<std::string>();
    for (auto mt = j.at("crew_time_used").begin(); mt != j.at("crew_time_used").end(); ++mt)
        for (auto bt = mt.value().begin(); bt != mt.value().end(); ++bt)
            sol.crew_time_used[{mt.key(), bt.key()}] = bt.value().get<double>();
    if (j.contains("duals")) {
        sol.has_duals = true;
        const auto& duals = j["duals"];
        for (auto it = duals.at("alpha").begin(); it != duals.at("alpha").end(); ++it)
            sol.alpha[it.key()] = it.value().get<double>();
        for (auto it = duals.at("beta").begin(); it != duals.at("beta").end(); ++it)
            sol.beta[it.key()] = it.value().get<double>();
        for (auto mt = duals.at("gamma").begin(); mt != duals.at("gamma").end(); ++mt)
            for (auto ft = mt.value().begin(); ft != mt.value().end(); ++ft)
                sol.gamma[{mt.key(), ft.key()}] = ft.value().get<double>();
    }
    return sol;
}

void dump_networks(const Instance& inst, const NetworkSet& nets, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& m : inst.months)
        for (const auto& f : inst.fleet_types) {
            std::ofstream out(dir / (m + "_" + f.id + ".dot"));
            write_dot(nets.at(m, f.id), inst, out);
        }
}

int cmd_generate(const CommonFlags& flags, const SynthDims& dims) {
    Instance inst = generate_synthetic(flags.seed, dims);
    save_instance(inst, flags.out);
    std::cout << "wrote " << flags.out << " (" << inst.legs.size() << " legs, "
              << inst.months.size() << " months)\n";
    return kExitOk;
}

int cmd_solve(const CommonFlags& flags, const std::string& mode, bool dump_network,
              const std::string& pool_path, const std::string& export_pool_path,
              double markup) {
    Instance inst = load_with_demand(flags);
    NetworkSet nets(inst, flags.count_time);
    fs::create_directories(flags.out);
    if (dump_network) dump_networks(inst, nets, fs::path(flags.out) / "networks");
    if (!export_pool_path.empty()) {
        PairingPools pools = build_pairing_pools(inst);
        std::vector<Pairing> flat;
        for (const auto& [key, pool] : pools)
            flat.insert(flat.end(), pool.begin(), pool.end());
        save_pool(flat, inst, export_pool_path);
    }

    Solution sol;
    double lp_objective = 0.0;

    if (mode == "colgen") {
        CgOptions opts;
        opts.tol = flags.tol;
        opts.threads = flags.threads;
        CgState st = run_colgen(inst, nets, {}, opts);
        lp_objective = st.lp_objective;
        write_csv(fs::path(flags.out) / "convergence.csv",
                  [&](std::ostream& o) { write_cg_trace_csv(st, o); });
        write_csv(fs::path(flags.out) / "colgen_summary.csv",
                  [&](std::ostream& o) { write_cg_summary_csv(st, o); });
        if (!st.converged) {
            std::cerr << "column generation hit its iteration cap\n";
            return kExitIterationCap;
        }
        FinishOutcome fin = mip_finish(st, inst, nets, {}, opts);
        sol = fin.solution;
        write_csv(fs::path(flags.out) / "finishing.csv",
                  [&](std::ostream& o) { write_finish_csv(fin.rows, o); });
    } else if (mode == "benders-exact" || mode == "benders-empirical") {
        PairingPools pools = build_pairing_pools(inst);
        BendersOptions opts;
        opts.mode = mode == "benders-exact" ? BendersMode::Exact : BendersMode::Empirical;
        opts.tol = flags.tol;
        opts.threads = flags.threads;
        opts.markup = markup;
        PairingPools historical;
        if (!pool_path.empty()) {
            auto hist_pool = load_pool(pool_path, inst);
            for (auto& p : hist_pool) historical[{p.month, p.family_id}].push_back(p);
            opts.historical = &historical;
        }
        BendersOutcome out = benders_loop(inst, nets, pools, opts);
        sol = out.solution;
        lp_objective = out.upper_bound;
        write_csv(fs::path(flags.out) / "benders_trace.csv",
                  [&](std::ostream& o) { write_benders_trace_csv(out.trace, o); });
        if (sol.status == SolveStatus::Infeasible) {
            std::cerr << "instance is infeasible\n";
            return kExitInfeasible;
        }
        if (!out.converged) {
            std::cerr << "stopped at the iteration cap; best bound " << out.upper_bound
                      << "\n";
            write_text(fs::path(flags.out) / "solution.json",
                       solution_to_json(sol, inst, mode, flags, lp_objective).dump(2) + "\n");
            return kExitIterationCap;
        }
    } else if (mode == "monolithic") {
        PairingPools pools = build_pairing_pools(inst);
        FleetModel fm = build_tfacpp_pairing(inst, nets, pools);
        SolveResult res = solve_mip(fm.model, MipOptions{1e-4, 600.0, 2000000});
        if (res.status == SolveStatus::Infeasible) {
            std::cerr << "instance is infeasible\n";
            return kExitInfeasible;
        }
        if (res.status == SolveStatus::Limit) {
            std::cerr << "monolithic solve hit its node or time limit\n";
            return kExitIterationCap;
        }
        sol = extract_solution(inst, fm, res, &pools);
        lp_objective = solve_lp(fm.model).objective;
    } else {
        std::cerr << "unknown mode: " << mode << "\n";
        return kExitUsage;
    }

    write_text(fs::path(flags.out) / "solution.json",
               solution_to_json(sol, inst, mode, flags, lp_objective).dump(2) + "\n");
    write_csv(fs::path(flags.out) / "allocation.csv", [&](std::ostream& o) {
        write_allocation_csv(allocation_report(sol, inst), o);
    });
    std::cout << "mode " << mode << ": objective " << sol.objective << "\n";
    return kExitOk;
}

int cmd_eam(const CommonFlags& flags) {
    Instance inst = load_with_demand(flags);
    NetworkSet nets(inst, flags.count_time);
    EamResult eam = eam_baseline(inst, nets, {});
    fs::create_directories(flags.out);
    write_csv(fs::path(flags.out) / "eam.csv", [&](std::ostream& o) {
        o << "month,objective\n";
        for (const auto& [m, v] : eam.month_objective) o << m << "," << v << "\n";
        o << "\nprofit," << eam.profit << "\n";
    });
    std::cout << "equal-allocation profit " << eam.profit << "\n";
    return kExitOk;
}

int cmd_analyze(const CommonFlags& flags, const std::string& solve_dir, double gamma0,
                double beta0) {
    Instance inst = load_with_demand(flags);
    fs::path sol_path = fs::path(solve_dir) / "solution.json";
    std::ifstream in(sol_path);
    if (!in) throw ParseError("cannot open " + sol_path.string() + "; run solve first");
    ordered_json j = ordered_json::parse(in);
    Solution sol = solution_from_json(j);

    MarginalProfitReport report = marginal_profits(sol, inst);  // throws without duals
    fs::create_directories(flags.out);
    write_csv(fs::path(flags.out) / "marginal.csv",
              [&](std::ostream& o) { write_marginal_csv(report, inst, o); });
    write_csv(fs::path(flags.out) / "quadrant.csv", [&](std::ostream& o) {
        write_quadrant_csv(quadrant_grouping(report, inst, gamma0, beta0), o);
    });

    NetworkSet nets(inst, flags.count_time);
    EamResult eam = eam_baseline(inst, nets, {});
    double cgmp_profit = j.value("lp_objective", sol.objective);
    write_csv(fs::path(flags.out) / "eam_comparison.csv",
              [&](std::ostream& o) { write_eam_comparison_csv(eam, cgmp_profit, o); });
    std::cout << "analysis written to " << flags.out << "\n";
    return kExitOk;
}

int cmd_benders_trace(const CommonFlags& flags, const std::string& mode, double markup) {
    Instance inst = load_with_demand(flags);
    NetworkSet nets(inst, flags.count_time);
    PairingPools pools = build_pairing_pools(inst);
    BendersOptions opts;
    opts.mode = mode == "empirical" ? BendersMode::Empirical : BendersMode::Exact;
    opts.tol = flags.tol;
    opts.threads = flags.threads;
    opts.markup = markup;
    BendersOutcome out = benders_loop(inst, nets, pools, opts);
    fs::create_directories(flags.out);
    write_csv(fs::path(flags.out) / "benders_trace.csv",
              [&](std::ostream& o) { write_benders_trace_csv(out.trace, o); });
    std::cout << (out.converged ? "converged" : "iteration cap") << "; bound "
              << out.upper_bound << "\n";
    return out.converged ? kExitOk : kExitIterationCap;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tactical fleet assignment and crew pairing with crew flight time allocation"};
    app.require_subcommand(1);

    CommonFlags flags;
    SynthDims dims;
    std::string mode = "colgen";
    std::string pool_path;
    std::string export_pool_path;
    std::string solve_dir;
    std::string trace_mode = "exact";
    double gamma0 = 0.0, beta0 = 0.0, markup = 1.0;
    bool dump_network = false;

    auto add_common = [&](CLI::App* cmd, bool needs_instance) {
        if (needs_instance)
            cmd->add_option("--instance", flags.instance_path, "instance JSON file")
                ->required();
        cmd->add_option("--out", flags.out, "output file or directory")->required();
        cmd->add_option("--seed", flags.seed, "random seed");
        cmd->add_option("--threads", flags.threads, "worker threads for pricing/subproblems");
        cmd->add_option("--tol", flags.tol, "convergence tolerance");
        cmd->add_option("--demand", flags.demand, "demand level: high|mid|low")
            ->check(CLI::IsMember({"high", "mid", "low"}));
        cmd->add_option("--count-time", flags.count_time,
                        "count timeline in minutes of day");
    };

    CLI::App* gen = app.add_subcommand("generate", "write a synthetic instance");
    add_common(gen, false);
    gen->add_option("--stations", dims.stations);
    gen->add_option("--families", dims.families);
    gen->add_option("--fleet-types", dims.fleet_types);
    gen->add_option("--legs", dims.legs_per_month, "legs per month");
    gen->add_option("--months", dims.months);

    CLI::App* solve = app.add_subcommand("solve", "solve the integrated problem");
    add_common(solve, true);
    solve->add_option("--mode", mode,
                      "monolithic | benders-exact | benders-empirical | colgen")
        ->check(CLI::IsMember({"monolithic", "benders-exact", "benders-empirical", "colgen"}));
    solve->add_flag("--dump-network", dump_network, "write DOT files of the networks");
    solve->add_option("--pool", pool_path, "historical pairing pool (empirical cuts)");
    solve->add_option("--export-pool", export_pool_path,
                      "write the enumerated pairing pools to a JSON file");
    solve->add_option("--markup", markup, "empirical dual markup factor");

    CLI::App* eam = app.add_subcommand("eam", "equal-allocation baseline");
    add_common(eam, true);

    CLI::App* analyze = app.add_subcommand("analyze", "shadow-price analytics");
    add_common(analyze, true);
    analyze->add_option("--solve-dir", solve_dir, "directory written by solve")->required();
    analyze->add_option("--gamma0", gamma0, "aircraft marginal-profit threshold");
    analyze->add_option("--beta0", beta0, "crew marginal-profit threshold");

    CLI::App* trace = app.add_subcommand("benders-trace", "run the loop, write the trace");
    add_common(trace, true);
    trace->add_option("--mode", trace_mode, "exact | empirical")
        ->check(CLI::IsMember({"exact", "empirical"}));
    trace->add_option("--markup", markup, "empirical dual markup factor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints help or the parse diagnostic
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(flags, dims);
        if (solve->parsed())
            return cmd_solve(flags, mode, dump_network, pool_path, export_pool_path, markup);
        if (eam->parsed()) return cmd_eam(flags);
        if (analyze->parsed()) return cmd_analyze(flags, solve_dir, gamma0, beta0);
        if (trace->parsed()) return cmd_benders_trace(flags, trace_mode, markup);
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
