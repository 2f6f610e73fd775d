#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "tfacpp/errors.hpp"
#include "tfacpp/models.hpp"

using namespace tfacpp;

namespace {

// One closed-loop leg BAS->BAS so a lone leg admits a circulation.
Instance same_station_leg_instance(double cost1 = 100, double cost2 = 200) {
    Instance inst = testutil::skeleton(1);
    testutil::add_leg(inst, "L1", "M01", "BAS", "BAS", 480, 600, 30, 100, 1000);
    inst.fleet_types[0].operating_cost["L1"] = cost1;
    inst.fleet_types[1].operating_cost["L1"] = cost2;
    inst.fleet_types[2].operating_cost["L1"] = 500000;  // keep FAMB out
    inst.validate();
    return inst;
}

Instance single_family_instance() {
    Instance inst;
    inst.months = {"M01"};
    inst.stations = {"BAS", "AAA"};
    FleetFamily fam;
    fam.id = "FAMA";
    fam.crew_count = 50;  // generous
    fam.yearly_cap_per_crew = 1000.0;
    fam.monthly_cap_per_crew["M01"] = 100.0;
    fam.fleet_type_ids = {"FAMA-1", "FAMA-2"};
    inst.families = {fam};
    FleetType f1;
    f1.id = "FAMA-1";
    f1.family_id = "FAMA";
    f1.seats = 150;
    f1.aircraft_count = 3;
    f1.min_turn_time = 45;
    FleetType f2 = f1;
    f2.id = "FAMA-2";
    f2.seats = 120;
    inst.fleet_types = {f1, f2};
    inst.rules.crew_bases = {"BAS"};
    inst.rules.max_duty_span = 14.0;
    inst.rules.max_duty_flight_hours = 10.0;
    inst.crew_cost.pay_rate = 400;
    inst.crew_cost.min_guarantee = 1000;
    testutil::add_leg(inst, "L1", "M01", "BAS", "AAA", 480, 600);
    testutil::add_leg(inst, "L2", "M01", "AAA", "BAS", 690, 810);
    testutil::finish(inst);
    return inst;
}

// Minimum aircraft needed by one fleet type to fly its assigned legs, or
// a negative value when no circulation exists.
double min_aircraft_for(const TimeSpaceNetwork& net,
                        const std::set<int>& assigned_legs) {
    LinearModel m;
    m.sense = ObjSense::Minimize;
    std::vector<int> yvar;
    for (size_t g = 0; g < net.ground_arcs.size(); ++g)
        yvar.push_back(m.add_var("y" + std::to_string(g), 0, kInf, VarKind::Continuous, 0.0));
    std::vector<bool> ground_crosses(net.ground_arcs.size(), false);
    for (int g : net.ground_crossers) {
        ground_crosses[g] = true;
        m.vars()[yvar[g]].obj = 1.0;
    }
    double fixed_crossings = 0.0;
    std::vector<bool> leg_crosses(net.leg_arcs.size(), false);
    for (int a : net.leg_crossers) leg_crosses[a] = true;

    for (size_t n = 0; n < net.nodes.size(); ++n) {
        const NodeAdjacency& adj = net.adjacency(static_cast<int>(n));
        double rhs = 0.0;
        for (int a : adj.legs_out)
            if (assigned_legs.count(net.leg_arcs[a].leg)) rhs -= 1.0;
        for (int a : adj.legs_in)
            if (assigned_legs.count(net.leg_arcs[a].leg)) rhs += 1.0;
        int row = m.add_row("bal" + std::to_string(n), RowSense::EQ, rhs);
        for (int g : adj.ground_out) m.add_coeff(row, yvar[g], 1.0);
        for (int g : adj.ground_in) m.add_coeff(row, yvar[g], -1.0);
    }
    for (size_t a = 0; a < net.leg_arcs.size(); ++a)
        if (leg_crosses[a] && assigned_legs.count(net.leg_arcs[a].leg)) fixed_crossings += 1.0;

    SolveResult res = solve_lp(m);
    if (res.status != SolveStatus::Optimal) return -1.0;
    return res.objective + fixed_crossings;
}

// Exhaustive oracle over every full assignment of legs to fleet types.
double brute_force_fam(const Instance& inst, const NetworkSet& nets, const std::string& month) {
    const auto& legs = inst.legs_in_month(month);
    int n = static_cast<int>(legs.size());
    int t = static_cast<int>(inst.fleet_types.size());
    double best = -1e300;
    std::vector<int> choice(n, 0);
    long combos = 1;
    for (int i = 0; i < n; ++i) combos *= t;
    for (long code = 0; code < combos; ++code) {
        long c = code;
        double profit = 0.0;
        std::vector<std::set<int>> per_type(t);
        for (int i = 0; i < n; ++i) {
            choice[i] = static_cast<int>(c % t);
            c /= t;
            per_type[choice[i]].insert(legs[i]);
            profit += leg_profit(inst.legs[legs[i]], inst.fleet_types[choice[i]]);
        }
        bool ok = true;
        for (int f = 0; f < t && ok; ++f) {
            if (per_type[f].empty()) continue;
            double need = min_aircraft_for(nets.at(month, inst.fleet_types[f].id),
                                           per_type[f]);
            ok = need >= 0 && need <= inst.fleet_types[f].aircraft_count + 1e-9;
        }
        if (ok) best = std::max(best, profit);
    }
    return best;
}

}  // namespace

TEST_CASE("FAM assigns a lone closed-loop leg") {
    Instance inst = same_station_leg_instance();
    NetworkSet nets(inst, 180);
    FleetModel fm = build_fam(inst, nets, "M01");
    SolveResult res = solve_mip(fm.model);
    REQUIRE(res.status == SolveStatus::Optimal);
    double expected = leg_profit(inst.legs[0], inst.fleet_types[0]);
    CHECK(res.objective == doctest::Approx(expected));
    CHECK(res.value(fm.x.at({0, 0})) == doctest::Approx(1.0));
}

TEST_CASE("FAM picks the more profitable fleet type") {
    Instance inst = same_station_leg_instance(100, 200);  // type 1 cheaper
    NetworkSet nets(inst, 180);
    FleetModel fm = build_fam(inst, nets, "M01");
    SolveResult res = solve_mip(fm.model);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.value(fm.x.at({0, 0})) == doctest::Approx(1.0));
    CHECK(res.value(fm.x.at({0, 1})) == doctest::Approx(0.0));
}

TEST_CASE("FAM MIP matches brute force over all assignments") {
    Instance inst = testutil::two_loop_instance();
    NetworkSet nets(inst, 180);
    FleetModel fm = build_fam(inst, nets, "M01");
    SolveResult mip = solve_mip(fm.model, MipOptions{1e-9, 60.0, 200000});
    REQUIRE(mip.status == SolveStatus::Optimal);
    double oracle = brute_force_fam(inst, nets, "M01");
    CHECK(mip.objective == doctest::Approx(oracle).epsilon(1e-9));

    SolveResult lp = solve_lp(fm.model);
    CHECK(lp.objective >= mip.objective - 1e-7);  // relaxation bound
}

TEST_CASE("integral assignments force integral ground flows") {
    Instance inst = testutil::two_loop_instance();
    NetworkSet nets(inst, 180);
    FleetModel fm = build_fam(inst, nets, "M01");
    SolveResult res = solve_mip(fm.model, MipOptions{1e-9, 60.0, 200000});
    REQUIRE(res.status == SolveStatus::Optimal);
    for (const auto& [key, var] : fm.y) {
        double v = res.value(var);
        CHECK(std::abs(v - std::round(v)) <= 1e-7);
    }
}

TEST_CASE("cover, balance and count hold in extracted solutions") {
    Instance inst = testutil::two_loop_instance();
    NetworkSet nets(inst, 180);
    FleetModel fm = build_fam(inst, nets, "M01");
    SolveResult res = solve_mip(fm.model);
    REQUIRE(res.status == SolveStatus::Optimal);
    Solution sol = extract_solution(inst, fm, res, nullptr);
    CHECK(sol.assignment.size() == inst.legs.size());  // each leg exactly once
    for (const auto& [key, row] : fm.count_row) {
        double activity = 0.0;
        for (const auto& [var, coeff] : fm.model.row(row).coeffs)
            activity += coeff * res.value(var);
        CHECK(activity <= fm.model.row(row).rhs + 1e-7);
    }
}

TEST_CASE("FAM optimum is invariant to the count time") {
    for (std::uint64_t seed : {21ull, 22ull}) {
        Instance inst = generate_synthetic(seed, SynthDims{4, 2, 3, 8, 1});
        NetworkSet nets_a(inst, 180);
        NetworkSet nets_b(inst, 600);
        FleetModel fa = build_fam(inst, nets_a, "M01");
        FleetModel fb = build_fam(inst, nets_b, "M01");
        SolveResult ra = solve_mip(fa.model, MipOptions{1e-9, 120.0, 400000});
        SolveResult rb = solve_mip(fb.model, MipOptions{1e-9, 120.0, 400000});
        REQUIRE(ra.status == SolveStatus::Optimal);
        REQUIRE(rb.status == SolveStatus::Optimal);
        CHECK(ra.objective == doctest::Approx(rb.objective).epsilon(1e-9));
    }
}

TEST_CASE("zero crew budget makes the integrated model infeasible") {
    Instance inst = testutil::loop_instance();
    for (auto& fam : inst.families) fam.crew_count = 0;
    inst.validate();
    NetworkSet nets(inst, 180);
    PairingPools pools = build_pairing_pools(inst);
    FleetModel fm = build_tfacpp_pairing(inst, nets, pools);
    SolveResult res = solve_mip(fm.model);
    CHECK(res.status == SolveStatus::Infeasible);
}

TEST_CASE("one family, generous budgets: profit splits into FAM minus crew cost") {
    Instance inst = single_family_instance();
    NetworkSet nets(inst, 180);
    PairingPools pools = build_pairing_pools(inst);

    FleetModel integrated = build_tfacpp_pairing(inst, nets, pools);
    SolveResult ri = solve_mip(integrated.model, MipOptions{1e-9, 60.0, 200000});
    REQUIRE(ri.status == SolveStatus::Optimal);

    FleetModel fam_only = build_fam(inst, nets, "M01");
    SolveResult rf = solve_mip(fam_only.model, MipOptions{1e-9, 60.0, 200000});
    REQUIRE(rf.status == SolveStatus::Optimal);

    // Every leg belongs to the single family, so the crew partition is the
    // cheapest exact cover of all legs regardless of the assignment.
    std::vector<Pairing> pool = pools.at({"M01", "FAMA"});
    std::vector<int> all_legs = inst.legs_in_month("M01");
    CppSolution crew = solve_cpp(pool, all_legs, /*relax=*/false);
    REQUIRE(crew.status == SolveStatus::Optimal);

    CHECK(ri.objective == doctest::Approx(rf.objective - crew.objective).epsilon(1e-9));
}

TEST_CASE("objective is invariant under family relabeling") {
    // Symmetric families: identical crew, caps, seats, counts and costs.
    Instance inst;
    inst.months = {"M01"};
    inst.stations = {"BAS", "AAA"};
    for (int b = 0; b < 2; ++b) {
        FleetFamily fam;
        fam.id = b == 0 ? "FAMA" : "FAMB";
        fam.crew_count = 3;
        fam.yearly_cap_per_crew = 1000.0;
        fam.monthly_cap_per_crew["M01"] = 100.0;
        fam.fleet_type_ids = {fam.id + "-1"};
        inst.families.push_back(fam);
        FleetType f;
        f.id = fam.id + "-1";
        f.family_id = fam.id;
        f.seats = 150;
        f.aircraft_count = 2;
        f.min_turn_time = 45;
        inst.fleet_types.push_back(f);
    }
    inst.rules.crew_bases = {"BAS"};
    inst.crew_cost.pay_rate = 400;
    inst.crew_cost.min_guarantee = 1000;
    testutil::add_leg(inst, "L1", "M01", "BAS", "AAA", 480, 600);
    testutil::add_leg(inst, "L2", "M01", "AAA", "BAS", 690, 810);
    testutil::finish(inst);

    NetworkSet nets(inst, 180);
    PairingPools pools = build_pairing_pools(inst);
    FleetModel fm = build_tfacpp_pairing(inst, nets, pools);
    SolveResult res = solve_mip(fm.model, MipOptions{1e-9, 60.0, 200000});
    REQUIRE(res.status == SolveStatus::Optimal);

    Instance swapped = inst;
    std::swap(swapped.families[0], swapped.families[1]);
    std::swap(swapped.fleet_types[0], swapped.fleet_types[1]);
    swapped.validate();
    NetworkSet nets2(swapped, 180);
    PairingPools pools2 = build_pairing_pools(swapped);
    FleetModel fm2 = build_tfacpp_pairing(swapped, nets2, pools2);
    SolveResult res2 = solve_mip(fm2.model, MipOptions{1e-9, 60.0, 200000});
    REQUIRE(res2.status == SolveStatus::Optimal);
    CHECK(res.objective == doctest::Approx(res2.objective).epsilon(1e-9));
}

TEST_CASE("substitution identity: pairing and leg crew-time forms agree") {
    Instance inst = testutil::two_loop_instance();
    std::mt19937_64 rng(4242);

    // Pool of single-leg pairings guarantees an exact cover for any split.
    std::map<std::string, std::vector<Pairing>> singles;  // family -> pool
    for (const auto& fam : inst.families) {
        std::vector<Pairing> pool;
        ensure_complete_recourse(pool, inst, "M01", fam.id);
        singles[fam.id] = pool;
    }

    for (int trial = 0; trial < 100; ++trial) {
        // Random full assignment: every leg to one fleet type.
        std::map<int, int> fleet_of_leg;
        for (int li : inst.legs_in_month("M01"))
            fleet_of_leg[li] = static_cast<int>(rng() % inst.fleet_types.size());

        for (const auto& fam : inst.families) {
            // z: exact cover of the family's legs by its single-leg pairings.
            double pairing_form = 0.0;
            double leg_form = 0.0;
            for (const auto& [li, fi] : fleet_of_leg) {
                if (inst.fleet_types[fi].family_id != fam.id) continue;
                leg_form += inst.leg_family_hours(inst.legs[li], fam.id);
                for (const auto& p : singles[fam.id])
                    if (p.covers(li)) pairing_form += p.flight_time;
            }
            CHECK(std::abs(pairing_form - leg_form) <= 1e-9);
        }
    }
}

TEST_CASE("pairing-based and leg-based models share the same optimum") {
    Instance inst = testutil::two_loop_instance();
    NetworkSet nets(inst, 180);
    PairingPools pools = build_pairing_pools(inst);

    FleetModel pairing_model = build_tfacpp_pairing(inst, nets, pools);
    FleetModel leg_model = build_bim_legbased(inst, nets, &pools, /*pure=*/false);

    SolveResult rp = solve_mip(pairing_model.model, MipOptions{1e-9, 120.0, 400000});
    SolveResult rl = solve_mip(leg_model.model, MipOptions{1e-9, 120.0, 400000});
    REQUIRE(rp.status == SolveStatus::Optimal);
    REQUIRE(rl.status == SolveStatus::Optimal);
    CHECK(rp.objective == doctest::Approx(rl.objective).epsilon(1e-6));
}

TEST_CASE("cut-free master equals the budget-capped fleet model") {
    Instance inst = testutil::two_loop_instance();
    NetworkSet nets(inst, 180);
    std::vector<BendersCut> no_cuts;
    FleetModel bmp = build_monolithic_bmp(inst, nets, no_cuts);
    FleetModel pure = build_bim_legbased(inst, nets, nullptr, /*pure=*/true);
    SolveResult rb = solve_mip(bmp.model, MipOptions{1e-9, 60.0, 200000});
    SolveResult rc = solve_mip(pure.model, MipOptions{1e-9, 60.0, 200000});
    REQUIRE(rb.status == SolveStatus::Optimal);
    REQUIRE(rc.status == SolveStatus::Optimal);
    CHECK(rb.objective == doctest::Approx(rc.objective).epsilon(1e-9));
    // eta stays at its lower bound without cuts.
    for (const auto& [key, var] : bmp.eta) CHECK(rb.value(var) == doctest::Approx(0.0));
}

TEST_CASE("uniform cut prices eta at c per assigned leg") {
    Instance inst = testutil::loop_instance();  // both legs must share a family
    NetworkSet nets(inst, 180);
    const double c = 50.0;
    std::vector<BendersCut> cuts;
    for (const auto& fam : inst.families) {
        BendersCut cut;
        cut.month = "M01";
        cut.family = fam.id;
        for (int li : inst.legs_in_month("M01")) cut.omega[li] = c;
        cuts.push_back(cut);
    }
    FleetModel bmp = build_monolithic_bmp(inst, nets, cuts);
    SolveResult res = solve_mip(bmp.model, MipOptions{1e-9, 60.0, 200000});
    REQUIRE(res.status == SolveStatus::Optimal);
    Solution sol = extract_solution(inst, bmp, res, nullptr);
    // Count legs per family and check eta = c * count.
    std::map<std::string, int> legs_per_family;
    for (const auto& [leg, fleet] : sol.assignment)
        legs_per_family[inst.family_of_type(fleet).id]++;
    for (const auto& [key, var] : bmp.eta) {
        int expected = legs_per_family[inst.families[key.second].id];
        CHECK(res.value(var) == doctest::Approx(c * expected));
    }
}

TEST_CASE("LP relaxation dominates the MIP on every built model") {
    Instance inst = generate_synthetic(31, SynthDims{4, 2, 3, 6, 2});
    NetworkSet nets(inst, 180);
    PairingPools pools = build_pairing_pools(inst);
    std::vector<FleetModel> models;
    models.push_back(build_bim_legbased(inst, nets, nullptr, true));
    models.push_back(build_tfacpp_pairing(inst, nets, pools));
    for (auto& fm : models) {
        SolveResult lp = solve_lp(fm.model);
        SolveResult mip = solve_mip(fm.model, MipOptions{1e-6, 120.0, 400000});
        REQUIRE(lp.status == SolveStatus::Optimal);
        REQUIRE(mip.status == SolveStatus::Optimal);
        CHECK(mip.objective <= lp.objective + 1e-6 * std::max(1.0, std::abs(lp.objective)));
    }
}
