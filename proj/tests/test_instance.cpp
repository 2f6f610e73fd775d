#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "test_util.hpp"
#include "tfacpp/errors.hpp"
#include "tfacpp/instance.hpp"

using namespace tfacpp;

TEST_CASE("fleet record round-trips through save/load") {
    Instance inst = testutil::skeleton(1);
    inst.fleet_types[0].id = "A319-1";
    inst.fleet_types[0].family_id = "A320";
    inst.fleet_types[0].seats = 128;
    inst.fleet_types[0].aircraft_count = 12;
    inst.families[0].id = "A320";
    inst.families[0].fleet_type_ids = {"A319-1", "FAMA-2"};
    inst.fleet_types[1].family_id = "A320";
    testutil::add_leg(inst, "L1", "M01", "BAS", "AAA", 480, 600);
    testutil::add_leg(inst, "L2", "M01", "AAA", "BAS", 690, 810);
    testutil::finish(inst);

    auto path = std::filesystem::temp_directory_path() / "tfacpp_roundtrip.json";
    save_instance(inst, path.string());
    Instance back = load_instance(path.string());
    std::filesystem::remove(path);

    const FleetType& f = back.fleet_types[back.fleet_index("A319-1")];
    CHECK(f.id == "A319-1");
    CHECK(f.family_id == "A320");
    CHECK(f.seats == 128);
    CHECK(f.aircraft_count == 12);
    // Full identity, not just the one record.
    CHECK(instance_to_json_text(inst) == instance_to_json_text(back));
}

TEST_CASE("empty legs list fails validation with 'no legs'") {
    Instance inst = testutil::skeleton(1);
    CHECK_THROWS_WITH_AS(inst.validate(), doctest::Contains("no legs"), ValidationError);
}

TEST_CASE("leg referencing an unknown station names the leg") {
    Instance inst = testutil::skeleton(1);
    testutil::add_leg(inst, "L1", "M01", "BAS", "AAA", 480, 600);
    testutil::add_leg(inst, "LBAD", "M01", "NOPE", "BAS", 700, 800);
    for (auto& f : inst.fleet_types)
        for (const auto& l : inst.legs) f.operating_cost[l.id] = 100;
    CHECK_THROWS_WITH_AS(inst.validate(), doctest::Contains("LBAD"), ValidationError);
}

TEST_CASE("validation lists every violation at once") {
    Instance inst = testutil::skeleton(1);
    testutil::add_leg(inst, "L1", "M01", "NOPE", "AAA", 480, 600);
    inst.legs[0].frequency = 0;
    inst.fleet_types[0].seats = 0;
    try {
        inst.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        std::string msg = e.what();
        CHECK(msg.find("NOPE") != std::string::npos);
        CHECK(msg.find("frequency") != std::string::npos);
        CHECK(msg.find("seats") != std::string::npos);
    }
}

TEST_CASE("synthetic generation is byte-deterministic") {
    SynthDims dims;
    dims.stations = 4;
    dims.families = 2;
    dims.fleet_types = 3;
    dims.legs_per_month = 8;
    dims.months = 2;
    Instance a = generate_synthetic(7, dims);
    Instance b = generate_synthetic(7, dims);
    CHECK(instance_to_json_text(a) == instance_to_json_text(b));
    Instance c = generate_synthetic(8, dims);
    CHECK(instance_to_json_text(a) != instance_to_json_text(c));
}

TEST_CASE("single-station dims produce an instance that fails validation later") {
    SynthDims dims;
    dims.stations = 1;
    Instance inst = generate_synthetic(3, dims);  // must not throw here
    CHECK(inst.legs.empty());
    CHECK_THROWS_AS(inst.validate(), ValidationError);
}

TEST_CASE("generated instances pass validation and stay profitable") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        SynthDims dims;
        dims.stations = 4;
        dims.families = 2;
        dims.fleet_types = 3;
        dims.legs_per_month = 10;
        dims.months = 3;
        Instance inst = generate_synthetic(seed, dims);
        CHECK(inst.validated());
        for (const auto& l : inst.legs)
            for (const auto& f : inst.fleet_types) CHECK(leg_profit(l, f) > 0.0);
        // Month leg sets partition the leg list.
        size_t total = 0;
        for (const auto& m : inst.months) total += inst.legs_in_month(m).size();
        CHECK(total == inst.legs.size());
    }
}

TEST_CASE("perturb_demand: mid is the identity") {
    Instance inst = testutil::loop_instance();
    Instance mid = perturb_demand(inst, DemandLevel::Mid, 99);
    CHECK(instance_to_json_text(inst) == instance_to_json_text(mid));
}

TEST_CASE("perturb_demand: high scales into [1.1, 1.2]") {
    Instance inst = generate_synthetic(11, SynthDims{3, 2, 2, 6, 2});
    Instance high = perturb_demand(inst, DemandLevel::High, 5);
    for (size_t i = 0; i < inst.legs.size(); ++i) {
        double ratio = high.legs[i].demand / inst.legs[i].demand;
        CHECK(ratio >= 1.1);
        CHECK(ratio <= 1.2);
    }
    // Determinism per seed.
    Instance again = perturb_demand(inst, DemandLevel::High, 5);
    CHECK(instance_to_json_text(high) == instance_to_json_text(again));
}

TEST_CASE("perturb_demand: low maps demand 100 into [80, 90]") {
    Instance inst = testutil::loop_instance();  // demand 100 on both legs
    Instance low = perturb_demand(inst, DemandLevel::Low, 17);
    for (const auto& l : low.legs) {
        CHECK(l.demand >= 80.0);
        CHECK(l.demand <= 90.0);
    }
}

TEST_CASE("leg_profit formula and edge cases") {
    Instance inst = testutil::skeleton(1);
    testutil::add_leg(inst, "L1", "M01", "BAS", "AAA", 480, 600, 30, 50, 10);
    testutil::add_leg(inst, "L2", "M01", "AAA", "BAS", 690, 810, 30, 50, 10);
    testutil::finish(inst, 1000);
    const FlightLeg& l = inst.legs[0];

    SUBCASE("hand arithmetic: 10*50*30 - 1000 = 14000") {
        FleetType f = inst.fleet_types[0];  // 150 seats > demand 50
        f.seats = 128;
        CHECK(leg_profit(l, f) == doctest::Approx(14000.0));
    }
    SUBCASE("zero demand earns minus the operating cost") {
        FlightLeg z = l;
        z.demand = 0;
        CHECK(leg_profit(z, inst.fleet_types[0]) == doctest::Approx(-1000.0));
    }
    SUBCASE("larger seats never hurt at equal cost") {
        FlightLeg d = l;
        d.demand = 1000;  // above both seat counts
        double small = leg_profit(d, inst.fleet_types[1]);  // 120 seats
        double big = leg_profit(d, inst.fleet_types[0]);    // 150 seats
        CHECK(big >= small);
    }
    SUBCASE("profit is nondecreasing in demand") {
        double prev = -1e18;
        for (double demand : {0.0, 10.0, 119.0, 120.0, 121.0, 500.0}) {
            FlightLeg d = l;
            d.demand = demand;
            double r = leg_profit(d, inst.fleet_types[1]);
            CHECK(r >= prev - 1e-12);
            prev = r;
        }
    }
    SUBCASE("missing cost entry throws") {
        FleetType f = inst.fleet_types[0];
        f.operating_cost.clear();
        CHECK_THROWS_AS(leg_profit(l, f), SolveError);
    }
}

TEST_CASE("family_time_budget products") {
    FleetFamily fam;
    fam.id = "B";
    fam.crew_count = 10;
    fam.yearly_cap_per_crew = 1000.0;
    fam.monthly_cap_per_crew["M01"] = 100.0;
    TimeBudget b = family_time_budget(fam);
    CHECK(b.yearly == doctest::Approx(10000.0));
    CHECK(b.monthly.at("M01") == doctest::Approx(1000.0));

    fam.crew_count = 0;
    b = family_time_budget(fam);
    CHECK(b.yearly == 0.0);
    CHECK(b.monthly.at("M01") == 0.0);
}

TEST_CASE("money fields must be integer minor units") {
    Instance inst = testutil::loop_instance();
    std::string text = instance_to_json_text(inst);
    auto pos = text.find("\"fare\": 1000.0");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 14, "\"fare\": 1000.5");
    CHECK_THROWS_WITH_AS(instance_from_json_text(text), doctest::Contains("minor units"),
                         ValidationError);
}

TEST_CASE("malformed JSON raises ParseError") {
    CHECK_THROWS_AS(instance_from_json_text("{ not json"), ParseError);
    CHECK_THROWS_AS(instance_from_json_text("{\"months\": []}"), ParseError);
}

TEST_CASE("scenario_for synthesizes a default three-point distribution") {
    Instance inst = testutil::loop_instance();  // no uncertainty section
    UncertaintySpec u = inst.scenario_for("FAMA");
    REQUIRE(u.rho.size() == 3);
    CHECK(u.rho[2] == doctest::Approx(5000.0));  // 5 crew * 1000 h
    CHECK(u.rho[0] < u.rho[1]);
    CHECK(u.rho[1] < u.rho[2]);
    double s = 0;
    for (double p : u.phi) s += p;
    CHECK(s == doctest::Approx(1.0));
}
