#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tfacpp {

// Aircraft model variant. Money values are minor units; times are minutes.
struct FleetType {
    std::string id;
    std::string family_id;
    int seats = 0;
    int aircraft_count = 0;                        // k_f
    int min_turn_time = 45;                        // minutes
    std::map<std::string, double> operating_cost;  // leg id -> money per month
};

// Crew qualification group covering one or more fleet types.
struct FleetFamily {
    std::string id;
    std::vector<std::string> fleet_type_ids;
    int crew_count = 0;                                // k_b
    std::map<std::string, double> monthly_cap_per_crew; // month -> hours
    double yearly_cap_per_crew = 0.0;                   // hours
};

// One scheduled flight, repeated daily with the given monthly frequency.
struct FlightLeg {
    std::string id;
    std::string month;
    std::string origin;
    std::string destination;
    int departure = 0;  // minutes of day
    int arrival = 0;    // minutes of day
    int frequency = 1;  // flights per month
    std::map<std::string, double> duration_by_family;  // family -> hours
    double demand = 0.0;  // passengers per flight
    double fare = 0.0;    // money per passenger
};

struct PairingRules {
    std::vector<std::string> crew_bases;
    int max_duty_legs = 4;
    int min_connect = 45;            // minutes
    double max_duty_span = 12.0;     // hours
    int max_pairing_days = 4;        // 1..5
    double max_duty_flight_hours = 8.0;
};

struct CrewCostModel {
    double pay_rate = 400.0;       // money per flight hour
    double min_guarantee = 1000.0; // money per pairing day
};

struct TransitionArc {
    std::string from;
    std::string to;
    double cost = 0.0;
    int cap = 0;
};

struct UncertaintySpec {
    std::vector<double> rho;  // ascending realizations of yearly crew hours
    std::vector<double> phi;  // probabilities, sum 1
    double epsilon = 0.1;     // risk tolerance in (0,1)
};

class Instance {
public:
    std::vector<std::string> months;
    std::vector<std::string> stations;
    std::vector<FleetType> fleet_types;
    std::vector<FleetFamily> families;
    std::vector<FlightLeg> legs;
    PairingRules rules;
    CrewCostModel crew_cost;
    std::vector<TransitionArc> transition;
    std::map<std::string, UncertaintySpec> uncertainty;

    /// Checks every invariant, throws ValidationError listing all violations,
    /// and builds the lookup indexes. Instances are immutable afterwards.
    void validate();
    bool validated() const { return validated_; }

    // Index helpers, available after validate().
    const std::vector<int>& legs_in_month(const std::string& month) const;
    const FlightLeg& leg(int idx) const { return legs[idx]; }
    int leg_index(const std::string& id) const;
    int fleet_index(const std::string& id) const;
    int family_index(const std::string& id) const;
    const FleetFamily& family_of_type(const std::string& fleet_type_id) const;

    /// t_b^l: monthly crew hours a leg consumes for a family
    /// (frequency times the family-specific block time).
    double leg_family_hours(const FlightLeg& l, const std::string& family_id) const;

    /// Scenario data for a family; synthesizes the default three-point
    /// distribution around t_b when the file carried none.
    UncertaintySpec scenario_for(const std::string& family_id) const;

private:
    bool validated_ = false;
    std::map<std::string, std::vector<int>> legs_by_month_;
    std::map<std::string, int> leg_idx_;
    std::map<std::string, int> fleet_idx_;
    std::map<std::string, int> family_idx_;
    std::map<std::string, int> family_of_type_;
};

struct TimeBudget {
    double yearly = 0.0;                    // t_b
    std::map<std::string, double> monthly;  // month -> t_b^m
};

/// t_b = k_b * per-crew yearly cap; t_b^m likewise per month.
TimeBudget family_time_budget(const FleetFamily& fam);

/// r_lf^m: fare * min(demand, seats) * frequency - operating cost.
/// Throws SolveError when the fleet type has no cost entry for the leg.
double leg_profit(const FlightLeg& leg, const FleetType& f);

enum class DemandLevel { High, Mid, Low };
DemandLevel demand_level_from_string(const std::string& s);
const char* to_string(DemandLevel level);

/// Scales each leg's demand by an i.i.d. uniform factor:
/// high [1.1, 1.2], low [0.8, 0.9], mid is the identity.
Instance perturb_demand(const Instance& inst, DemandLevel level, std::uint64_t seed);

struct SynthDims {
    int stations = 4;
    int families = 2;
    int fleet_types = 3;
    int legs_per_month = 20;
    int months = 12;
};

/// Deterministic synthetic instance: daily rotations that start and end at
/// the crew base, one slack high-capacity family, all leg profits positive.
/// The result is validated unless the dimensions cannot produce legs
/// (a single station yields an empty schedule that fails validation later).
Instance generate_synthetic(std::uint64_t seed, const SynthDims& dims);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);
std::string instance_to_json_text(const Instance& inst);
Instance instance_from_json_text(const std::string& text);

}  // namespace tfacpp
