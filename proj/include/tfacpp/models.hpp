#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfacpp/instance.hpp"
#include "tfacpp/linear_model.hpp"
#include "tfacpp/pairing.hpp"
#include "tfacpp/timespace.hpp"

namespace tfacpp {

// All (month, fleet type) networks of an instance, built once and shared.
class NetworkSet {
public:
    NetworkSet() = default;
    NetworkSet(const Instance& inst, int count_time);
    const TimeSpaceNetwork& at(const std::string& month, const std::string& fleet) const;
    int count_time() const { return count_time_; }

private:
    int count_time_ = 180;
    std::map<std::pair<std::string, std::string>, TimeSpaceNetwork> nets_;
};

using PairingPools = std::map<std::pair<std::string, std::string>, std::vector<Pairing>>;

/// Enumerates pairings for every (month, family) and pads each pool with
/// artificial single-leg pairings so crew LPs keep complete recourse.
PairingPools build_pairing_pools(const Instance& inst, std::size_t cap = 200000);

// One crew-cost surrogate cut: eta_{m,b} >= sum_l omega_l * sum_{f in F_b} x_lf.
struct BendersCut {
    std::string month;
    std::string family;
    std::map<int, double> omega;  // leg index -> coefficient
    bool empirical = false;
};

// A built model plus handles to its semantic variables and rows.
struct FleetModel {
    LinearModel model;
    std::map<std::pair<int, int>, int> x;                       // (leg idx, fleet idx) -> var
    std::map<std::tuple<std::string, int, int>, int> y;         // (month, fleet idx, arc) -> var
    std::map<std::pair<std::string, int>, int> eta;             // (month, family idx) -> var
    std::map<std::pair<std::string, int>, std::vector<int>> z;  // (month, family idx) -> vars
    std::map<std::pair<std::string, std::string>, int> v;       // (from fam, to fam) -> var

    std::map<int, int> cover_row;                          // leg idx -> row
    std::map<std::pair<std::string, int>, int> count_row;  // (month, fleet idx) -> row
    std::map<std::pair<std::string, int>, int> monthly_row;
    std::map<int, int> yearly_row;                         // family idx -> row
    std::map<std::pair<int, int>, int> link_row;           // (leg idx, family idx) -> row
};

struct FamCoreOptions {
    std::vector<std::string> months;  // subset to include; empty = all
    RowSense cover_sense = RowSense::EQ;
    bool monthly_budget_rows = true;  // leg-based t x <= t_b^m
    bool yearly_budget_row = true;    // leg-based t x <= t_b
    bool with_eta = false;            // eta vars (>= 0) entering the objective as -eta
    const std::vector<BendersCut>* cuts = nullptr;
    std::map<std::pair<std::string, std::string>, double> monthly_rhs_override;
    // (leg idx, fleet idx) -> objective coefficient; defaults to leg profit.
    const std::map<std::pair<int, int>, double>* obj_coeff = nullptr;
    std::map<int, double> yearly_rhs_override;  // family idx -> hours
};

/// Fleet-assignment core: cover + balance + count rows over the time-space
/// networks, with optional crew budget rows, eta surrogates and cuts.
FleetModel build_fam_core(const Instance& inst, const NetworkSet& nets,
                          const FamCoreOptions& opts);

/// Classic single-month fleet assignment (profit objective, no crew rows).
FleetModel build_fam(const Instance& inst, const NetworkSet& nets, const std::string& month);

/// Integrated model with pairing variables: linking rows per (month, leg,
/// family) and crew budgets expressed through pairing flight times.
FleetModel build_tfacpp_pairing(const Instance& inst, const NetworkSet& nets,
                                const PairingPools& pools);

/// Same model with the budget rows substituted into leg form. pure=true
/// drops the pairing variables and linking rows entirely.
FleetModel build_bim_legbased(const Instance& inst, const NetworkSet& nets,
                              const PairingPools* pools, bool pure);

/// Fleet assignment master with eta crew surrogates and accumulated cuts.
FleetModel build_monolithic_bmp(const Instance& inst, const NetworkSet& nets,
                                const std::vector<BendersCut>& cuts);

// Assembled solution view shared by every solve mode.
struct Solution {
    SolveStatus status = SolveStatus::Limit;
    bool hit_iteration_cap = false;
    double objective = 0.0;
    std::map<std::string, std::string> assignment;  // leg id -> fleet type id
    std::map<std::pair<std::string, std::string>, double> crew_time_used;  // (month, family)
    std::map<std::pair<std::string, std::string>, double> ground_flows;    // arc label -> value
    // Selected pairings with weights (fractional in LP modes).
    struct PickedPairing {
        std::string month, family;
        std::vector<std::string> leg_ids;
        double cost = 0.0;
        double weight = 0.0;
    };
    std::vector<PickedPairing> pairings;
    // Duals when solved through LP machinery.
    std::map<std::string, double> alpha;                                // month
    std::map<std::string, double> beta;                                 // family
    std::map<std::pair<std::string, std::string>, double> gamma;        // (month, fleet)
    std::map<std::pair<std::string, std::string>, double> omega_sum;    // (month, family) BSP cost
    bool has_duals = false;
};

/// Reads x/z values out of a solved fleet model into a Solution
/// (assignment uses the 0.5 threshold; crew time recomputed from x).
Solution extract_solution(const Instance& inst, const FleetModel& fm, const SolveResult& res,
                          const PairingPools* pools);

/// Crew hours used per (month, family) under a given assignment map.
std::map<std::pair<std::string, std::string>, double> crew_usage_of_assignment(
    const Instance& inst, const std::map<std::string, std::string>& assignment);

}  // namespace tfacpp
