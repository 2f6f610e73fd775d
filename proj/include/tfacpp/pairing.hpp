#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tfacpp/instance.hpp"
#include "tfacpp/linear_model.hpp"

namespace tfacpp {

// Legal crew duty sequence for one (month, family), flown daily over the
// month, beginning and ending at the same crew base.
struct Pairing {
    std::string id;
    std::string family_id;
    std::string month;
    std::vector<int> legs;      // instance leg indices, in flying order
    int days = 1;               // calendar days spanned
    double cost = 0.0;          // c_pb^m
    double flight_time = 0.0;   // t_b^p, monthly hours (frequency included)
    bool artificial = false;    // recourse filler, not a real pairing

    bool covers(int leg_idx) const;
};

inline constexpr double kArtificialPairingCost = 1e7;

/// c_p = max(pay_rate * t_b^p, min_guarantee * days).
double pairing_cost(const Pairing& p, const CrewCostModel& cost_model);

/// Depth-first enumeration over the connection graph. Same-day connections
/// require min_connect; when a same-day continuation is impossible the crew
/// rests overnight and the pairing grows by a day. Throws SolveError when
/// more than `cap` pairings would be produced.
std::vector<Pairing> enumerate_pairings(const Instance& inst, const std::string& month,
                                        const std::string& family,
                                        const PairingRules& rules,
                                        const std::optional<std::set<int>>& leg_subset = {},
                                        std::size_t cap = 200000);

/// Adds a high-cost single-leg pairing for every leg the pool cannot cover,
/// so each monthly crew LP keeps complete recourse.
void ensure_complete_recourse(std::vector<Pairing>& pool, const Instance& inst,
                              const std::string& month, const std::string& family,
                              double artificial_cost = kArtificialPairingCost);

struct CppSolution {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> selection;   // z per pool pairing
    std::map<int, double> duals;     // leg index -> omega (LP mode only)
};

/// Set-partitioning crew model: min cost subject to exact cover of
/// legs_to_cover. relax=true solves the LP and returns cover-row duals.
CppSolution solve_cpp(const std::vector<Pairing>& pool, const std::vector<int>& legs_to_cover,
                      bool relax);

// Pool persistence, used to replay historical pairings.
std::string pool_to_json_text(const std::vector<Pairing>& pool, const Instance& inst);
std::vector<Pairing> pool_from_json_text(const std::string& text, const Instance& inst);
void save_pool(const std::vector<Pairing>& pool, const Instance& inst, const std::string& path);
std::vector<Pairing> load_pool(const std::string& path, const Instance& inst);

}  // namespace tfacpp
