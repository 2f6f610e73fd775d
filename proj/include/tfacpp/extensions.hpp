#pragma once

#include <map>
#include <string>
#include <vector>

#include "tfacpp/models.hpp"

namespace tfacpp {

struct TransitionPlan {
    std::map<std::pair<std::string, std::string>, double> v;  // (from, to) -> crew moved
    std::map<std::string, double> effective_crew;             // family -> k_b + in - out
    double total_cost = 0.0;
};

struct CtOptions {
    bool integral_transfers = true;  // relax to continuous for LP studies
    // Optional replacement for the instance's transition costs.
    std::map<std::pair<std::string, std::string>, double> cost_override;
};

/// Leg-based integrated model extended with crew transfers: monthly and
/// yearly budgets scale with (k_b + inflow - outflow) and the objective pays
/// the transfer costs. Effective crew counts are kept nonnegative.
FleetModel build_tfacpp_ct(const Instance& inst, const NetworkSet& nets,
                           const CtOptions& opts = {});

TransitionPlan extract_transition_plan(const Instance& inst, const FleetModel& fm,
                                       const SolveResult& res, const CtOptions& opts = {});

/// Opportunity cost of pulling one crew member into training:
/// training_years * (beta * yearly per-crew cap).
double absence_cost(double training_years, double beta, double yearly_cap_per_crew);

struct ScenarioQuantile {
    std::string family;
    int q0 = 0;        // 1-based index into the ascending scenario list
    double value = 0;  // rho at q0
};

/// Smallest index whose cumulative probability reaches epsilon, so that
/// cum(q0-1) < eps <= cum(q0).
ScenarioQuantile quantile_index(const std::vector<double>& rho, const std::vector<double>& phi,
                                double epsilon, const std::string& family = "");

/// Deterministic equivalent of the chance-constrained model: the leg-based
/// integrated model with each yearly budget replaced by its quantile value.
FleetModel build_tfacpp_cu(const Instance& inst, const NetworkSet& nets);

/// Quantile RHS per family used by build_tfacpp_cu.
std::map<std::string, double> cu_yearly_rhs(const Instance& inst);

struct ChanceCheck {
    std::string family;
    double usage = 0.0;
    double satisfied_prob = 0.0;  // estimated P{usage <= t_b(rho)}
    double stderr_ = 0.0;
    double required = 0.0;  // 1 - epsilon
    bool ok = false;        // satisfied_prob >= required - 3 * stderr
};

/// Monte Carlo validation of the chance constraints at a solved usage.
std::vector<ChanceCheck> monte_carlo_chance_check(
    const Instance& inst, const std::map<std::pair<std::string, std::string>, double>& usage,
    int draws, std::uint64_t seed);

}  // namespace tfacpp
