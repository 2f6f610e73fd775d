#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfacpp/models.hpp"

namespace tfacpp {

struct BspResult {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;          // minimum crew cost over the assigned legs
    std::map<int, double> duals;     // leg index -> omega, assigned legs only
    std::vector<double> selection;   // z over the pool
};

/// Crew LP for one (month, family) at a fixed assignment: exact cover of the
/// legs the assignment hands to this family. Empty leg sets cost zero.
BspResult solve_bsp(const Instance& inst, const PairingPools& pools,
                    const std::map<std::string, std::string>& assignment,
                    const std::string& month, const std::string& family);

enum class CutKind { Exact, Empirical };

BendersCut make_cut(const std::map<int, double>& duals, const std::string& month,
                    const std::string& family, CutKind kind);

/// Cover-row duals of the crew LP restricted to a historical pool over the
/// whole monthly leg universe, scaled by a markup factor >= 1.
std::map<int, double> estimate_empirical_duals(std::vector<Pairing> historical_pool,
                                               const Instance& inst, const std::string& month,
                                               const std::string& family, double markup = 1.0);

enum class BendersMode { Exact, Empirical };

struct BendersOptions {
    BendersMode mode = BendersMode::Exact;
    double tol = 1e-6;          // relative UB-LB stopping rule
    int max_iterations = 60;
    double markup = 1.0;        // empirical duals scale
    int threads = 1;
    const PairingPools* historical = nullptr;  // empirical mode; defaults to the full pools
};

struct BendersTraceRow {
    int iteration = 0;
    double upper_bound = 0.0;
    double lower_bound = 0.0;
    int cuts_added = 0;
    double wall_time = 0.0;  // seconds since loop start
};

struct BendersOutcome {
    Solution solution;  // best incumbent; objective is its true profit minus crew cost
    std::vector<BendersCut> cuts;
    std::vector<BendersTraceRow> trace;
    bool converged = false;
    double upper_bound = 0.0;
};

/// Master-subproblem iteration: master fleet MIP with eta surrogates, exact
/// cuts from the monthly crew LPs, stop when (UB-LB)/|UB| <= tol. Empirical
/// mode installs one cut family per (month, family) up front and solves the
/// master once.
BendersOutcome benders_loop(const Instance& inst, const NetworkSet& nets,
                            const PairingPools& pools, const BendersOptions& opts);

void write_benders_trace_csv(const std::vector<BendersTraceRow>& trace, std::ostream& out);

}  // namespace tfacpp
