#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tfacpp/models.hpp"

namespace tfacpp {

// One monthly fleet-assignment schedule. Columns priced from the LP
// relaxation may carry fractional assignment values.
struct Column {
    std::string month;
    std::map<std::pair<int, int>, double> x;  // (leg idx, fleet idx) -> value
    double profit = 0.0;                      // r_m^psi = sum r x - sum_b eta_b
    std::map<int, double> crew_time;          // family idx -> t_mb^psi
    double eta_total = 0.0;
    std::uint64_t hash = 0;                   // canonical content hash

    /// Recomputes profit and crew_time from x; throws when stored values
    /// drift beyond 1e-9.
    void check_consistency(const Instance& inst, const std::vector<BendersCut>& cuts) const;
};

std::uint64_t column_hash(const Column& col);

struct CgmpModel {
    LinearModel model;
    std::vector<int> u;                          // var per column (state order)
    std::map<std::string, int> convexity_row;    // month -> row
    std::map<int, int> yearly_row;               // family idx -> row
};

/// Master over schedule columns: one convexity row per month, one yearly
/// crew budget row per family. relax=false builds binary selection vars.
CgmpModel build_cgmp(const Instance& inst, const std::vector<Column>& columns, bool relax);

struct CgOptions {
    double tol = 1e-6;        // pricing acceptance: chi > alpha + tol
    int max_iterations = 300;
    int threads = 1;
    double init_mip_gap = 1e-2;
    double finish_mip_gap = 1e-3;
};

struct PriceOutcome {
    std::optional<Column> column;  // present iff chi > alpha + tol
    double chi = 0.0;
    std::map<std::string, double> gamma;  // fleet id -> count-row dual
};

/// Monthly pricing LP: cover <= 1, balance, count, monthly caps, cuts, with
/// per-leg coefficients r - t*beta and -eta in the objective.
PriceOutcome price_month(const Instance& inst, const NetworkSet& nets, const std::string& month,
                         double alpha, const std::map<std::string, double>& beta,
                         const std::vector<BendersCut>& cuts, double tol);

struct CgTraceRow {
    int iteration = 0;
    double lp_objective = 0.0;
    int columns_added = 0;
    int cgsp_calls = 0;
    double wall_time = 0.0;
};

struct CgState {
    std::vector<Column> columns;
    std::vector<double> weights;              // final master LP values per column
    std::map<std::string, double> alpha;      // month -> convexity dual
    std::map<std::string, double> beta;       // family -> yearly dual
    std::map<std::pair<std::string, std::string>, double> gamma;    // (month, fleet)
    std::map<std::pair<std::string, std::string>, double> t_tilde;  // (month, family)
    double lp_objective = 0.0;
    int cgmp_solves = 0;
    int cgsp_calls = 0;
    bool converged = false;
    std::vector<CgTraceRow> trace;
    double cgmp_time = 0.0;  // cumulative seconds
    double cgsp_time = 0.0;
};

/// Prices every month each round until no schedule improves the master.
/// Initial columns: the empty schedule plus one zero-dual MIP schedule per
/// month; the final LP optimum is the master-problem LP optimum.
CgState run_colgen(const Instance& inst, const NetworkSet& nets,
                   const std::vector<BendersCut>& cuts, const CgOptions& opts = {});

double column_reduced_cost(const Column& col, const std::map<std::string, double>& alpha,
                           const std::map<std::string, double>& beta, const Instance& inst);

struct FinishRow {
    std::string month;
    double lp_objective = 0.0;
    double mip_objective = 0.0;
    double int_gap = 0.0;  // (mip - lp) / |lp|, <= 0 for maximization
    double mip_time = 0.0;
    bool lp_integral = false;  // the month's LP relaxation came back integral
};

struct FinishOutcome {
    Solution solution;
    std::vector<FinishRow> rows;
};

/// Re-solves each month as a MIP with exact cover restored and monthly crew
/// budgets fixed to the LP allocation t~ plus an even split of the unused
/// yearly slack, so yearly budgets hold by construction. Throws SolveError
/// if a month comes back infeasible.
FinishOutcome mip_finish(const CgState& state, const Instance& inst, const NetworkSet& nets,
                         const std::vector<BendersCut>& cuts, const CgOptions& opts = {});

void write_cg_trace_csv(const CgState& state, std::ostream& out);
void write_cg_summary_csv(const CgState& state, std::ostream& out);
void write_finish_csv(const std::vector<FinishRow>& rows, std::ostream& out);

}  // namespace tfacpp
