#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace tfacpp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ObjSense { Minimize, Maximize };
enum class RowSense { LE, EQ, GE };
enum class VarKind { Continuous, Integer, Binary };

enum class SolveStatus { Optimal, Infeasible, Unbounded, Limit };

const char* to_string(SolveStatus s);

/// Row/column model of a linear or mixed-integer program. Models are built
/// once, handed to solve_lp/solve_mip, and never mutated by the solver.
class LinearModel {
public:
    struct Var {
        std::string id;
        double lb = 0.0;
        double ub = kInf;
        double obj = 0.0;
        VarKind kind = VarKind::Continuous;
    };
    struct Row {
        std::string id;
        RowSense sense = RowSense::LE;
        double rhs = 0.0;
        std::vector<std::pair<int, double>> coeffs;  // (var, value), duplicates accumulate
    };

    ObjSense sense = ObjSense::Maximize;

    int add_var(std::string id, double lb, double ub, VarKind kind, double obj);
    int add_row(std::string id, RowSense sense, double rhs);
    void add_coeff(int row, int var, double value);

    int num_vars() const { return static_cast<int>(vars_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    const Var& var(int v) const { return vars_[v]; }
    const Row& row(int r) const { return rows_[r]; }
    std::vector<Var>& vars() { return vars_; }
    const std::vector<Var>& vars() const { return vars_; }
    const std::vector<Row>& rows() const { return rows_; }

    bool has_integers() const;

    /// Throws SolveError on duplicate ids or non-finite data.
    void validate() const;

private:
    std::vector<Var> vars_;
    std::vector<Row> rows_;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Limit;
    double objective = 0.0;
    std::vector<double> primal;  // per variable
    /// Per-row duals, LP solves only. Signed as d(objective)/d(rhs) in the
    /// model's own sense: a maximization with <= rows yields duals >= 0.
    std::vector<double> duals;
    double gap = 0.0;       // relative MIP gap, MIP solves only
    double wall_time = 0.0; // seconds

    double value(int var) const { return primal[var]; }
    double dual(int row) const { return duals[row]; }
};

struct MipOptions {
    double rel_gap = 1e-4;
    double time_limit = 1e30;   // seconds
    long node_limit = 500000;
};

/// Solves the LP relaxation (integrality ignored). Returns primal, duals and
/// status; infeasible/unbounded come back as statuses, not exceptions.
SolveResult solve_lp(const LinearModel& model);

/// Branch-and-bound over solve_lp. Returns the incumbent with a proven
/// relative gap <= opts.rel_gap, or status Limit with the best incumbent.
SolveResult solve_mip(const LinearModel& model, const MipOptions& opts = {});

/// CPLEX-style LP file export for backend-independent debugging.
void write_lp_format(const LinearModel& model, std::ostream& out);

}  // namespace tfacpp
