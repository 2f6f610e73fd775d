#pragma once

// Dense bounded-variable revised simplex with an explicit basis inverse.
// Internal backend behind solve_lp/solve_mip; not part of the public API.
//
// The problem is held in computational standard form
//     minimize c'x  s.t.  [A | I] x = b,  lo <= x <= hi
// where every row owns one logical column whose bounds encode the row sense
// (<=: [0,inf), >=: (-inf,0], =: [0,0]). Phase 1 adds artificial unit
// columns only for rows whose logical cannot absorb the initial residual.

#include <vector>

#include "tfacpp/linear_model.hpp"

namespace tfacpp::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpSolution {
    LpStatus status = LpStatus::IterLimit;
    double objective = 0.0;           // in the original model's sense
    std::vector<double> primal;       // structural variables only
    std::vector<double> duals;        // per row, d(obj)/d(rhs) in original sense
    int iterations = 0;
};

class LpCore {
public:
    explicit LpCore(const LinearModel& model);

    int num_structs() const { return n_struct_; }
    int num_rows() const { return m_; }
    const std::vector<double>& base_lb() const { return base_lb_; }
    const std::vector<double>& base_ub() const { return base_ub_; }

    /// Solves with the given structural bounds (size num_structs()).
    LpSolution solve(const std::vector<double>& struct_lb,
                     const std::vector<double>& struct_ub) const;

    LpSolution solve() const { return solve(base_lb_, base_ub_); }

private:
    int m_ = 0;         // rows
    int n_struct_ = 0;  // structural columns
    bool maximize_ = false;
    double cost_scale_ = 1.0;  // max |c| over structurals, >= 1
    std::vector<double> cost_;       // structural costs, minimization sense
    std::vector<double> rhs_;
    std::vector<double> col_;        // dense structural columns, column-major m_ x n_struct_
    std::vector<double> logical_lb_; // per row
    std::vector<double> logical_ub_;
    std::vector<double> base_lb_;    // structural bounds from the model
    std::vector<double> base_ub_;
};

}  // namespace tfacpp::detail
