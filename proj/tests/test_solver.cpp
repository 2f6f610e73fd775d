#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tfacpp/errors.hpp"
#include "tfacpp/linear_model.hpp"

using namespace tfacpp;

namespace {

LinearModel knapsack() {
    LinearModel m;
    m.sense = ObjSense::Maximize;
    int a = m.add_var("a", 0, 1, VarKind::Binary, 2.0);
    int b = m.add_var("b", 0, 1, VarKind::Binary, 3.0);
    int r = m.add_row("cap", RowSense::LE, 1.0);
    m.add_coeff(r, a, 1.0);
    m.add_coeff(r, b, 1.0);
    return m;
}

}  // namespace

TEST_CASE("one-variable LP with tight bound gives dual 1") {
    LinearModel m;
    m.sense = ObjSense::Maximize;
    int x = m.add_var("x", 0, kInf, VarKind::Continuous, 1.0);
    int r = m.add_row("cap", RowSense::LE, 1.0);
    m.add_coeff(r, x, 1.0);
    auto res = solve_lp(m);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective == doctest::Approx(1.0));
    CHECK(res.value(x) == doctest::Approx(1.0));
    CHECK(res.dual(r) == doctest::Approx(1.0));
}

TEST_CASE("degenerate two-variable LP") {
    LinearModel m;
    m.sense = ObjSense::Maximize;
    int x = m.add_var("x", 0, kInf, VarKind::Continuous, 1.0);
    int y = m.add_var("y", 0, kInf, VarKind::Continuous, 1.0);
    int r = m.add_row("cap", RowSense::LE, 1.0);
    m.add_coeff(r, x, 1.0);
    m.add_coeff(r, y, 1.0);
    auto res = solve_lp(m);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective == doctest::Approx(1.0));
}

TEST_CASE("clashing bound and sign constraint is infeasible") {
    LinearModel m;
    m.sense = ObjSense::Minimize;
    int x = m.add_var("x", 0, kInf, VarKind::Continuous, 0.0);
    int r = m.add_row("neg", RowSense::LE, -1.0);
    m.add_coeff(r, x, 1.0);
    auto res = solve_lp(m);
    CHECK(res.status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded maximization is detected") {
    LinearModel m;
    m.sense = ObjSense::Maximize;
    m.add_var("x", 0, kInf, VarKind::Continuous, 1.0);
    auto res = solve_lp(m);
    CHECK(res.status == SolveStatus::Unbounded);
}

TEST_CASE("equality and >= rows") {
    // min 2x + y  s.t. x + y = 1, x - y >= -0.5, x,y >= 0
    LinearModel m;
    m.sense = ObjSense::Minimize;
    int x = m.add_var("x", 0, kInf, VarKind::Continuous, 2.0);
    int y = m.add_var("y", 0, kInf, VarKind::Continuous, 1.0);
    int r1 = m.add_row("sum", RowSense::EQ, 1.0);
    m.add_coeff(r1, x, 1.0);
    m.add_coeff(r1, y, 1.0);
    int r2 = m.add_row("diff", RowSense::GE, -0.5);
    m.add_coeff(r2, x, 1.0);
    m.add_coeff(r2, y, -1.0);
    auto res = solve_lp(m);
    REQUIRE(res.status == SolveStatus::Optimal);
    // x = 0.25, y = 0.75 makes the GE row tight.
    CHECK(res.value(x) == doctest::Approx(0.25));
    CHECK(res.value(y) == doctest::Approx(0.75));
    CHECK(res.objective == doctest::Approx(1.25));
}

TEST_CASE("free variable pushed to a row bound") {
    // min x, x free, -x <= 5  ->  x = -5
    LinearModel m;
    m.sense = ObjSense::Minimize;
    int x = m.add_var("x", -kInf, kInf, VarKind::Continuous, 1.0);
    int r = m.add_row("lo", RowSense::LE, 5.0);
    m.add_coeff(r, x, -1.0);
    auto res = solve_lp(m);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.value(x) == doctest::Approx(-5.0));
}

TEST_CASE("MIP rounding forced by fractional bound") {
    LinearModel m;
    m.sense = ObjSense::Maximize;
    int x = m.add_var("x", 0, kInf, VarKind::Integer, 1.0);
    int r = m.add_row("cap", RowSense::LE, 1.5);
    m.add_coeff(r, x, 1.0);
    auto res = solve_mip(m);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective == doctest::Approx(1.0));
    CHECK(res.value(x) == doctest::Approx(1.0));
}

TEST_CASE("binary knapsack") {
    auto res = solve_mip(knapsack());
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective == doctest::Approx(3.0));
}

TEST_CASE("LP-integral model: MIP objective equals LP objective") {
    // Assignment-style totally unimodular model.
    LinearModel m;
    m.sense = ObjSense::Maximize;
    double profit[2][2] = {{5, 3}, {4, 6}};
    int v[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            v[i][j] = m.add_var("x" + std::to_string(i) + std::to_string(j), 0, 1,
                                VarKind::Binary, profit[i][j]);
    for (int i = 0; i < 2; ++i) {
        int r = m.add_row("row" + std::to_string(i), RowSense::EQ, 1.0);
        m.add_coeff(r, v[i][0], 1.0);
        m.add_coeff(r, v[i][1], 1.0);
    }
    for (int j = 0; j < 2; ++j) {
        int r = m.add_row("col" + std::to_string(j), RowSense::LE, 1.0);
        m.add_coeff(r, v[0][j], 1.0);
        m.add_coeff(r, v[1][j], 1.0);
    }
    auto lp = solve_lp(m);
    auto mip = solve_mip(m);
    REQUIRE(lp.status == SolveStatus::Optimal);
    REQUIRE(mip.status == SolveStatus::Optimal);
    CHECK(lp.objective == doctest::Approx(11.0));
    CHECK(mip.objective == doctest::Approx(lp.objective));
}

TEST_CASE("randomized LPs: strong duality, dual signs, weak duality") {
    std::mt19937_64 rng(20240901);
    auto unif = [&](double lo, double hi) {
        return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 6);
        int k = 1 + static_cast<int>(rng() % 4);
        LinearModel m;
        m.sense = ObjSense::Maximize;
        std::vector<int> xs;
        for (int j = 0; j < n; ++j)
            xs.push_back(m.add_var("x" + std::to_string(j), 0, kInf, VarKind::Continuous,
                                   unif(0.1, 5.0)));
        // A reference feasible point plus slack keeps every row satisfiable.
        std::vector<double> x0(n);
        for (int j = 0; j < n; ++j) x0[j] = unif(0.0, 2.0);
        std::vector<std::vector<double>> A(k, std::vector<double>(n));
        std::vector<double> rhs(k);
        for (int i = 0; i < k; ++i) {
            double act = 0;
            for (int j = 0; j < n; ++j) {
                A[i][j] = unif(0.0, 3.0);
                act += A[i][j] * x0[j];
            }
            rhs[i] = act + unif(0.1, 1.0);
            int r = m.add_row("c" + std::to_string(i), RowSense::LE, rhs[i]);
            for (int j = 0; j < n; ++j) m.add_coeff(r, xs[j], A[i][j]);
        }
        // Boundedness: cap the sum of variables.
        int rcap = m.add_row("total", RowSense::LE, 50.0);
        for (int j = 0; j < n; ++j) m.add_coeff(rcap, xs[j], 1.0);

        auto res = solve_lp(m);
        REQUIRE(res.status == SolveStatus::Optimal);

        // Weak duality: the reference point never beats the optimum.
        double ref_obj = 0;
        for (int j = 0; j < n; ++j) ref_obj += m.var(xs[j]).obj * x0[j];
        CHECK(ref_obj <= res.objective + 1e-7);

        // Max with <= rows: duals nonnegative; dual feasibility A'y >= c;
        // strong duality y'b == objective (all vars are 0-based, no uppers).
        double dual_obj = 0;
        for (int i = 0; i <= k; ++i) {
            CHECK(res.duals[i] >= -1e-8);
            dual_obj += res.duals[i] * m.row(i).rhs;
        }
        for (int j = 0; j < n; ++j) {
            double yaj = 0;
            for (int i = 0; i < k; ++i) yaj += res.duals[i] * A[i][j];
            yaj += res.duals[k];  // cap row coefficient 1
            CHECK(yaj >= m.var(xs[j]).obj - 1e-7);
        }
        CHECK(dual_obj == doctest::Approx(res.objective).epsilon(1e-6));

        // Complementary slackness: positive dual means a tight row.
        for (int i = 0; i <= k; ++i) {
            if (res.duals[i] > 1e-6) {
                double act = 0;
                for (const auto& [j, a] : m.row(i).coeffs) act += a * res.value(j);
                CHECK(act == doctest::Approx(m.row(i).rhs).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("randomized MIPs: optimum matches brute force over binaries") {
    std::mt19937_64 rng(77);
    auto unif = [&](double lo, double hi) {
        return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
    };
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);  // up to 6 binaries
        int k = 1 + static_cast<int>(rng() % 3);
        LinearModel m;
        m.sense = ObjSense::Maximize;
        std::vector<double> c(n), w;
        std::vector<std::vector<double>> A(k, std::vector<double>(n));
        std::vector<double> rhs(k);
        for (int j = 0; j < n; ++j) {
            c[j] = unif(-2.0, 5.0);
            m.add_var("x" + std::to_string(j), 0, 1, VarKind::Binary, c[j]);
        }
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < n; ++j) A[i][j] = unif(0.0, 2.0);
            rhs[i] = unif(0.5, 0.9 * n);
            int r = m.add_row("c" + std::to_string(i), RowSense::LE, rhs[i]);
            for (int j = 0; j < n; ++j) m.add_coeff(r, j, A[i][j]);
        }
        auto mip = solve_mip(m, MipOptions{1e-9, 30.0, 100000});
        double best = -1e100;
        for (int mask = 0; mask < (1 << n); ++mask) {
            bool ok = true;
            for (int i = 0; i < k && ok; ++i) {
                double act = 0;
                for (int j = 0; j < n; ++j)
                    if (mask & (1 << j)) act += A[i][j];
                ok = act <= rhs[i] + 1e-9;
            }
            if (!ok) continue;
            double obj = 0;
            for (int j = 0; j < n; ++j)
                if (mask & (1 << j)) obj += c[j];
            best = std::max(best, obj);
        }
        REQUIRE(mip.status == SolveStatus::Optimal);
        CHECK(mip.objective == doctest::Approx(best).epsilon(1e-7));

        auto lp = solve_lp(m);
        CHECK(mip.objective <= lp.objective + 1e-7);  // relaxation bound
    }
}

TEST_CASE("duplicate ids are rejected") {
    LinearModel m;
    m.add_var("x", 0, 1, VarKind::Continuous, 1.0);
    m.add_var("x", 0, 1, VarKind::Continuous, 1.0);
    CHECK_THROWS_AS(solve_lp(m), SolveError);
}

TEST_CASE("LP format export mentions every section") {
    auto m = knapsack();
    std::ostringstream out;
    write_lp_format(m, out);
    auto text = out.str();
    CHECK(text.find("Maximize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("Bounds") != std::string::npos);
    CHECK(text.find("Generals") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
}
