#pragma once

// Small dense two-phase simplex with Bland's anti-cycling rule.
// Problem sizes here are tiny (a few hundred rows at most), so the
// plain tableau form is used throughout.

#include <cstddef>
#include <limits>
#include <vector>

#include "pettylab/errors.hpp"
#include "pettylab/linalg.hpp"

namespace pettylab {

struct LinearProgram {
    // maximize objective . x
    std::vector<double> objective;
    std::vector<Vec> le_lhs;  // le_lhs[i] . x <= le_rhs[i]
    std::vector<double> le_rhs;
    std::vector<Vec> eq_lhs;  // eq_lhs[i] . x == eq_rhs[i]
    std::vector<double> eq_rhs;
    std::vector<bool> free_var;  // default: x >= 0
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vec x;
    double value = 0.0;
};

namespace detail {

constexpr double kLpTol = 1e-10;

struct Tableau {
    std::size_t m = 0;  // rows
    std::size_t n = 0;  // structural + slack columns
    std::vector<std::vector<double>> a;  // m x n
    std::vector<double> b;               // m
    std::vector<double> cost;            // n, minimized
    std::vector<std::size_t> basis;      // m

    // One simplex phase on the current cost row. Returns false on
    // unboundedness.
    bool iterate(std::size_t max_iters) {
        std::vector<double> y(m);
        for (std::size_t iter = 0; iter < max_iters; ++iter) {
            // reduced costs with Bland's rule: lowest eligible index enters
            std::size_t enter = n;
            for (std::size_t j = 0; j < n; ++j) {
                double rc = cost[j];
                for (std::size_t i = 0; i < m; ++i) rc -= cost[basis[i]] * a[i][j];
                if (rc < -kLpTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == n) return true;  // optimal
            // ratio test, Bland tie-break on leaving basis index
            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (a[i][enter] > kLpTol) {
                    const double ratio = b[i] / a[i][enter];
                    if (ratio < best - kLpTol ||
                        (ratio < best + kLpTol && (leave == m || basis[i] < basis[leave]))) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m) return false;  // unbounded
            pivot(leave, enter);
        }
        throw numeric_error("simplex iteration limit exceeded");
    }

    void pivot(std::size_t row, std::size_t col) {
        const double p = a[row][col];
        for (std::size_t j = 0; j < n; ++j) a[row][j] /= p;
        b[row] /= p;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row) continue;
            const double f = a[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) a[i][j] -= f * a[row][j];
            b[i] -= f * b[row];
        }
        basis[row] = col;
    }
};

} // namespace detail

// Two-phase simplex. Free variables are split into positive parts.
inline LpSolution solve_lp(const LinearProgram& lp) {
    const std::size_t nvars = lp.objective.size();
    std::vector<bool> is_free = lp.free_var;
    is_free.resize(nvars, false);

    // column layout: for each variable either one column (x >= 0) or a
    // +/- pair; then one slack per <= row.
    std::vector<std::size_t> col_of(nvars);
    std::size_t ncols = 0;
    for (std::size_t v = 0; v < nvars; ++v) {
        col_of[v] = ncols;
        ncols += is_free[v] ? 2 : 1;
    }
    const std::size_t slack0 = ncols;
    ncols += lp.le_lhs.size();

    const std::size_t m = lp.le_lhs.size() + lp.eq_lhs.size();
    detail::Tableau t;
    t.m = m;
    t.n = ncols;
    t.a.assign(m, std::vector<double>(ncols + m, 0.0));  // room for artificials
    t.b.assign(m, 0.0);
    t.basis.assign(m, 0);

    auto fill_row = [&](std::size_t row, const Vec& lhs, double rhs) {
        for (std::size_t v = 0; v < nvars; ++v) {
            t.a[row][col_of[v]] = lhs[v];
            if (is_free[v]) t.a[row][col_of[v] + 1] = -lhs[v];
        }
        t.b[row] = rhs;
    };
    for (std::size_t i = 0; i < lp.le_lhs.size(); ++i) {
        fill_row(i, lp.le_lhs[i], lp.le_rhs[i]);
        t.a[i][slack0 + i] = 1.0;
    }
    for (std::size_t i = 0; i < lp.eq_lhs.size(); ++i)
        fill_row(lp.le_lhs.size() + i, lp.eq_lhs[i], lp.eq_rhs[i]);

    // normalize rhs signs
    for (std::size_t i = 0; i < m; ++i) {
        if (t.b[i] < 0.0) {
            for (double& x : t.a[i]) x = -x;
            t.b[i] = -t.b[i];
        }
    }

    const std::size_t max_iters = 200 * (m + ncols) + 20000;

    // Phase 1: slack basis where possible, artificials elsewhere.
    std::size_t nartificial = 0;
    std::vector<double> phase1_cost(ncols + m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const bool slack_ok = i < lp.le_lhs.size() && t.a[i][slack0 + i] > 0.5;
        if (slack_ok) {
            t.basis[i] = slack0 + i;
        } else {
            const std::size_t art = ncols + nartificial++;
            t.a[i][art] = 1.0;
            t.basis[i] = art;
            phase1_cost[art] = 1.0;
        }
    }
    if (nartificial > 0) {
        t.n = ncols + nartificial;
        t.cost = phase1_cost;
        t.cost.resize(t.n);
        if (!t.iterate(max_iters)) throw numeric_error("phase-1 simplex unbounded");
        double infeas = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (t.basis[i] >= ncols) infeas += t.b[i];
        if (infeas > 1e-8) return {LpStatus::infeasible, {}, 0.0};
        // drive remaining artificials out of the basis
        for (std::size_t i = 0; i < t.m; ++i) {
            if (t.basis[i] < ncols) continue;
            std::size_t col = ncols;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (std::fabs(t.a[i][j]) > detail::kLpTol) {
                    col = j;
                    break;
                }
            }
            if (col < ncols) t.pivot(i, col);
        }
        // rows still basic in an artificial are redundant (b ~ 0): drop them
        for (std::size_t i = t.m; i-- > 0;) {
            if (t.basis[i] >= ncols) {
                t.a.erase(t.a.begin() + static_cast<std::ptrdiff_t>(i));
                t.b.erase(t.b.begin() + static_cast<std::ptrdiff_t>(i));
                t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
                --t.m;
            }
        }
        t.n = ncols;
        for (auto& row : t.a) row.resize(ncols);
    }

    // Phase 2
    t.cost.assign(ncols, 0.0);
    for (std::size_t v = 0; v < nvars; ++v) {
        t.cost[col_of[v]] = -lp.objective[v];  // minimize -objective
        if (is_free[v]) t.cost[col_of[v] + 1] = lp.objective[v];
    }
    if (!t.iterate(max_iters)) return {LpStatus::unbounded, {}, 0.0};

    LpSolution sol;
    sol.status = LpStatus::optimal;
    sol.x.assign(nvars, 0.0);
    std::vector<double> colval(ncols, 0.0);
    for (std::size_t i = 0; i < t.m; ++i)
        if (t.basis[i] < ncols) colval[t.basis[i]] = t.b[i];
    for (std::size_t v = 0; v < nvars; ++v) {
        sol.x[v] = colval[col_of[v]];
        if (is_free[v]) sol.x[v] -= colval[col_of[v] + 1];
    }
    sol.value = dot(sol.x, lp.objective);
    return sol;
}

} // namespace pettylab
