#pragma once

#include <vector>

#include "decarb/model.hpp"

namespace decarb {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpProblem {
    int num_vars = 0;
    std::vector<double> cost;
    double cost_constant = 0.0;
    std::vector<double> lb, ub;
    struct Row {
        RowSense sense = RowSense::LessEqual;
        double rhs = 0.0;
        std::vector<std::pair<int, double>> coeffs;
    };
    std::vector<Row> rows;
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    long iterations = 0;
};

// Two-phase bounded-variable revised simplex with a dense explicit basis
// inverse. Phase 1 drives basic bound violations to zero with a composite
// piecewise-linear objective (no artificial columns); phase 2 prices with
// Dantzig's rule and falls back to Bland's rule after a degeneracy stall so
// cycling cannot occur. Deterministic: all ties break on lowest index.
LpResult solve_lp(const LpProblem& lp, double feas_tol = 1e-7, long max_iters = 0);

// Relax integrality and (optionally) override bounds, then solve.
LpProblem lp_from_model(const MixedIntegerModel& model);

} // namespace decarb
