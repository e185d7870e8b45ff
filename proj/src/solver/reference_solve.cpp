#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>

#include "decarb/errors.hpp"
#include "decarb/solver/backend.hpp"
#include "decarb/solver/simplex.hpp"

namespace decarb {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Feasible: return "feasible";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::Limit: return "limit";
    }
    return "infeasible";
}

SolveStatus solve_status_from_string(const std::string& s) {
    if (s == "optimal") return SolveStatus::Optimal;
    if (s == "feasible") return SolveStatus::Feasible;
    if (s == "infeasible") return SolveStatus::Infeasible;
    if (s == "unbounded") return SolveStatus::Unbounded;
    if (s == "limit") return SolveStatus::Limit;
    throw SolveError("unknown solver status: " + s);
}

std::vector<double> SolutionVector::as_point(const MixedIntegerModel& model) const {
    std::vector<double> x(static_cast<size_t>(model.num_variables()), 0.0);
    for (int j = 0; j < model.num_variables(); ++j) {
        auto it = values.find(model.variable(j).name);
        if (it != values.end()) x[static_cast<size_t>(j)] = it->second;
    }
    return x;
}

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
    // (variable, lb, ub) overrides accumulated along the path
    std::vector<std::tuple<int, double, double>> fixes;
    double parent_bound = -kInfinity;
};

struct BinaryRef {
    int var;
    std::string name;
};

} // namespace

SolutionVector reference_solve(const MixedIntegerModel& model, const SolveOptions& options) {
    std::vector<BinaryRef> binaries;
    for (int j = 0; j < model.num_variables(); ++j) {
        const Variable& v = model.variable(j);
        if (v.kind == VarKind::Binary && v.ub - v.lb > 0.5) {
            binaries.push_back({j, v.name});
        }
    }
    if (static_cast<int>(binaries.size()) > kReferenceSolveBinaryLimit) {
        throw ScaleGuardError(
            "model has " + std::to_string(binaries.size()) + " free binaries, above the " +
            std::to_string(kReferenceSolveBinaryLimit) +
            " limit of the bundled solver; export MPS (export-mps or DECARB_SOLVER_CMD) "
            "and use an external solver");
    }

    LpProblem base = lp_from_model(model);
    const auto t0 = std::chrono::steady_clock::now();
    auto out_of_time = [&]() {
        if (options.time_limit_seconds <= 0) return false;
        auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
        return dt.count() > options.time_limit_seconds;
    };

    SolutionVector best;
    best.status = SolveStatus::Infeasible;
    bool have_incumbent = false;
    double incumbent_obj = kInfinity;
    std::vector<double> incumbent_x;
    double weakest_pruned_bound = kInfinity; // min bound among gap-pruned nodes
    bool hit_limit = false;

    std::vector<Node> stack;
    stack.push_back({});

    while (!stack.empty()) {
        if (out_of_time()) {
            hit_limit = true;
            // Remaining open nodes weaken the proven bound.
            for (const auto& n : stack) {
                weakest_pruned_bound = std::min(weakest_pruned_bound, n.parent_bound);
            }
            break;
        }
        Node node = std::move(stack.back());
        stack.pop_back();

        LpProblem lp = base;
        for (const auto& [var, lo, hi] : node.fixes) {
            lp.lb[static_cast<size_t>(var)] = lo;
            lp.ub[static_cast<size_t>(var)] = hi;
        }
        LpResult rel = solve_lp(lp, options.feasibility_tol * 0.1);
        if (rel.status == LpStatus::Infeasible) continue;
        if (rel.status == LpStatus::Unbounded) {
            // An unbounded relaxation at the root makes the MILP unbounded or
            // infeasible; report unbounded and let the caller sort it out.
            SolutionVector sv;
            sv.status = SolveStatus::Unbounded;
            sv.bound = -kInfinity;
            return sv;
        }
        if (rel.status == LpStatus::IterationLimit) {
            throw SolveError("LP relaxation hit the simplex iteration limit");
        }

        double bound = rel.objective;
        double gap_margin = options.relative_gap_tol * std::max(1.0, std::fabs(incumbent_obj));
        if (have_incumbent && bound >= incumbent_obj - gap_margin) {
            weakest_pruned_bound = std::min(weakest_pruned_bound, bound);
            continue;
        }

        // Most fractional binary, ties broken by name.
        int branch_var = -1;
        std::string branch_name;
        double branch_val = 0.0;
        double best_score = kIntTol;
        for (const auto& b : binaries) {
            double x = rel.x[static_cast<size_t>(b.var)];
            double frac = x - std::floor(x);
            double dist = std::min(frac, 1.0 - frac);
            if (dist > best_score + 1e-12 ||
                (dist > best_score - 1e-12 && branch_var >= 0 && b.name < branch_name)) {
                best_score = dist;
                branch_var = b.var;
                branch_name = b.name;
                branch_val = x;
            }
        }

        if (branch_var < 0) {
            // Integral point: new incumbent.
            if (!have_incumbent || bound < incumbent_obj) {
                have_incumbent = true;
                incumbent_obj = bound;
                incumbent_x = rel.x;
                for (const auto& b : binaries) {
                    incumbent_x[static_cast<size_t>(b.var)] =
                        std::round(incumbent_x[static_cast<size_t>(b.var)]);
                }
            }
            continue;
        }

        Node down = node;
        down.parent_bound = bound;
        down.fixes.emplace_back(branch_var, lp.lb[static_cast<size_t>(branch_var)], 0.0);
        Node up = node;
        up.parent_bound = bound;
        up.fixes.emplace_back(branch_var, 1.0, lp.ub[static_cast<size_t>(branch_var)]);
        // Explore the branch nearest to the fractional value first.
        if (branch_val >= 0.5) {
            stack.push_back(std::move(down));
            stack.push_back(std::move(up));
        } else {
            stack.push_back(std::move(up));
            stack.push_back(std::move(down));
        }
    }

    if (!have_incumbent) {
        best.status = hit_limit ? SolveStatus::Limit : SolveStatus::Infeasible;
        best.bound = hit_limit ? -kInfinity : kInfinity;
        return best;
    }
    best.status = hit_limit ? SolveStatus::Feasible : SolveStatus::Optimal;
    best.objective = incumbent_obj;
    best.bound = std::min(incumbent_obj, weakest_pruned_bound);
    for (int j = 0; j < model.num_variables(); ++j) {
        best.values.emplace(model.variable(j).name, incumbent_x[static_cast<size_t>(j)]);
    }
    return best;
}

SolutionVector ReferenceBackend::solve(const MixedIntegerModel& model,
                                       const SolveOptions& options) {
    if (model.num_free_binaries() <= kReferenceSolveBinaryLimit) {
        return reference_solve(model, options);
    }
    const char* cmd = std::getenv("DECARB_SOLVER_CMD");
    if (cmd != nullptr && *cmd != '\0') {
        return external_solve(model, options, cmd);
    }
    // Deliberately trip the guard so the caller gets the standard message.
    return reference_solve(model, options);
}

} // namespace decarb
