#pragma once

#include <map>
#include <string>
#include <vector>

#include "decarb/model.hpp"

namespace decarb {

struct SolveOptions {
    double relative_gap_tol = 1e-4;
    double time_limit_seconds = 0.0; // 0 = no limit
    int threads = 1;                 // hint only; the bundled solver is serial
    double feasibility_tol = 1e-6;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, Limit };

std::string to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

struct SolutionVector {
    SolveStatus status = SolveStatus::Infeasible;
    std::map<std::string, double> values;
    double objective = 0.0;
    double bound = -kInfinity; // best proven lower bound (minimization)
    std::vector<std::string> warnings;

    double value(const std::string& name) const {
        auto it = values.find(name);
        return it == values.end() ? 0.0 : it->second;
    }
    bool has_solution() const {
        return status == SolveStatus::Optimal || status == SolveStatus::Feasible;
    }
    // Solution as a dense vector in the model's variable order.
    std::vector<double> as_point(const MixedIntegerModel& model) const;
};

// Bundled exact solver: depth-first branch and bound on fractional binaries
// over the dense-simplex LP relaxation. Guarded to at most 40 free binary
// variables; larger models must go through MPS export instead.
constexpr int kReferenceSolveBinaryLimit = 40;
SolutionVector reference_solve(const MixedIntegerModel& model, const SolveOptions& options);

// Runs an external MPS-capable solver: the command template must contain
// "{mps}" and "{sol}" placeholders. Used when the scale guard trips and
// DECARB_SOLVER_CMD is set.
SolutionVector external_solve(const MixedIntegerModel& model, const SolveOptions& options,
                              const std::string& command_template);

class SolverBackend {
public:
    virtual ~SolverBackend() = default;
    virtual SolutionVector solve(const MixedIntegerModel& model,
                                 const SolveOptions& options) = 0;
};

// Default backend: reference solver under the scale guard, external solver
// via DECARB_SOLVER_CMD beyond it.
class ReferenceBackend : public SolverBackend {
public:
    SolutionVector solve(const MixedIntegerModel& model, const SolveOptions& options) override;
};

} // namespace decarb
