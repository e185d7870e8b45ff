#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace decarb {

// Plenty beyond any physical quantity in the model; kept finite so bound
// arithmetic stays well defined.
constexpr double kInfinity = 1e30;

enum class VarKind { Continuous, Binary };
enum class RowSense { LessEqual, Equal, GreaterEqual };

// Sparse linear form: sum of coeff * var + constant.
struct LinearExpr {
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;

    LinearExpr() = default;
    explicit LinearExpr(double c) : constant(c) {}

    LinearExpr& add(int var, double coeff) {
        if (coeff != 0.0) terms.emplace_back(var, coeff);
        return *this;
    }
    LinearExpr& add(const LinearExpr& other, double scale = 1.0) {
        if (scale == 0.0) return *this;
        for (const auto& [v, c] : other.terms) terms.emplace_back(v, c * scale);
        constant += other.constant * scale;
        return *this;
    }
    // Merge duplicate variables and drop exact zeros; ordering by variable id
    // keeps downstream serialization deterministic.
    void compress();
    bool is_constant() const { return terms.empty(); }
};

struct Variable {
    std::string name;
    VarKind kind = VarKind::Continuous;
    double lb = 0.0;
    double ub = kInfinity;
};

struct Constraint {
    std::string name;
    RowSense sense = RowSense::LessEqual;
    double rhs = 0.0;
    std::vector<std::pair<int, double>> coeffs;
};

// Solver-agnostic sparse MILP container. Rows and columns keep insertion
// order; name lookups are secondary indexes for round-tripping.
class MixedIntegerModel {
public:
    std::string name = "model";

    int add_variable(const std::string& name, VarKind kind, double lb, double ub);
    int add_continuous(const std::string& name, double lb, double ub) {
        return add_variable(name, VarKind::Continuous, lb, ub);
    }
    int add_binary(const std::string& name) {
        return add_variable(name, VarKind::Binary, 0.0, 1.0);
    }

    // expr (sense) rhs; the expression constant folds into the right side.
    int add_row(const std::string& name, const LinearExpr& expr, RowSense sense, double rhs);

    void set_objective(const LinearExpr& expr) {
        objective_ = expr;
        objective_.compress();
    }
    const LinearExpr& objective() const { return objective_; }

    const std::vector<Variable>& variables() const { return vars_; }
    const std::vector<Constraint>& rows() const { return rows_; }
    Variable& variable(int id) { return vars_[static_cast<size_t>(id)]; }
    const Variable& variable(int id) const { return vars_[static_cast<size_t>(id)]; }
    const Constraint& row(int id) const { return rows_[static_cast<size_t>(id)]; }

    int variable_id(const std::string& name) const;

    void set_bounds(int var, double lb, double ub);
    void fix_variable(int var, double value) { set_bounds(var, value, value); }

    int num_variables() const { return static_cast<int>(vars_.size()); }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    // Binaries whose bounds still admit both values; fixed ones are constants.
    int num_free_binaries() const;

    double eval(const LinearExpr& expr, const std::vector<double>& point) const;
    double eval_objective(const std::vector<double>& point) const {
        return eval(objective_, point);
    }
    // Signed violation of one row at a point: 0 when satisfied, positive
    // magnitude of the breach otherwise.
    double row_violation(int row, const std::vector<double>& point) const;
    // Largest row violation divided by the row scale max(1, |coeffs|, |rhs|),
    // plus variable-bound violations; used for feasibility certification.
    double max_scaled_violation(const std::vector<double>& point) const;

private:
    std::vector<Variable> vars_;
    std::vector<Constraint> rows_;
    LinearExpr objective_;
    std::unordered_map<std::string, int> var_index_;
    std::unordered_map<std::string, int> row_index_;
};

} // namespace decarb
