#include "decarb/model.hpp"

#include <algorithm>
#include <cmath>

#include "decarb/errors.hpp"

namespace decarb {

void LinearExpr::compress() {
    if (terms.empty()) return;
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, double>> merged;
    merged.reserve(terms.size());
    for (const auto& [v, c] : terms) {
        if (!merged.empty() && merged.back().first == v) {
            merged.back().second += c;
        } else {
            merged.emplace_back(v, c);
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto& t) { return t.second == 0.0; }),
                 merged.end());
    terms = std::move(merged);
}

int MixedIntegerModel::add_variable(const std::string& name, VarKind kind, double lb,
                                    double ub) {
    if (var_index_.count(name)) {
        throw BuildError("duplicate variable name: " + name);
    }
    if (kind == VarKind::Binary) {
        lb = std::max(lb, 0.0);
        ub = std::min(ub, 1.0);
    }
    if (lb > ub) {
        throw BuildError("variable " + name + " has empty bound interval");
    }
    Variable v;
    v.name = name;
    v.kind = kind;
    v.lb = lb;
    v.ub = ub;
    vars_.push_back(std::move(v));
    int id = static_cast<int>(vars_.size()) - 1;
    var_index_.emplace(name, id);
    return id;
}

int MixedIntegerModel::add_row(const std::string& name, const LinearExpr& expr,
                               RowSense sense, double rhs) {
    if (row_index_.count(name)) {
        throw BuildError("duplicate row name: " + name);
    }
    Constraint c;
    c.name = name;
    c.sense = sense;
    c.rhs = rhs - expr.constant;
    LinearExpr e = expr;
    e.compress();
    for (const auto& [v, coeff] : e.terms) {
        if (v < 0 || v >= num_variables()) {
            throw BuildError("row " + name + " references undeclared variable id " +
                             std::to_string(v));
        }
        c.coeffs.emplace_back(v, coeff);
    }
    rows_.push_back(std::move(c));
    int id = static_cast<int>(rows_.size()) - 1;
    row_index_.emplace(name, id);
    return id;
}

int MixedIntegerModel::variable_id(const std::string& name) const {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? -1 : it->second;
}

void MixedIntegerModel::set_bounds(int var, double lb, double ub) {
    if (lb > ub) {
        throw BuildError("variable " + vars_[static_cast<size_t>(var)].name +
                         " given empty bound interval");
    }
    vars_[static_cast<size_t>(var)].lb = lb;
    vars_[static_cast<size_t>(var)].ub = ub;
}

int MixedIntegerModel::num_free_binaries() const {
    int n = 0;
    for (const auto& v : vars_) {
        if (v.kind == VarKind::Binary && v.ub - v.lb > 0.5) ++n;
    }
    return n;
}

double MixedIntegerModel::eval(const LinearExpr& expr,
                               const std::vector<double>& point) const {
    double acc = expr.constant;
    for (const auto& [v, c] : expr.terms) acc += c * point[static_cast<size_t>(v)];
    return acc;
}

double MixedIntegerModel::row_violation(int row, const std::vector<double>& point) const {
    const Constraint& c = rows_[static_cast<size_t>(row)];
    double lhs = 0.0;
    for (const auto& [v, coeff] : c.coeffs) lhs += coeff * point[static_cast<size_t>(v)];
    switch (c.sense) {
        case RowSense::LessEqual: return std::max(0.0, lhs - c.rhs);
        case RowSense::GreaterEqual: return std::max(0.0, c.rhs - lhs);
        case RowSense::Equal: return std::fabs(lhs - c.rhs);
    }
    return 0.0;
}

double MixedIntegerModel::max_scaled_violation(const std::vector<double>& point) const {
    double worst = 0.0;
    for (size_t i = 0; i < rows_.size(); ++i) {
        const Constraint& c = rows_[i];
        double scale = std::fabs(c.rhs);
        for (const auto& [v, coeff] : c.coeffs) scale = std::max(scale, std::fabs(coeff));
        scale = std::max(scale, 1.0);
        worst = std::max(worst, row_violation(static_cast<int>(i), point) / scale);
    }
    for (size_t j = 0; j < vars_.size(); ++j) {
        const Variable& v = vars_[j];
        double x = point[j];
        worst = std::max(worst, std::max(v.lb - x, x - v.ub));
    }
    return worst;
}

} // namespace decarb
