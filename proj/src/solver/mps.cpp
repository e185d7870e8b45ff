#include "decarb/solver/mps.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "decarb/errors.hpp"

namespace decarb {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_name(const std::string& n) {
    if (n.empty() || n.size() > 255) {
        throw BuildError("MPS name must be 1..255 chars: '" + n + "'");
    }
    for (char c : n) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            throw BuildError("MPS name contains whitespace: '" + n + "'");
        }
    }
}

} // namespace

std::string emit_mps(const MixedIntegerModel& model) {
    std::ostringstream out;
    check_name(model.name.empty() ? std::string("MODEL") : model.name);
    out << "NAME          " << (model.name.empty() ? "MODEL" : model.name) << "\n";

    out << "ROWS\n";
    out << " N  COST\n";
    for (const auto& row : model.rows()) {
        check_name(row.name);
        char s = row.sense == RowSense::LessEqual ? 'L'
                 : row.sense == RowSense::Equal   ? 'E'
                                                  : 'G';
        out << " " << s << "  " << row.name << "\n";
    }

    // Column-major view of the constraint matrix.
    std::vector<std::vector<std::pair<int, double>>> by_col(
        static_cast<size_t>(model.num_variables()));
    for (int i = 0; i < model.num_rows(); ++i) {
        for (const auto& [v, c] : model.row(i).coeffs) {
            by_col[static_cast<size_t>(v)].emplace_back(i, c);
        }
    }
    std::vector<double> obj_coef(static_cast<size_t>(model.num_variables()), 0.0);
    for (const auto& [v, c] : model.objective().terms) obj_coef[static_cast<size_t>(v)] = c;

    out << "COLUMNS\n";
    bool in_integer = false;
    int marker = 0;
    for (int j = 0; j < model.num_variables(); ++j) {
        const Variable& var = model.variable(j);
        check_name(var.name);
        bool integer = var.kind == VarKind::Binary;
        if (integer && !in_integer) {
            out << "    MARKER" << marker++ << "  'MARKER'  'INTORG'\n";
            in_integer = true;
        } else if (!integer && in_integer) {
            out << "    MARKER" << marker++ << "  'MARKER'  'INTEND'\n";
            in_integer = false;
        }
        if (obj_coef[static_cast<size_t>(j)] != 0.0) {
            out << "    " << var.name << "  COST  " << fmt(obj_coef[static_cast<size_t>(j)]) << "\n";
        }
        for (const auto& [row, c] : by_col[static_cast<size_t>(j)]) {
            out << "    " << var.name << "  " << model.row(row).name << "  " << fmt(c) << "\n";
        }
        if (obj_coef[static_cast<size_t>(j)] == 0.0 && by_col[static_cast<size_t>(j)].empty()) {
            // Keep empty columns visible so the variable survives the trip.
            out << "    " << var.name << "  COST  0\n";
        }
    }
    if (in_integer) out << "    MARKER" << marker++ << "  'MARKER'  'INTEND'\n";

    out << "RHS\n";
    if (model.objective().constant != 0.0) {
        // Convention: objective constant is the negated RHS of the cost row.
        out << "    RHS  COST  " << fmt(-model.objective().constant) << "\n";
    }
    for (const auto& row : model.rows()) {
        if (row.rhs != 0.0) out << "    RHS  " << row.name << "  " << fmt(row.rhs) << "\n";
    }

    out << "BOUNDS\n";
    for (int j = 0; j < model.num_variables(); ++j) {
        const Variable& var = model.variable(j);
        bool lo_inf = var.lb <= -kInfinity;
        bool up_inf = var.ub >= kInfinity;
        if (var.kind == VarKind::Binary && var.lb == 0.0 && var.ub == 1.0) {
            out << " BV BND  " << var.name << "\n";
            continue;
        }
        if (!lo_inf && !up_inf && var.lb == var.ub) {
            out << " FX BND  " << var.name << "  " << fmt(var.lb) << "\n";
            continue;
        }
        if (lo_inf && up_inf) {
            out << " FR BND  " << var.name << "\n";
            continue;
        }
        if (lo_inf) {
            out << " MI BND  " << var.name << "\n";
        } else {
            out << " LO BND  " << var.name << "  " << fmt(var.lb) << "\n";
        }
        if (up_inf) {
            out << " PL BND  " << var.name << "\n";
        } else {
            out << " UP BND  " << var.name << "  " << fmt(var.ub) << "\n";
        }
    }
    out << "ENDATA\n";
    return out.str();
}

void write_mps_file(const MixedIntegerModel& model, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SolveError("cannot open " + path + " for writing");
    f << emit_mps(model);
    if (!f) throw SolveError("failed writing " + path);
}

SolutionVector parse_solution(std::istream& in, const MixedIntegerModel& model) {
    SolutionVector sv;
    sv.status = SolveStatus::Feasible;
    bool saw_status = false;
    std::map<std::string, double> parsed;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            std::istringstream ls(line.substr(start + 1));
            std::string key, value;
            ls >> key >> value;
            if (key == "status:" && !value.empty()) {
                sv.status = solve_status_from_string(value);
                saw_status = true;
            }
            continue;
        }
        std::istringstream ls(line.substr(start));
        std::string name, value_tok, extra;
        ls >> name >> value_tok;
        if (name.empty() || value_tok.empty()) {
            throw ParseError("solution line needs 'name value'", lineno);
        }
        if (ls >> extra) {
            throw ParseError("trailing token '" + extra + "' on solution line", lineno);
        }
        try {
            size_t pos = 0;
            double v = std::stod(value_tok, &pos);
            if (pos != value_tok.size()) throw std::invalid_argument(value_tok);
            parsed[name] = v;
        } catch (const std::exception&) {
            throw ParseError("bad numeric value '" + value_tok + "'", lineno);
        }
    }

    if (sv.status == SolveStatus::Infeasible || sv.status == SolveStatus::Unbounded) {
        return sv;
    }
    for (const auto& [name, v] : parsed) {
        if (model.variable_id(name) < 0) {
            sv.warnings.push_back("solution value for unknown variable '" + name + "' ignored");
        }
    }
    for (int j = 0; j < model.num_variables(); ++j) {
        const std::string& n = model.variable(j).name;
        auto it = parsed.find(n);
        if (it == parsed.end()) {
            sv.values.emplace(n, 0.0);
            sv.warnings.push_back("variable '" + n + "' absent from solution, defaulting to 0");
        } else {
            sv.values.emplace(n, it->second);
        }
    }
    std::vector<double> x = sv.as_point(model);
    sv.objective = model.eval_objective(x);
    if (!saw_status) sv.warnings.push_back("solution file has no status line, assuming feasible");
    return sv;
}

SolutionVector parse_solution_file(const std::string& path, const MixedIntegerModel& model) {
    std::ifstream f(path);
    if (!f) throw SolveError("cannot open solution file " + path);
    return parse_solution(f, model);
}

} // namespace decarb
