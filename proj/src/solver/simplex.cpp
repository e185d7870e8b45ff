#include "decarb/solver/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "decarb/errors.hpp"

namespace decarb {

namespace {

enum class ColState : unsigned char { Basic, AtLower, AtUpper, FreeZero };

struct Workspace {
    int m = 0;       // rows
    int ncol = 0;    // structurals + one slack per row
    std::vector<std::vector<std::pair<int, double>>> cols; // sparse columns
    std::vector<double> lb, ub, cost;
    std::vector<double> rhs;

    std::vector<int> basis;           // m column ids
    std::vector<int> basis_pos;       // col -> row position, -1 if nonbasic
    std::vector<ColState> state;
    std::vector<double> x;            // all columns
    std::vector<double> binv;         // m*m row-major explicit inverse

    long pivots = 0;

    double binv_at(int i, int j) const { return binv[static_cast<size_t>(i) * m + j]; }
};

double nonbasic_rest_value(const Workspace& w, int j) {
    switch (w.state[static_cast<size_t>(j)]) {
        case ColState::AtLower: return w.lb[static_cast<size_t>(j)];
        case ColState::AtUpper: return w.ub[static_cast<size_t>(j)];
        default: return 0.0;
    }
}

// x_B = Binv * (rhs - N x_N), recomputed from scratch.
void recompute_basics(Workspace& w) {
    std::vector<double> r = w.rhs;
    for (int j = 0; j < w.ncol; ++j) {
        if (w.state[static_cast<size_t>(j)] == ColState::Basic) continue;
        double xj = nonbasic_rest_value(w, j);
        w.x[static_cast<size_t>(j)] = xj;
        if (xj == 0.0) continue;
        for (const auto& [row, coef] : w.cols[static_cast<size_t>(j)]) {
            r[static_cast<size_t>(row)] -= coef * xj;
        }
    }
    for (int i = 0; i < w.m; ++i) {
        double acc = 0.0;
        const double* brow = &w.binv[static_cast<size_t>(i) * w.m];
        for (int k = 0; k < w.m; ++k) acc += brow[k] * r[static_cast<size_t>(k)];
        w.x[static_cast<size_t>(w.basis[static_cast<size_t>(i)])] = acc;
    }
}

// Gauss-Jordan inversion of the current basis matrix with partial pivoting.
bool refactorize(Workspace& w) {
    const int m = w.m;
    std::vector<double> a(static_cast<size_t>(m) * m, 0.0);
    for (int p = 0; p < m; ++p) {
        for (const auto& [row, coef] : w.cols[static_cast<size_t>(w.basis[static_cast<size_t>(p)])]) {
            a[static_cast<size_t>(row) * m + p] = coef;
        }
    }
    std::vector<double>& inv = w.binv;
    std::fill(inv.begin(), inv.end(), 0.0);
    for (int i = 0; i < m; ++i) inv[static_cast<size_t>(i) * m + i] = 1.0;

    for (int col = 0; col < m; ++col) {
        int piv = -1;
        double best = 1e-11;
        for (int i = col; i < m; ++i) {
            double v = std::fabs(a[static_cast<size_t>(i) * m + col]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (piv < 0) return false;
        if (piv != col) {
            for (int k = 0; k < m; ++k) {
                std::swap(a[static_cast<size_t>(piv) * m + k], a[static_cast<size_t>(col) * m + k]);
                std::swap(inv[static_cast<size_t>(piv) * m + k], inv[static_cast<size_t>(col) * m + k]);
            }
        }
        double d = a[static_cast<size_t>(col) * m + col];
        double invd = 1.0 / d;
        for (int k = 0; k < m; ++k) {
            a[static_cast<size_t>(col) * m + k] *= invd;
            inv[static_cast<size_t>(col) * m + k] *= invd;
        }
        for (int i = 0; i < m; ++i) {
            if (i == col) continue;
            double f = a[static_cast<size_t>(i) * m + col];
            if (f == 0.0) continue;
            double* arow = &a[static_cast<size_t>(i) * m];
            double* irow = &inv[static_cast<size_t>(i) * m];
            const double* acol = &a[static_cast<size_t>(col) * m];
            const double* icol = &inv[static_cast<size_t>(col) * m];
            for (int k = 0; k < m; ++k) {
                arow[k] -= f * acol[k];
                irow[k] -= f * icol[k];
            }
        }
    }
    return true;
}

// w_col = Binv * A_j
void ftran(const Workspace& w, int j, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& [row, coef] : w.cols[static_cast<size_t>(j)]) {
        for (int i = 0; i < w.m; ++i) {
            out[static_cast<size_t>(i)] += w.binv[static_cast<size_t>(i) * w.m + row] * coef;
        }
    }
}

// y' = cb' * Binv
void btran(const Workspace& w, const std::vector<double>& cb, std::vector<double>& y) {
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < w.m; ++i) {
        double c = cb[static_cast<size_t>(i)];
        if (c == 0.0) continue;
        const double* brow = &w.binv[static_cast<size_t>(i) * w.m];
        for (int k = 0; k < w.m; ++k) y[static_cast<size_t>(k)] += c * brow[k];
    }
}

double sparse_dot(const Workspace& w, int j, const std::vector<double>& y) {
    double acc = 0.0;
    for (const auto& [row, coef] : w.cols[static_cast<size_t>(j)]) {
        acc += y[static_cast<size_t>(row)] * coef;
    }
    return acc;
}

// Replace basis position r by column 'entering'; rank-1 update of Binv.
void pivot_basis(Workspace& w, int r, int entering, const std::vector<double>& wcol) {
    double piv = wcol[static_cast<size_t>(r)];
    double* prow = &w.binv[static_cast<size_t>(r) * w.m];
    double inv = 1.0 / piv;
    for (int k = 0; k < w.m; ++k) prow[k] *= inv;
    for (int i = 0; i < w.m; ++i) {
        if (i == r) continue;
        double f = wcol[static_cast<size_t>(i)];
        if (f == 0.0) continue;
        double* irow = &w.binv[static_cast<size_t>(i) * w.m];
        for (int k = 0; k < w.m; ++k) irow[k] -= f * prow[k];
    }
    int leaving = w.basis[static_cast<size_t>(r)];
    w.basis_pos[static_cast<size_t>(leaving)] = -1;
    w.basis[static_cast<size_t>(r)] = entering;
    w.basis_pos[static_cast<size_t>(entering)] = r;
    w.state[static_cast<size_t>(entering)] = ColState::Basic;
    ++w.pivots;
}

constexpr double kBoundTol = 1e-9;

double infeasibility(const Workspace& w) {
    double f = 0.0;
    for (int i = 0; i < w.m; ++i) {
        int b = w.basis[static_cast<size_t>(i)];
        double v = w.x[static_cast<size_t>(b)];
        if (v > w.ub[static_cast<size_t>(b)]) f += v - w.ub[static_cast<size_t>(b)];
        if (v < w.lb[static_cast<size_t>(b)]) f += w.lb[static_cast<size_t>(b)] - v;
    }
    return f;
}

struct PriceResult {
    int col = -1;
    double dj = 0.0;
    int dir = 0;
};

// Pick the entering column. Dantzig by default; 'bland' forces the lowest
// eligible index (anti-cycling).
PriceResult price(const Workspace& w, const std::vector<double>& y,
                  const std::vector<double>& cost, double dtol, bool bland) {
    PriceResult best;
    double best_score = dtol;
    for (int j = 0; j < w.ncol; ++j) {
        ColState st = w.state[static_cast<size_t>(j)];
        if (st == ColState::Basic) continue;
        if (w.ub[static_cast<size_t>(j)] - w.lb[static_cast<size_t>(j)] < kBoundTol &&
            st != ColState::FreeZero) {
            continue; // fixed column can never improve
        }
        double dj = cost[static_cast<size_t>(j)] - sparse_dot(w, j, y);
        int dir = 0;
        if (st == ColState::AtLower && dj < -dtol) dir = 1;
        else if (st == ColState::AtUpper && dj > dtol) dir = -1;
        else if (st == ColState::FreeZero && std::fabs(dj) > dtol) dir = dj > 0 ? -1 : 1;
        if (dir == 0) continue;
        if (bland) {
            best.col = j;
            best.dj = dj;
            best.dir = dir;
            return best;
        }
        double score = std::fabs(dj);
        if (score > best_score) {
            best_score = score;
            best.col = j;
            best.dj = dj;
            best.dir = dir;
        }
    }
    return best;
}

struct RatioResult {
    double theta = kInfinity;
    int blocking_row = -1;   // -1: bound flip of the entering column
    bool to_upper = false;   // leaving variable rests at upper bound
};

// Phase-2 ratio test: basic variables block at their bounds; the entering
// column may also flip across its own range.
RatioResult ratio_phase2(const Workspace& w, int entering, int dir,
                         const std::vector<double>& wcol) {
    RatioResult res;
    double span = w.ub[static_cast<size_t>(entering)] - w.lb[static_cast<size_t>(entering)];
    if (span < kInfinity) res.theta = span;
    for (int i = 0; i < w.m; ++i) {
        int b = w.basis[static_cast<size_t>(i)];
        double delta = -dir * wcol[static_cast<size_t>(i)];
        if (std::fabs(delta) < 1e-11) continue;
        double xv = w.x[static_cast<size_t>(b)];
        double theta;
        bool upper;
        if (delta > 0) {
            if (w.ub[static_cast<size_t>(b)] >= kInfinity) continue;
            theta = (w.ub[static_cast<size_t>(b)] - xv) / delta;
            upper = true;
        } else {
            if (w.lb[static_cast<size_t>(b)] <= -kInfinity) continue;
            theta = (w.lb[static_cast<size_t>(b)] - xv) / delta;
            upper = false;
        }
        theta = std::max(theta, 0.0);
        if (theta < res.theta - 1e-12 ||
            (theta < res.theta + 1e-12 && res.blocking_row >= 0 &&
             b < w.basis[static_cast<size_t>(res.blocking_row)])) {
            res.theta = theta;
            res.blocking_row = i;
            res.to_upper = upper;
        }
    }
    return res;
}

// Phase-1 ratio test: stop at the first breakpoint where the composite
// infeasibility gradient changes — a violated basic reaching its violated
// bound, a feasible basic reaching either bound, or the entering column
// exhausting its own range.
RatioResult ratio_phase1(const Workspace& w, int entering, int dir,
                         const std::vector<double>& wcol) {
    RatioResult res;
    double span = w.ub[static_cast<size_t>(entering)] - w.lb[static_cast<size_t>(entering)];
    if (span < kInfinity) res.theta = span;
    for (int i = 0; i < w.m; ++i) {
        int b = w.basis[static_cast<size_t>(i)];
        double delta = -dir * wcol[static_cast<size_t>(i)];
        if (std::fabs(delta) < 1e-11) continue;
        double xv = w.x[static_cast<size_t>(b)];
        double lo = w.lb[static_cast<size_t>(b)];
        double hi = w.ub[static_cast<size_t>(b)];
        double theta = kInfinity;
        bool upper = false;
        if (delta > 0) {
            if (xv < lo - kBoundTol) {
                theta = (lo - xv) / delta;
                upper = false;
            } else if (hi < kInfinity) {
                theta = (hi - xv) / delta;
                upper = true;
            }
        } else {
            if (xv > hi + kBoundTol) {
                theta = (hi - xv) / delta;
                upper = true;
            } else if (lo > -kInfinity) {
                theta = (lo - xv) / delta;
                upper = false;
            }
        }
        if (theta >= kInfinity) continue;
        theta = std::max(theta, 0.0);
        if (theta < res.theta - 1e-12 ||
            (theta < res.theta + 1e-12 && res.blocking_row >= 0 &&
             b < w.basis[static_cast<size_t>(res.blocking_row)])) {
            res.theta = theta;
            res.blocking_row = i;
            res.to_upper = upper;
        }
    }
    return res;
}

void apply_step(Workspace& w, int entering, int dir, double theta,
                const std::vector<double>& wcol) {
    if (theta != 0.0) {
        w.x[static_cast<size_t>(entering)] += dir * theta;
        for (int i = 0; i < w.m; ++i) {
            int b = w.basis[static_cast<size_t>(i)];
            w.x[static_cast<size_t>(b)] -= dir * theta * wcol[static_cast<size_t>(i)];
        }
    }
}

// One simplex phase; returns true when no eligible entering column remains.
bool run_phase(Workspace& w, bool phase1, const std::vector<double>& cost2,
               long max_iters, long& iters, bool& unbounded) {
    const int m = w.m;
    std::vector<double> cb(static_cast<size_t>(m));
    std::vector<double> y(static_cast<size_t>(m));
    std::vector<double> wcol(static_cast<size_t>(m));
    std::vector<double> cost1(static_cast<size_t>(w.ncol), 0.0);
    int degenerate_streak = 0;
    bool bland = false;
    long since_factor = 0;

    while (true) {
        if (max_iters > 0 && iters >= max_iters) return true;
        ++iters;

        const std::vector<double>* cost;
        if (phase1) {
            // Composite cost: +-1 on violated basics.
            std::fill(cost1.begin(), cost1.end(), 0.0);
            bool any_viol = false;
            for (int i = 0; i < m; ++i) {
                int b = w.basis[static_cast<size_t>(i)];
                double v = w.x[static_cast<size_t>(b)];
                if (v > w.ub[static_cast<size_t>(b)] + kBoundTol) {
                    cost1[static_cast<size_t>(b)] = 1.0;
                    any_viol = true;
                } else if (v < w.lb[static_cast<size_t>(b)] - kBoundTol) {
                    cost1[static_cast<size_t>(b)] = -1.0;
                    any_viol = true;
                }
            }
            if (!any_viol) return true;
            cost = &cost1;
        } else {
            cost = &cost2;
        }

        for (int i = 0; i < m; ++i) cb[static_cast<size_t>(i)] = (*cost)[static_cast<size_t>(w.basis[static_cast<size_t>(i)])];
        btran(w, cb, y);
        PriceResult pr = price(w, y, *cost, 1e-9, bland);
        if (pr.col < 0) return true;

        ftran(w, pr.col, wcol);
        RatioResult rr = phase1 ? ratio_phase1(w, pr.col, pr.dir, wcol)
                                : ratio_phase2(w, pr.col, pr.dir, wcol);
        if (rr.theta >= kInfinity) {
            if (phase1) {
                // Composite objective is bounded below; an unbounded ray here
                // means numerical trouble, treat as stalled.
                return true;
            }
            unbounded = true;
            return true;
        }

        if (rr.theta < 1e-11) {
            if (++degenerate_streak > 40) bland = true;
        } else {
            degenerate_streak = 0;
            bland = false;
        }

        apply_step(w, pr.col, pr.dir, rr.theta, wcol);

        if (rr.blocking_row < 0) {
            // Bound flip: entering column moves to its other bound.
            w.state[static_cast<size_t>(pr.col)] =
                pr.dir > 0 ? ColState::AtUpper : ColState::AtLower;
            w.x[static_cast<size_t>(pr.col)] = nonbasic_rest_value(w, pr.col);
        } else {
            int leaving = w.basis[static_cast<size_t>(rr.blocking_row)];
            pivot_basis(w, rr.blocking_row, pr.col, wcol);
            w.state[static_cast<size_t>(leaving)] =
                rr.to_upper ? ColState::AtUpper : ColState::AtLower;
            w.x[static_cast<size_t>(leaving)] = nonbasic_rest_value(w, leaving);
            ++since_factor;
            if (since_factor >= 512) {
                if (!refactorize(w)) throw SolveError("simplex basis became singular");
                recompute_basics(w);
                since_factor = 0;
            }
        }
    }
}

} // namespace

LpProblem lp_from_model(const MixedIntegerModel& model) {
    LpProblem lp;
    lp.num_vars = model.num_variables();
    lp.cost.assign(static_cast<size_t>(lp.num_vars), 0.0);
    for (const auto& [v, c] : model.objective().terms) lp.cost[static_cast<size_t>(v)] = c;
    lp.cost_constant = model.objective().constant;
    lp.lb.resize(static_cast<size_t>(lp.num_vars));
    lp.ub.resize(static_cast<size_t>(lp.num_vars));
    for (int j = 0; j < lp.num_vars; ++j) {
        lp.lb[static_cast<size_t>(j)] = model.variable(j).lb;
        lp.ub[static_cast<size_t>(j)] = model.variable(j).ub;
    }
    lp.rows.reserve(static_cast<size_t>(model.num_rows()));
    for (const auto& r : model.rows()) {
        LpProblem::Row row;
        row.sense = r.sense;
        row.rhs = r.rhs;
        row.coeffs = r.coeffs;
        lp.rows.push_back(std::move(row));
    }
    return lp;
}

LpResult solve_lp(const LpProblem& lp, double feas_tol, long max_iters) {
    const int n = lp.num_vars;
    const int m = static_cast<int>(lp.rows.size());
    Workspace w;
    w.m = m;
    w.ncol = n + m;
    w.cols.resize(static_cast<size_t>(w.ncol));
    w.lb.resize(static_cast<size_t>(w.ncol));
    w.ub.resize(static_cast<size_t>(w.ncol));
    w.cost.assign(static_cast<size_t>(w.ncol), 0.0);
    w.rhs.resize(static_cast<size_t>(m));

    for (int j = 0; j < n; ++j) {
        w.lb[static_cast<size_t>(j)] = lp.lb[static_cast<size_t>(j)];
        w.ub[static_cast<size_t>(j)] = lp.ub[static_cast<size_t>(j)];
        w.cost[static_cast<size_t>(j)] = lp.cost[static_cast<size_t>(j)];
    }
    for (int i = 0; i < m; ++i) {
        const auto& row = lp.rows[static_cast<size_t>(i)];
        w.rhs[static_cast<size_t>(i)] = row.rhs;
        for (const auto& [v, c] : row.coeffs) {
            if (c != 0.0) w.cols[static_cast<size_t>(v)].emplace_back(i, c);
        }
        int slack = n + i;
        w.cols[static_cast<size_t>(slack)].emplace_back(i, 1.0);
        switch (row.sense) {
            case RowSense::LessEqual:
                w.lb[static_cast<size_t>(slack)] = 0.0;
                w.ub[static_cast<size_t>(slack)] = kInfinity;
                break;
            case RowSense::GreaterEqual:
                w.lb[static_cast<size_t>(slack)] = -kInfinity;
                w.ub[static_cast<size_t>(slack)] = 0.0;
                break;
            case RowSense::Equal:
                w.lb[static_cast<size_t>(slack)] = 0.0;
                w.ub[static_cast<size_t>(slack)] = 0.0;
                break;
        }
    }

    w.basis.resize(static_cast<size_t>(m));
    w.basis_pos.assign(static_cast<size_t>(w.ncol), -1);
    w.state.assign(static_cast<size_t>(w.ncol), ColState::AtLower);
    w.x.assign(static_cast<size_t>(w.ncol), 0.0);
    for (int j = 0; j < w.ncol; ++j) {
        if (w.lb[static_cast<size_t>(j)] <= -kInfinity && w.ub[static_cast<size_t>(j)] >= kInfinity) {
            w.state[static_cast<size_t>(j)] = ColState::FreeZero;
        } else if (w.lb[static_cast<size_t>(j)] <= -kInfinity) {
            w.state[static_cast<size_t>(j)] = ColState::AtUpper;
        } else {
            w.state[static_cast<size_t>(j)] = ColState::AtLower;
        }
    }
    for (int i = 0; i < m; ++i) {
        int slack = n + i;
        w.basis[static_cast<size_t>(i)] = slack;
        w.basis_pos[static_cast<size_t>(slack)] = i;
        w.state[static_cast<size_t>(slack)] = ColState::Basic;
    }
    w.binv.assign(static_cast<size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) w.binv[static_cast<size_t>(i) * m + i] = 1.0;
    recompute_basics(w);

    LpResult result;
    long iters = 0;
    bool unbounded = false;
    if (max_iters <= 0) max_iters = 2000L * (m + n) + 20000L;

    run_phase(w, true, w.cost, max_iters, iters, unbounded);
    recompute_basics(w);
    if (infeasibility(w) > feas_tol * (1.0 + static_cast<double>(m))) {
        // One clean retry from a fresh factorization before declaring defeat.
        if (!refactorize(w)) throw SolveError("simplex basis became singular");
        recompute_basics(w);
        long more = 0;
        run_phase(w, true, w.cost, max_iters, more, unbounded);
        iters += more;
        recompute_basics(w);
        if (infeasibility(w) > feas_tol * (1.0 + static_cast<double>(m))) {
            result.status = (max_iters > 0 && iters >= max_iters) ? LpStatus::IterationLimit
                                                                  : LpStatus::Infeasible;
            result.iterations = iters;
            return result;
        }
    }

    run_phase(w, false, w.cost, max_iters, iters, unbounded);
    recompute_basics(w);
    result.iterations = iters;
    if (unbounded) {
        result.status = LpStatus::Unbounded;
        return result;
    }
    if (max_iters > 0 && iters >= max_iters) {
        result.status = LpStatus::IterationLimit;
        return result;
    }

    result.status = LpStatus::Optimal;
    result.x.assign(w.x.begin(), w.x.begin() + n);
    double obj = lp.cost_constant;
    for (int j = 0; j < n; ++j) obj += lp.cost[static_cast<size_t>(j)] * result.x[static_cast<size_t>(j)];
    result.objective = obj;
    return result;
}

} // namespace decarb
