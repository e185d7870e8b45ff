#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "decarb/errors.hpp"
#include "decarb/solver/backend.hpp"
#include "decarb/solver/mps.hpp"
#include "decarb/solver/simplex.hpp"
#include "support/mps_reader.hpp"

using namespace decarb;

namespace {

SolveOptions opts() {
    SolveOptions o;
    o.relative_gap_tol = 1e-9;
    return o;
}

// Exhaustive oracle: try every binary assignment, solve the remaining LP.
SolutionVector enumerate_solve(const MixedIntegerModel& model) {
    std::vector<int> bins;
    for (int j = 0; j < model.num_variables(); ++j) {
        const Variable& v = model.variable(j);
        if (v.kind == VarKind::Binary && v.ub - v.lb > 0.5) bins.push_back(j);
    }
    SolutionVector best;
    best.status = SolveStatus::Infeasible;
    double best_obj = kInfinity;
    for (unsigned mask = 0; mask < (1u << bins.size()); ++mask) {
        LpProblem lp = lp_from_model(model);
        for (size_t i = 0; i < bins.size(); ++i) {
            double v = (mask >> i) & 1u ? 1.0 : 0.0;
            lp.lb[static_cast<size_t>(bins[i])] = v;
            lp.ub[static_cast<size_t>(bins[i])] = v;
        }
        LpResult r = solve_lp(lp);
        if (r.status != LpStatus::Optimal) continue;
        if (r.objective < best_obj) {
            best_obj = r.objective;
            best.status = SolveStatus::Optimal;
            best.objective = r.objective;
            best.values.clear();
            for (int j = 0; j < model.num_variables(); ++j) {
                best.values[model.variable(j).name] = r.x[static_cast<size_t>(j)];
            }
        }
    }
    return best;
}

} // namespace

TEST_CASE("pure LP: min x subject to x >= 3") {
    MixedIntegerModel m;
    int x = m.add_continuous("x", 0, kInfinity);
    LinearExpr row;
    row.add(x, 1.0);
    m.add_row("floor", row, RowSense::GreaterEqual, 3.0);
    LinearExpr obj;
    obj.add(x, 1.0);
    m.set_objective(obj);

    SolutionVector sv = reference_solve(m, opts());
    REQUIRE(sv.status == SolveStatus::Optimal);
    CHECK(sv.objective == doctest::Approx(3.0));
    CHECK(sv.value("x") == doctest::Approx(3.0));
}

TEST_CASE("infeasible bounds are reported") {
    MixedIntegerModel m;
    int x = m.add_continuous("x", 0, kInfinity);
    LinearExpr ge, le;
    ge.add(x, 1.0);
    le.add(x, 1.0);
    m.add_row("ge2", ge, RowSense::GreaterEqual, 2.0);
    m.add_row("le1", le, RowSense::LessEqual, 1.0);
    m.set_objective(LinearExpr{});

    SolutionVector sv = reference_solve(m, opts());
    CHECK(sv.status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded LP is flagged") {
    MixedIntegerModel m;
    int x = m.add_continuous("x", -kInfinity, kInfinity);
    LinearExpr obj;
    obj.add(x, 1.0);
    m.set_objective(obj);
    SolutionVector sv = reference_solve(m, opts());
    CHECK(sv.status == SolveStatus::Unbounded);
}

TEST_CASE("3-item knapsack matches subset enumeration") {
    // max 10a + 6b + 4c s.t. 5a + 4b + 3c <= 10  ->  min negated
    MixedIntegerModel m;
    int a = m.add_binary("a");
    int b = m.add_binary("b");
    int c = m.add_binary("c");
    LinearExpr cap;
    cap.add(a, 5).add(b, 4).add(c, 3);
    m.add_row("cap", cap, RowSense::LessEqual, 10.0);
    LinearExpr obj;
    obj.add(a, -10).add(b, -6).add(c, -4);
    m.set_objective(obj);

    SolutionVector got = reference_solve(m, opts());
    SolutionVector want = enumerate_solve(m);
    REQUIRE(got.status == SolveStatus::Optimal);
    CHECK(got.objective == doctest::Approx(want.objective).epsilon(1e-9));
    CHECK(got.objective == doctest::Approx(-16.0)); // a + b
    CHECK(std::fabs(got.objective - got.bound) <= 1e-6 * std::max(1.0, std::fabs(got.objective)));
}

TEST_CASE("branch and bound equals enumeration on random MILPs") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> coef(-4.0, 4.0);
    std::uniform_int_distribution<int> nbin_d(1, 8), ncont_d(0, 4), nrow_d(1, 6);

    for (int trial = 0; trial < 30; ++trial) {
        MixedIntegerModel m;
        int nb = nbin_d(rng), nc = ncont_d(rng), nr = nrow_d(rng);
        std::vector<int> vars;
        for (int i = 0; i < nb; ++i) vars.push_back(m.add_binary("b" + std::to_string(i)));
        for (int i = 0; i < nc; ++i) vars.push_back(m.add_continuous("x" + std::to_string(i), 0.0, 3.0));
        for (int r = 0; r < nr; ++r) {
            LinearExpr e;
            for (int v : vars) {
                if ((rng() & 3u) == 0u) continue;
                e.add(v, std::round(coef(rng) * 4) / 4.0);
            }
            // Keep right-hand sides generous enough that many instances are feasible.
            m.add_row("r" + std::to_string(r), e, RowSense::LessEqual,
                      std::fabs(coef(rng)) * 2.0 + 1.0);
        }
        LinearExpr obj;
        for (int v : vars) obj.add(v, std::round(coef(rng) * 4) / 4.0);
        m.set_objective(obj);

        SolutionVector got = reference_solve(m, opts());
        SolutionVector want = enumerate_solve(m);
        REQUIRE(got.status == want.status);
        if (want.status == SolveStatus::Optimal) {
            CHECK(got.objective == doctest::Approx(want.objective).epsilon(1e-6));
        }
    }
}

TEST_CASE("scale guard trips above 40 free binaries") {
    MixedIntegerModel m;
    for (int i = 0; i < 41; ++i) m.add_binary("b" + std::to_string(i));
    m.set_objective(LinearExpr{});
    CHECK_THROWS_AS(reference_solve(m, opts()), ScaleGuardError);
    // Fixed binaries do not count against the guard.
    for (int i = 0; i < 10; ++i) m.fix_variable(i, 1.0);
    CHECK(m.num_free_binaries() == 31);
    CHECK_NOTHROW(reference_solve(m, opts()));
}

TEST_CASE("bounded variables and equality rows") {
    // min -x - y s.t. x + y = 1.5, x in [0,1], y in [0,1]
    MixedIntegerModel m;
    int x = m.add_continuous("x", 0, 1);
    int y = m.add_continuous("y", 0, 1);
    LinearExpr e;
    e.add(x, 1).add(y, 1);
    m.add_row("sum", e, RowSense::Equal, 1.5);
    LinearExpr obj;
    obj.add(x, -1).add(y, -1);
    m.set_objective(obj);
    SolutionVector sv = reference_solve(m, opts());
    REQUIRE(sv.status == SolveStatus::Optimal);
    CHECK(sv.objective == doctest::Approx(-1.5));
}

TEST_CASE("LP bound is non-decreasing as branches tighten") {
    MixedIntegerModel m;
    int a = m.add_binary("a");
    int x = m.add_continuous("x", 0, 5);
    LinearExpr e;
    e.add(a, 2).add(x, 1);
    m.add_row("mix", e, RowSense::GreaterEqual, 2.5);
    LinearExpr obj;
    obj.add(a, 3).add(x, 1);
    m.set_objective(obj);

    LpResult root = solve_lp(lp_from_model(m));
    REQUIRE(root.status == LpStatus::Optimal);
    for (double fixed : {0.0, 1.0}) {
        MixedIntegerModel child = m;
        child.fix_variable(a, fixed);
        LpResult r = solve_lp(lp_from_model(child));
        if (r.status == LpStatus::Optimal) {
            CHECK(r.objective >= root.objective - 1e-9);
        }
    }
}

TEST_CASE("empty model produces a valid MPS skeleton") {
    MixedIntegerModel m;
    m.name = "empty";
    std::string text = emit_mps(m);
    CHECK(text.find("NAME") == 0);
    CHECK(text.find("ROWS\n") != std::string::npos);
    CHECK(text.find("COLUMNS\n") != std::string::npos);
    CHECK(text.find("ENDATA\n") != std::string::npos);
    std::istringstream in(text);
    auto parsed = testsupport::read_mps(in);
    CHECK(parsed.cols.empty());
}

TEST_CASE("MPS round-trips coefficients through the independent reader") {
    MixedIntegerModel m;
    m.name = "rt";
    int x = m.add_continuous("x", -1.25, 7.5);
    int b = m.add_binary("pick");
    int f = m.add_continuous("free", -kInfinity, kInfinity);
    LinearExpr r1, r2;
    r1.add(x, 0.1).add(b, -3.75);
    r2.add(x, 2.0).add(f, 1.0 / 3.0);
    m.add_row("cap", r1, RowSense::LessEqual, 4.25);
    m.add_row("bal", r2, RowSense::Equal, -1.0);
    LinearExpr obj;
    obj.add(x, 1.5).add(b, 2.25).add(f, -0.5);
    obj.constant = 12.125;
    m.set_objective(obj);

    std::string text = emit_mps(m);
    std::istringstream in(text);
    auto parsed = testsupport::read_mps(in);

    REQUIRE(parsed.cols.size() == 3);
    CHECK(parsed.cols.at("pick").integer);
    CHECK(!parsed.cols.at("x").integer);
    CHECK(parsed.rows.at("cap").sense == 'L');
    CHECK(parsed.rows.at("bal").sense == 'E');
    CHECK(parsed.rows.at("cap").coeffs.at("x") == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(parsed.rows.at("bal").coeffs.at("free") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(parsed.cols.at("x").lb == doctest::Approx(-1.25));
    CHECK(parsed.cols.at("x").ub == doctest::Approx(7.5));

    // Objective agreement on a fixed assignment.
    std::map<std::string, double> assign{{"x", 1.7}, {"pick", 1.0}, {"free", -2.2}};
    std::vector<double> point{1.7, 1.0, -2.2};
    CHECK(parsed.eval_objective(assign) ==
          doctest::Approx(m.eval_objective(point)).epsilon(1e-12));
}

TEST_CASE("identical models serialize byte-identically") {
    auto build = []() {
        MixedIntegerModel m;
        m.name = "det";
        int x = m.add_continuous("x", 0, 2);
        int b = m.add_binary("b");
        LinearExpr e;
        e.add(x, 1).add(b, 2);
        m.add_row("row", e, RowSense::LessEqual, 2.0);
        LinearExpr obj;
        obj.add(x, -1);
        m.set_objective(obj);
        return emit_mps(m);
    };
    CHECK(build() == build());
}

TEST_CASE("duplicate names cannot reach serialization") {
    MixedIntegerModel m;
    m.add_continuous("x", 0, 1);
    CHECK_THROWS_AS(m.add_binary("x"), BuildError);
}

TEST_CASE("solution parsing: values, defaults, status") {
    MixedIntegerModel m;
    m.add_continuous("x", 0, 10);
    m.add_continuous("y", 0, 10);
    LinearExpr obj;
    obj.add(0, 1.0);
    m.set_objective(obj);

    SUBCASE("plain value line") {
        std::istringstream in("# status: optimal\nx 1.0\ny 2.5\n");
        SolutionVector sv = parse_solution(in, m);
        CHECK(sv.status == SolveStatus::Optimal);
        CHECK(sv.value("x") == doctest::Approx(1.0));
        CHECK(sv.value("y") == doctest::Approx(2.5));
        CHECK(sv.objective == doctest::Approx(1.0));
    }
    SUBCASE("missing variable defaults to zero with a warning") {
        std::istringstream in("x 4\n");
        SolutionVector sv = parse_solution(in, m);
        CHECK(sv.value("y") == 0.0);
        bool warned = false;
        for (const auto& w : sv.warnings) {
            if (w.find("'y'") != std::string::npos) warned = true;
        }
        CHECK(warned);
    }
    SUBCASE("infeasible status needs no values") {
        std::istringstream in("# status: infeasible\n");
        SolutionVector sv = parse_solution(in, m);
        CHECK(sv.status == SolveStatus::Infeasible);
        CHECK(sv.values.empty());
    }
    SUBCASE("malformed line reports its number") {
        std::istringstream in("x 1\nbogus\n");
        try {
            parse_solution(in, m);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
}

TEST_CASE("external solver integration via command template") {
    MixedIntegerModel m;
    m.add_continuous("x", 0, 10);
    LinearExpr obj;
    obj.add(0, 1.0);
    m.set_objective(obj);

    // Fake solver: ignores the model, emits a fixed solution.
    std::string script = "printf '# status: optimal\\nx 4.5\\n' > {sol}; test -s {mps}";
    SolutionVector sv = external_solve(m, SolveOptions{}, script);
    CHECK(sv.status == SolveStatus::Optimal);
    CHECK(sv.value("x") == doctest::Approx(4.5));

    CHECK_THROWS_AS(external_solve(m, SolveOptions{}, "no-placeholders"), SolveError);
}
