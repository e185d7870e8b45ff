#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "decarb/errors.hpp"
#include "decarb/model.hpp"

using namespace decarb;

TEST_CASE("linear expressions merge duplicates and drop zeros") {
    LinearExpr e;
    e.add(3, 1.5).add(1, 2.0).add(3, -1.5).add(2, 4.0);
    e.constant = 7.0;
    e.compress();
    REQUIRE(e.terms.size() == 2);
    CHECK(e.terms[0] == std::pair<int, double>(1, 2.0));
    CHECK(e.terms[1] == std::pair<int, double>(2, 4.0));
    CHECK(e.constant == 7.0);
}

TEST_CASE("binary variables are clamped to [0,1]") {
    MixedIntegerModel m;
    int b = m.add_variable("b", VarKind::Binary, -2.0, 5.0);
    CHECK(m.variable(b).lb == 0.0);
    CHECK(m.variable(b).ub == 1.0);
    CHECK(m.num_free_binaries() == 1);
    m.fix_variable(b, 1.0);
    CHECK(m.num_free_binaries() == 0);
}

TEST_CASE("duplicate names and dangling references are rejected") {
    MixedIntegerModel m;
    m.add_continuous("x", 0, 1);
    CHECK_THROWS_AS(m.add_continuous("x", 0, 2), BuildError);
    LinearExpr e;
    e.add(5, 1.0);
    CHECK_THROWS_AS(m.add_row("r", e, RowSense::LessEqual, 0.0), BuildError);
}

TEST_CASE("row constants fold into the right-hand side") {
    MixedIntegerModel m;
    int x = m.add_continuous("x", 0, 10);
    LinearExpr e;
    e.add(x, 2.0);
    e.constant = 3.0;
    int r = m.add_row("r", e, RowSense::LessEqual, 7.0);
    CHECK(m.row(r).rhs == 4.0);

    std::vector<double> p{1.0};
    CHECK(m.row_violation(r, p) == 0.0);
    p[0] = 3.0; // lhs 6 > 4
    CHECK(m.row_violation(r, p) == doctest::Approx(2.0));
}

TEST_CASE("objective evaluation includes the constant") {
    MixedIntegerModel m;
    int x = m.add_continuous("x", 0, 10);
    LinearExpr obj;
    obj.add(x, 2.0);
    obj.constant = 5.0;
    m.set_objective(obj);
    CHECK(m.eval_objective({3.0}) == doctest::Approx(11.0));
}

TEST_CASE("scaled violation covers rows and bounds") {
    MixedIntegerModel m;
    int x = m.add_continuous("x", 0, 1);
    LinearExpr e;
    e.add(x, 100.0);
    m.add_row("big", e, RowSense::LessEqual, 50.0);
    // x = 1: lhs 100 vs rhs 50, scale 100 -> 0.5 scaled violation.
    CHECK(m.max_scaled_violation({1.0}) == doctest::Approx(0.5));
    // Bound breach shows up unscaled.
    CHECK(m.max_scaled_violation({-0.25}) == doctest::Approx(0.25));
}
