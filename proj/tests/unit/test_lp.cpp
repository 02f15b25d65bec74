#include <cmath>

#include "doctest.h"
#include "persuasion/lp.hpp"
#include "persuasion/rng.hpp"

using namespace persuasion;

TEST_CASE("tiny LPs") {
  LinearProgram a(1);
  a.objective = {1};
  a.upper = {2};
  a.add_row({1}, Relation::le, 1);
  const auto sa = solve_lp(a);
  REQUIRE(sa.status == LpStatus::optimal);
  CHECK(sa.values[0] == doctest::Approx(1));
  CHECK(sa.objective == doctest::Approx(1));

  LinearProgram b(1);
  b.objective = {1};
  b.upper = {1};
  b.add_row({1}, Relation::ge, 2);
  CHECK(solve_lp(b).status == LpStatus::infeasible);

  LinearProgram c(2);
  c.objective = {1, 1};
  c.add_row({1, -1}, Relation::le, 0);
  CHECK(solve_lp(c).status == LpStatus::unbounded);
}

TEST_CASE("duals are shadow prices") {
  // max 3x + 5y, x + y <= 4, x + 3y <= 6, y >= 1/2: optimum (3, 1)
  LinearProgram lp(2);
  lp.objective = {3, 5};
  lp.add_row({1, 1}, Relation::le, 4);
  lp.add_row({1, 3}, Relation::le, 6);
  lp.add_row({0, 1}, Relation::ge, 0.5);
  const auto s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(14));
  CHECK(s.duals[0] == doctest::Approx(2));
  CHECK(s.duals[1] == doctest::Approx(1));
  CHECK(s.duals[2] == doctest::Approx(0));
}

// A degenerate feasibility system that once sent phase 1 through a 1e-9 pivot.
TEST_CASE("degenerate feasibility regression") {
  struct R {
    std::vector<double> c;
    Relation rel;
    double rhs;
  };
  const std::vector<R> rows{
      {{1, 1, 1, 1, 1}, Relation::eq, 1},
      {{0.0039062500000000182, 0.041875000000000016, -0.0026562500000001281, 0.00026041666666663246, 0.011901041666666586}, Relation::ge, 0},
      {{0.0039062500000000165, 0.033593749999999992, -0.0026562500000000535, 0.061302083333333326, 0.027656249999999938}, Relation::ge, 0},
      {{0.0039062500000000356, 0.033593749999999999, 0.06864583333333342, 0.03835937499999989, -0.043567708333333267}, Relation::ge, 0},
      {{0.010625000000000008, 7.5352050987742558e-18, -0.027447916666666641, -0.04549479166666668, -0.03294270833333332}, Relation::ge, 0},
      {{0.0039062499999997962, 0.12588541666666686, -0.002656250000000093, 0.0002604166666666041, 0.097291666666666568}, Relation::ge, 0},
      {{-0.0036979166666666527, 0.21432291666666689, -0.0070833333333333174, 0.043723958333333271, 0.11854166666666667}, Relation::ge, 0},
      {{-0.0036979166666666701, 0.21432291666666697, 0.05098958333333322, 0.02531249999999996, 0.044192708333333261}, Relation::ge, 0},
      {{0.0010416666666666474, 0.12588541666666689, -0.030156250000000006, -0.046770833333333262, 0.1282812500000001}, Relation::ge, 0},
      {{-0.0036979166666668019, 0.16895833333333321, -0.0070833333333333902, 0.16559895833333318, 0.049036458333333359}, Relation::ge, 0},
      {{-0.0036979166666666623, 0.21447916666666686, -0.007083333333333339, 0.16559895833333363, 0.13085937500000019}, Relation::ge, 0},
      {{-0.01083333333333332, 0.21635416666666688, 0.034427083333333296, 0.17890625000000024, 0.23591145833333382}, Relation::ge, 0},
      {{-0.0074479166666666669, 0.16895833333333349, -0.032395833333333353, 0.22838541666666706, 0.097942708333333378}, Relation::ge, 0},
      {{-0.010833333333333414, 0.16942708333333317, 0.16380208333333313, 0.076718749999999961, 0.090208333333333265}, Relation::ge, 0},
      {{-0.010833333333333334, 0.20791666666666689, 0.16380208333333357, 0.07671874999999985, 0.093776041666666574}, Relation::ge, 0},
      {{-0.010833333333333332, 0.21635416666666688, 0.16380208333333349, 0.13755208333333341, 0.090338541666666689}, Relation::ge, 0},
  };
  LinearProgram lp(5);
  for (const auto& r : rows) lp.add_row(r.c, r.rel, r.rhs);
  const auto s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::optimal);
  for (const auto& r : rows) {
    double lhs = 0;
    for (int j = 0; j < 5; ++j) lhs += r.c[j] * s.values[j];
    if (r.rel == Relation::eq) CHECK(lhs == doctest::Approx(r.rhs));
    if (r.rel == Relation::ge) CHECK(lhs >= r.rhs - 1e-9);
  }
}

TEST_CASE("slope LP examples") {
  const Slope m1(Rational(-1));
  const Point gb{Rational(0), Rational(1)}, bg{Rational(1), Rational(0)};
  const auto k3 = solve_slope_lp({{1.0, gb, bg}}, {}, 1.0 / 3, m1);
  REQUIRE(k3.feasible);
  CHECK(k3.alpha[0] == doctest::Approx(2.0 / 3));
  CHECK(k3.objective == doctest::Approx(2.0 / 3));

  const auto k2 = solve_slope_lp({{1.0 / 3, gb, bg}}, {{1.0 / 3, gb}, {1.0 / 3, bg}}, 1.0 / 3, m1);
  REQUIRE(k2.feasible);
  CHECK(k2.alpha[0] == doctest::Approx(1));
  CHECK(k2.objective == doctest::Approx(2.0 / 3));
  const auto g2 = solve_slope_lp_generic({{1.0 / 3, gb, bg}}, {{1.0 / 3, gb}, {1.0 / 3, bg}}, 1.0 / 3);
  CHECK(g2.objective == doctest::Approx(k2.objective));

  CHECK_FALSE(solve_slope_lp({}, {{1.0, gb}}, 0.5, m1).feasible);
}

TEST_CASE("property: closed-form slope LP equals the generic LP") {
  CounterRng rng(4, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const Rational s(-1 - static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3)));
    std::vector<SlopeLpSegment> segs;
    std::vector<SlopeLpUnique> uniq;
    double mass = 1;
    const int ns = static_cast<int>(rng.below(3)), nu = static_cast<int>(rng.below(3));
    for (int i = 0; i < ns; ++i) {
      const Rational lr(static_cast<int>(rng.below(3)) - 1, 2);
      const Rational lx(static_cast<int>(rng.below(3)), 2);
      const Rational dr(1 + static_cast<int>(rng.below(2)), 2);
      const double p = mass * rng.uniform() * 0.6;
      mass -= p;
      segs.push_back({p, {lr, lx}, {lr + dr, lx + s * dr}});
    }
    for (int i = 0; i < nu; ++i) {
      const double p = mass * rng.uniform() * 0.6;
      mass -= p;
      uniq.push_back({p, {Rational(static_cast<int>(rng.below(3)) - 1, 2),
                          Rational(static_cast<int>(rng.below(3)), 2)}});
    }
    const double rho_E = rng.uniform() * 0.4 - 0.2;
    const auto closed = solve_slope_lp(segs, uniq, rho_E, Slope(s));
    const auto generic = solve_slope_lp_generic(segs, uniq, rho_E);
    REQUIRE(closed.feasible == generic.feasible);
    if (!closed.feasible) continue;
    // The generic LP relaxes the receiver row by 1e-9; |s| <= 3 scales that.
    CHECK(std::abs(closed.objective - generic.objective) <= 1e-8);
    CHECK(closed.receiver >= rho_E - 1e-8);
    for (double a : closed.alpha) CHECK((a >= 0 && a <= 1));
  }
}

TEST_CASE("property: column generation matches the dense block LP") {
  CounterRng rng(6, 6);
  int optimal = 0;
  for (int trial = 0; trial < 150; ++trial) {
    BlockLp lp;
    lp.num_rows = 1 + static_cast<int>(rng.below(6));
    lp.rhs.assign(lp.num_rows, 0.0);
    const int blocks = 1 + static_cast<int>(rng.below(12));
    for (int b = 0; b < blocks; ++b) {
      lp.begin_block(rng.uniform() + 0.05);
      const int options = 1 + static_cast<int>(rng.below(4));
      for (int o = 0; o < options; ++o) {
        std::vector<std::pair<int, double>> entries;
        for (int r = 0; r < lp.num_rows; ++r) {
          if (rng.below(2)) entries.emplace_back(r, rng.uniform() * 2 - 0.8);
        }
        lp.add_option(rng.uniform(), entries);
      }
      lp.end_block();
    }
    const auto cg = solve_block_lp(lp);
    const auto dense = solve_block_lp_dense(lp);
    REQUIRE(cg.status == dense.status);
    if (cg.status != LpStatus::optimal) continue;
    ++optimal;
    CHECK(cg.objective == doctest::Approx(dense.objective).epsilon(1e-9));
    for (int b = 0; b < lp.num_blocks(); ++b) {
      double total = 0;
      for (int o = lp.block_begin[b]; o < lp.block_begin[b + 1]; ++o) {
        CHECK(cg.phi[o] >= -1e-12);
        total += cg.phi[o];
      }
      CHECK(total == doctest::Approx(1));
    }
  }
  CHECK(optimal > 30);
}
