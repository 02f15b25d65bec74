#include "doctest.h"
#include "persuasion/geometry.hpp"
#include "persuasion/rng.hpp"

using namespace persuasion;

namespace {

Point pt(int rho, int xi) { return {Rational(rho), Rational(xi)}; }

}  // namespace

TEST_CASE("frontier of a singleton") {
  const auto f = pareto_frontier({pt(0, 0)});
  CHECK(f.vertices == std::vector<int>{0});
  CHECK(f.segments.empty());
}

TEST_CASE("dominated point is dropped") {
  const auto f = pareto_frontier({pt(1, 0), pt(0, 1), pt(0, 0)});
  CHECK(f.vertices == std::vector<int>{1, 0});
  REQUIRE(f.segments.size() == 1);
  CHECK(f.segments[0].left == 1);
  CHECK(f.segments[0].right == 0);
  CHECK(f.segments[0].slope == Rational(-1));
}

TEST_CASE("collinear middle point is recorded on the segment") {
  const auto f = pareto_frontier({pt(0, 2), pt(1, 1), pt(2, 0)});
  CHECK(f.vertices == std::vector<int>{0, 2});
  REQUIRE(f.segments.size() == 1);
  CHECK(f.segments[0].interior == std::vector<int>{1});
}

TEST_CASE("slope lookup") {
  const std::vector<Point> pts{pt(0, 1), pt(1, 0)};
  const auto f = pareto_frontier(pts);
  const auto exact = point_for_slope(f, Slope(Rational(-1)));
  CHECK(exact.is_segment);
  CHECK(exact.left == 0);
  CHECK(exact.right == 1);
  // A supporting line shallower than the segment touches the high-xi end,
  // a steeper one the high-rho end.
  CHECK(point_for_slope(f, Slope(Rational(-1, 2))).vertex == 0);
  CHECK(point_for_slope(f, Slope(Rational(-2))).vertex == 1);
  CHECK(point_for_slope(f, Slope(Rational(0))).vertex == 0);
  CHECK(point_for_slope(f, Slope::neg_infinity()).vertex == 1);
  CHECK_THROWS(point_for_slope(f, Slope(Rational(1))));
}

TEST_CASE("horizontal and vertical frontier edges") {
  // (0,1),(1,1): horizontal edge; slope 0 picks it as a segment.
  const auto h = pareto_frontier({pt(0, 1), pt(1, 1)});
  CHECK(h.vertices == std::vector<int>{1});
  const auto v = pareto_frontier({pt(1, 0), pt(1, 1)});
  CHECK(v.vertices == std::vector<int>{1});
  CHECK(slope_between(pt(1, 0), pt(1, 1)).is_neg_infinity());
  CHECK(side_of_line(pt(0, 0), Slope(Rational(-1)), pt(1, 0)) == 1);
  CHECK(side_of_line(pt(0, 1), Slope(Rational(-1)), pt(1, 0)) == 0);
  CHECK(side_of_line(pt(0, 1), Slope(Rational(-1)), pt(0, 0)) == -1);
}

TEST_CASE("property: every point lies under the frontier and vertices are undominated") {
  CounterRng rng(3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Point> pts;
    const int m = 1 + static_cast<int>(rng.below(8));
    for (int i = 0; i < m; ++i) {
      pts.push_back(pt(static_cast<int>(rng.below(5)), static_cast<int>(rng.below(5))));
    }
    const auto f = pareto_frontier(pts);
    // Dominated by some point of the frontier polyline: under every segment
    // line and inside the box spanned by the two extreme vertices.
    const Point& top = pts[f.vertices.front()];
    const Point& right = pts[f.vertices.back()];
    for (const auto& p : pts) {
      CHECK(p.rho <= right.rho);
      CHECK(p.xi <= top.xi);
    }
    // Vertices survive the pairwise dominance filter.
    for (int v : f.vertices) {
      for (const auto& p : pts) {
        CHECK_FALSE(((p.rho >= pts[v].rho && p.xi > pts[v].xi) ||
                     (p.rho > pts[v].rho && p.xi >= pts[v].xi)));
      }
    }
    for (std::size_t i = 0; i < f.segments.size(); ++i) {
      const auto& seg = f.segments[i];
      CHECK(seg.slope < Rational(0));
      if (i > 0) CHECK(seg.slope < f.segments[i - 1].slope);  // concave
      for (const auto& p : pts) {
        CHECK(side_of_line(pts[seg.left], Slope(seg.slope), p) <= 0);
      }
    }
  }
}
