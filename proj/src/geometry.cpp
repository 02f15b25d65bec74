#include "persuasion/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace persuasion {

namespace {

// Cross product of (b - a) x (c - a) with rho as x and xi as y.
Rational cross(const Point& a, const Point& b, const Point& c) {
  return (b.rho - a.rho) * (c.xi - a.xi) - (b.xi - a.xi) * (c.rho - a.rho);
}

}  // namespace

Slope slope_between(const Point& p, const Point& q) {
  if (p.rho == q.rho) {
    if (p.xi == q.xi) throw std::invalid_argument("slope of coincident points");
    return Slope::neg_infinity();
  }
  return Slope((q.xi - p.xi) / (q.rho - p.rho));
}

int side_of_line(const Point& c, const Slope& s, const Point& d) {
  if (s.is_neg_infinity()) {
    if (d.rho > c.rho) return 1;
    return d.rho == c.rho ? 0 : -1;
  }
  const Rational on_line = c.xi + s.value() * (d.rho - c.rho);
  if (d.xi > on_line) return 1;
  return d.xi == on_line ? 0 : -1;
}

ParetoFrontier pareto_frontier(const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("empty point set");

  // Sort by rho descending, xi descending, input order ascending; a sweep
  // then keeps exactly the Pareto-optimal representatives.
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (points[a].rho != points[b].rho) return points[a].rho > points[b].rho;
    return points[a].xi > points[b].xi;
  });
  std::vector<int> pareto;
  for (int idx : order) {
    if (pareto.empty() || points[idx].xi > points[pareto.back()].xi) {
      pareto.push_back(idx);
    }
  }
  std::reverse(pareto.begin(), pareto.end());  // rho ascending, xi descending

  // Upper hull by monotone chain; collinear middles are dropped.
  std::vector<int> hull;
  for (int idx : pareto) {
    while (hull.size() >= 2 &&
           cross(points[hull[hull.size() - 2]], points[hull.back()],
                 points[idx]) >= Rational(0)) {
      hull.pop_back();
    }
    hull.push_back(idx);
  }

  ParetoFrontier f;
  f.vertices = hull;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    ParetoFrontier::Segment seg;
    seg.left = hull[i];
    seg.right = hull[i + 1];
    const Point& a = points[seg.left];
    const Point& b = points[seg.right];
    seg.slope = (b.xi - a.xi) / (b.rho - a.rho);
    for (int idx : pareto) {
      const Point& p = points[idx];
      if (p.rho > a.rho && p.rho < b.rho && cross(a, b, p) == Rational(0)) {
        seg.interior.push_back(idx);
      }
    }
    f.segments.push_back(std::move(seg));
  }
  return f;
}

SlopeCorrespondence point_for_slope(const ParetoFrontier& frontier,
                                    const Slope& s) {
  if (!s.is_neg_infinity() && s.value() > Rational(0)) {
    throw std::invalid_argument("slope must be <= 0");
  }
  SlopeCorrespondence out;
  std::size_t shallower = 0;  // segments with slope > s lie to the left
  for (const auto& seg : frontier.segments) {
    const Slope ss(seg.slope);
    if (ss == s) {
      out.is_segment = true;
      out.left = seg.left;
      out.right = seg.right;
      return out;
    }
    if (ss > s) ++shallower;
  }
  out.vertex = frontier.vertices[shallower];
  return out;
}

}  // namespace persuasion
