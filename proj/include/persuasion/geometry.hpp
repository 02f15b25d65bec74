#pragma once

#include <vector>

#include "persuasion/rational.hpp"

namespace persuasion {

/// A point in the (receiver, sender) utility plane.
struct Point {
  Rational rho;
  Rational xi;
};

/// Pareto-optimal part of the upper convex hull of a point set.
///
/// All indices refer to the input vector. Vertices have strictly increasing
/// rho and strictly decreasing xi; segment i joins vertices i and i+1, and
/// segment slopes are strictly negative and strictly decreasing. Among
/// coincident input points the earliest one represents them.
struct ParetoFrontier {
  struct Segment {
    int left = 0;   // higher-xi endpoint
    int right = 0;  // higher-rho endpoint
    Rational slope;
    std::vector<int> interior;  // collinear points strictly inside
  };
  std::vector<int> vertices;
  std::vector<Segment> segments;
};

struct SlopeCorrespondence {
  bool is_segment = false;
  int vertex = -1;  // when !is_segment
  int left = -1;    // when is_segment
  int right = -1;
};

/// Precondition: points non-empty.
ParetoFrontier pareto_frontier(const std::vector<Point>& points);

/// The vertex or segment maximizing xi - s*rho. s = 0 gives the sender-best
/// vertex, s = -inf the receiver-best one. Precondition: s <= 0.
SlopeCorrespondence point_for_slope(const ParetoFrontier& frontier,
                                    const Slope& s);

/// Slope of the line through p and q; -inf for a vertical pair.
/// Precondition: p != q.
Slope slope_between(const Point& p, const Point& q);

/// Sign of xi_d - (xi_c + s*(rho_d - rho_c)) for finite s: +1 above the line
/// through c, 0 on it, -1 below. For s = -inf the line is vertical and
/// "above" means larger rho.
int side_of_line(const Point& c, const Slope& s, const Point& d);

}  // namespace persuasion
