#pragma once

#include <map>
#include <utility>
#include <vector>

#include "persuasion/geometry.hpp"
#include "persuasion/model.hpp"

namespace persuasion {

/// Sum over all r-subsets of the product of their values (elementary
/// symmetric polynomial e_r), by the O(n r) recurrence.
double subset_product_sum(const std::vector<double>& values, int r);

/// e_r divided by C(len, r): the mean product over r-subsets. Computed
/// without forming binomials, so it stays finite for large n.
double subset_product_mean(const std::vector<double>& values, int r);

/// Distinct utility points of a type table.
struct PointSet {
  std::vector<Point> points;
  std::vector<int> representative;  // lowest type index at each point
  std::vector<int> point_of_type;
  std::vector<std::vector<int>> members;  // ascending type indices
};

PointSet make_point_set(const std::vector<ActionType>& types);

/// A candidate segment between two distinct points with p > 0.
struct PointSegment {
  int left = 0;   // higher-xi point
  int right = 0;  // higher-rho point
  Rational slope;
  double p = 0;
};

/// Probability queries about the Pareto frontier of the types realized in
/// the first k slots of a symmetric instance.
///
/// Point-level queries treat coincident types as one point. Type-level
/// queries split a point's probability among its types: a type counts only
/// when no lower-indexed type at the same point is realized as well, so the
/// type-level values of one point sum to its point-level value.
class ProbabilityOracle {
 public:
  ProbabilityOracle(const SymmetricInstance& inst, int k);

  int k() const { return k_; }
  const SymmetricInstance& instance() const { return inst_; }
  const PointSet& point_set() const { return ps_; }

  /// Pr[every type in the first k slots has mask[type] != 0].
  double all_in(const std::vector<char>& mask) const;

  /// Pr[the maximal frontier segment of its slope is left-right].
  double segment_point(int left, int right) const;
  /// Pr[point is the unique frontier point for slope s].
  double unique_point(int point, const Slope& s) const;

  double p_segment(int type_a, int type_b) const;
  double p_unique(int type_c, const Slope& s) const;

  /// All negative-slope point pairs with positive segment probability.
  std::vector<PointSegment> segment_pairs() const;

  /// Segment slopes of segment_pairs() interleaved with auxiliary slopes
  /// (midpoints, min - 1, max / 2), plus -inf and 0; ascending.
  std::vector<Slope> candidate_slopes() const;

 private:
  std::vector<char> segment_mask(int left, int right) const;
  // Types strictly below the line through point c with slope s; at s = 0 and
  // s = -inf dominated points on the boundary line count as below.
  std::vector<char> below_mask(const Point& c, const Slope& s) const;

  SymmetricInstance inst_;
  int k_;
  PointSet ps_;
  std::vector<double> q_;   // per type: marginal prob (iid, ps)
  std::vector<int> owner_;  // per type: distribution / vector index
};

/// Exact type-level probabilities obtained by expanding every state.
struct EnumeratedTables {
  std::map<std::pair<int, int>, Rational> segment;  // (left, right) types
  std::vector<std::map<int, Rational>> unique;       // per requested slope
};

EnumeratedTables enumerate_oracle(const SymmetricInstance& inst, int k,
                                  const std::vector<Slope>& slopes,
                                  double state_bound = 1e6);

}  // namespace persuasion
