#include "persuasion/prob_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace persuasion {

namespace {

// Below this a segment probability is treated as numerical noise when
// deciding which slopes are candidates.
constexpr double kNoise = 1e-13;

double ipow(double x, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// C(c, k) / C(n, k) as a product of ratios.
double binomial_ratio(int c, int n, int k) {
  if (c < k) return 0;
  double r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(c - i) / (n - i);
  return r;
}

}  // namespace

double subset_product_sum(const std::vector<double>& values, int r) {
  if (r < 0 || r > static_cast<int>(values.size())) {
    throw std::invalid_argument("subset_product_sum: r out of range");
  }
  std::vector<double> e(r + 1, 0.0);
  e[0] = 1.0;
  for (double v : values) {
    for (int j = r; j >= 1; --j) e[j] += v * e[j - 1];
  }
  return e[r];
}

double subset_product_mean(const std::vector<double>& values, int r) {
  const int n = static_cast<int>(values.size());
  if (r < 0 || r > n) {
    throw std::invalid_argument("subset_product_mean: r out of range");
  }
  // m[j] after i items: mean over j-subsets of the first i values.
  std::vector<double> m(r + 1, 0.0);
  m[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double v = values[i - 1];
    for (int j = std::min(r, i); j >= 1; --j) {
      const double keep = j <= i - 1 ? m[j] * (i - j) / i : 0.0;
      m[j] = keep + m[j - 1] * v * j / i;
    }
  }
  return m[r];
}

PointSet make_point_set(const std::vector<ActionType>& types) {
  PointSet ps;
  ps.point_of_type.assign(types.size(), -1);
  for (std::size_t t = 0; t < types.size(); ++t) {
    int found = -1;
    for (std::size_t p = 0; p < ps.points.size(); ++p) {
      if (ps.points[p].rho == types[t].rho && ps.points[p].xi == types[t].xi) {
        found = static_cast<int>(p);
        break;
      }
    }
    if (found < 0) {
      ps.points.push_back({types[t].rho, types[t].xi});
      ps.representative.push_back(static_cast<int>(t));
      ps.members.emplace_back();
      found = static_cast<int>(ps.points.size()) - 1;
    }
    ps.point_of_type[t] = found;
    ps.members[found].push_back(static_cast<int>(t));
  }
  return ps;
}

ProbabilityOracle::ProbabilityOracle(const SymmetricInstance& inst, int k)
    : inst_(inst), k_(k), ps_(make_point_set(inst.types)) {
  if (k < 2 || k > inst.num_actions()) {
    throw ValidationError("k must lie in [2, " +
                          std::to_string(inst.num_actions()) + "]");
  }
  q_.assign(inst.types.size(), 0.0);
  owner_.assign(inst.types.size(), 0);
  switch (inst.scenario) {
    case Scenario::iid:
      for (const auto& e : inst.palette) q_[e.type] = e.prob.to_double();
      break;
    case Scenario::prophet_secretary:
      for (std::size_t i = 0; i < inst.dists.size(); ++i) {
        for (const auto& e : inst.dists[i]) {
          q_[e.type] = e.prob.to_double();
          owner_[e.type] = static_cast<int>(i);
        }
      }
      break;
    case Scenario::random_order:
      for (std::size_t j = 0; j < inst.vectors.size(); ++j) {
        for (int t : inst.vectors[j]) owner_[t] = static_cast<int>(j);
      }
      break;
  }
}

double ProbabilityOracle::all_in(const std::vector<char>& mask) const {
  switch (inst_.scenario) {
    case Scenario::iid: {
      double x = 0;
      for (const auto& e : inst_.palette) {
        if (mask[e.type]) x += q_[e.type];
      }
      return ipow(x, k_);
    }
    case Scenario::prophet_secretary: {
      std::vector<double> x(inst_.dists.size(), 0.0);
      for (std::size_t i = 0; i < inst_.dists.size(); ++i) {
        for (const auto& e : inst_.dists[i]) {
          if (mask[e.type]) x[i] += q_[e.type];
        }
      }
      return subset_product_mean(x, k_);
    }
    case Scenario::random_order: {
      double total = 0;
      for (std::size_t j = 0; j < inst_.vectors.size(); ++j) {
        int cnt = 0;
        for (int t : inst_.vectors[j]) cnt += mask[t] ? 1 : 0;
        total += inst_.vector_probs[j].to_double() *
                 binomial_ratio(cnt, inst_.n, k_);
      }
      return total;
    }
  }
  return 0;
}

std::vector<char> ProbabilityOracle::segment_mask(int left, int right) const {
  const Point& a = ps_.points[left];
  const Point& b = ps_.points[right];
  const Slope s = slope_between(a, b);
  std::vector<char> mask(inst_.types.size(), 0);
  for (std::size_t t = 0; t < inst_.types.size(); ++t) {
    const Point& d = ps_.points[ps_.point_of_type[t]];
    const int side = side_of_line(a, s, d);
    mask[t] = side < 0 || (side == 0 && d.rho >= a.rho && d.rho <= b.rho);
  }
  return mask;
}

std::vector<char> ProbabilityOracle::below_mask(const Point& c,
                                                const Slope& s) const {
  std::vector<char> mask(inst_.types.size(), 0);
  const bool flat = !s.is_neg_infinity() && s.value().is_zero();
  for (std::size_t t = 0; t < inst_.types.size(); ++t) {
    const Point& d = ps_.points[ps_.point_of_type[t]];
    const int side = side_of_line(c, s, d);
    if (side < 0) {
      mask[t] = 1;
    } else if (side == 0) {
      if (flat) mask[t] = d.rho < c.rho;
      if (s.is_neg_infinity()) mask[t] = d.xi < c.xi;
    }
  }
  return mask;
}

double ProbabilityOracle::segment_point(int left, int right) const {
  std::vector<char> x = segment_mask(left, right);
  auto without = [&](std::vector<char> m, int point) {
    for (int t : ps_.members[point]) m[t] = 0;
    return m;
  };
  const auto xl = without(x, left);
  const auto xr = without(x, right);
  const auto xlr = without(xl, right);
  const double p = all_in(x) - all_in(xl) - all_in(xr) + all_in(xlr);
  return std::clamp(p, 0.0, 1.0);
}

double ProbabilityOracle::unique_point(int point, const Slope& s) const {
  std::vector<char> a = below_mask(ps_.points[point], s);
  const double without = all_in(a);
  for (int t : ps_.members[point]) a[t] = 1;
  return std::clamp(all_in(a) - without, 0.0, 1.0);
}

double ProbabilityOracle::p_segment(int type_a, int type_b) const {
  const int nt = static_cast<int>(inst_.types.size());
  if (type_a < 0 || type_b < 0 || type_a >= nt || type_b >= nt) {
    throw ValidationError("p_segment: unknown type");
  }
  int pa = ps_.point_of_type[type_a], pb = ps_.point_of_type[type_b];
  if (pa == pb) return 0;
  if (ps_.points[pa].rho > ps_.points[pb].rho) {
    std::swap(type_a, type_b);
    std::swap(pa, pb);
  }
  const Point& a = ps_.points[pa];
  const Point& b = ps_.points[pb];
  if (!(a.rho < b.rho && a.xi > b.xi)) return 0;  // not a frontier segment

  std::vector<char> mask = segment_mask(pa, pb);
  for (int t : ps_.members[pa]) mask[t] = t > type_a;
  for (int t : ps_.members[pb]) mask[t] = t > type_b;

  const int n = inst_.n, k = k_;
  switch (inst_.scenario) {
    case Scenario::iid: {
      double m = 0;
      for (const auto& e : inst_.palette) {
        if (mask[e.type]) m += q_[e.type];
      }
      const double qa = q_[type_a], qb = q_[type_b];
      return std::clamp(ipow(m + qa + qb, k) - ipow(m + qa, k) -
                            ipow(m + qb, k) + ipow(m, k),
                        0.0, 1.0);
    }
    case Scenario::prophet_secretary: {
      const int da = owner_[type_a], db = owner_[type_b];
      if (da == db) return 0;
      std::vector<double> x;
      for (int i = 0; i < n; ++i) {
        if (i == da || i == db) continue;
        double xi = 0;
        for (const auto& e : inst_.dists[i]) {
          if (mask[e.type]) xi += q_[e.type];
        }
        x.push_back(xi);
      }
      return static_cast<double>(k) / n * (k - 1) / (n - 1) * q_[type_a] *
             q_[type_b] * subset_product_mean(x, k - 2);
    }
    case Scenario::random_order: {
      const int j = owner_[type_a];
      if (j != owner_[type_b]) return 0;
      int allowed = 0;
      for (int t : inst_.vectors[j]) allowed += mask[t] ? 1 : 0;
      const Rational p = inst_.vector_probs[j] * Rational(k, n) *
                         Rational(k - 1, n - 1) * binomial(allowed, k - 2) /
                         binomial(n - 2, k - 2);
      return p.to_double();
    }
  }
  return 0;
}

double ProbabilityOracle::p_unique(int type_c, const Slope& s) const {
  if (type_c < 0 || type_c >= static_cast<int>(inst_.types.size())) {
    throw ValidationError("p_unique: unknown type");
  }
  const int pc = ps_.point_of_type[type_c];
  std::vector<char> mask = below_mask(ps_.points[pc], s);
  for (int t : ps_.members[pc]) mask[t] = t > type_c;

  const int n = inst_.n, k = k_;
  switch (inst_.scenario) {
    case Scenario::iid: {
      double m = 0;
      for (const auto& e : inst_.palette) {
        if (mask[e.type]) m += q_[e.type];
      }
      return std::clamp(ipow(m + q_[type_c], k) - ipow(m, k), 0.0, 1.0);
    }
    case Scenario::prophet_secretary: {
      const int dc = owner_[type_c];
      std::vector<double> x;
      for (int i = 0; i < n; ++i) {
        if (i == dc) continue;
        double xi = 0;
        for (const auto& e : inst_.dists[i]) {
          if (mask[e.type]) xi += q_[e.type];
        }
        x.push_back(xi);
      }
      return static_cast<double>(k) / n * q_[type_c] *
             subset_product_mean(x, k - 1);
    }
    case Scenario::random_order: {
      const int j = owner_[type_c];
      int allowed = 0;
      for (int t : inst_.vectors[j]) allowed += mask[t] ? 1 : 0;
      const Rational p = inst_.vector_probs[j] * Rational(k, n) *
                         binomial(allowed, k - 1) / binomial(n - 1, k - 1);
      return p.to_double();
    }
  }
  return 0;
}

std::vector<PointSegment> ProbabilityOracle::segment_pairs() const {
  std::vector<PointSegment> out;
  const int np = static_cast<int>(ps_.points.size());
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < np; ++j) {
      const Point& a = ps_.points[i];
      const Point& b = ps_.points[j];
      if (!(a.rho < b.rho && a.xi > b.xi)) continue;
      out.push_back(
          {i, j, (b.xi - a.xi) / (b.rho - a.rho), segment_point(i, j)});
    }
  }
  return out;
}

std::vector<Slope> ProbabilityOracle::candidate_slopes() const {
  std::set<Rational> slopes;
  for (const auto& seg : segment_pairs()) {
    if (seg.p > kNoise) slopes.insert(seg.slope);
  }
  std::vector<Slope> out{Slope::neg_infinity()};
  if (!slopes.empty()) {
    out.emplace_back(*slopes.begin() - Rational(1));
    const Rational* prev = nullptr;
    for (const auto& s : slopes) {
      if (prev) out.emplace_back((*prev + s) / Rational(2));
      out.emplace_back(s);
      prev = &s;
    }
    out.emplace_back(*prev / Rational(2));
  }
  out.emplace_back(Rational(0));
  return out;
}

EnumeratedTables enumerate_oracle(const SymmetricInstance& inst, int k,
                                  const std::vector<Slope>& slopes,
                                  double state_bound) {
  if (k < 2 || k > inst.num_actions()) {
    throw ValidationError("k must lie in [2, " +
                          std::to_string(inst.num_actions()) + "]");
  }
  const auto states = enumerate_states(Instance(inst), state_bound);

  // Aggregate by the realized set of first-k types.
  std::map<std::vector<int>, Rational> by_set;
  for (const auto& ws : states) {
    std::vector<int> key(ws.state.begin(), ws.state.begin() + k);
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    by_set[key] += ws.prob;
  }

  EnumeratedTables out;
  out.unique.resize(slopes.size());
  for (const auto& [types, prob] : by_set) {
    if (prob.is_zero()) continue;
    std::vector<Point> pts;
    for (int t : types) pts.push_back({inst.types[t].rho, inst.types[t].xi});
    const ParetoFrontier f = pareto_frontier(pts);
    for (const auto& seg : f.segments) {
      out.segment[{types[seg.left], types[seg.right]}] += prob;
    }
    for (std::size_t si = 0; si < slopes.size(); ++si) {
      const SlopeCorrespondence c = point_for_slope(f, slopes[si]);
      if (!c.is_segment) out.unique[si][types[c.vertex]] += prob;
    }
  }
  return out;
}

}  // namespace persuasion
