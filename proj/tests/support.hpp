#pragma once

// Random instance generators shared by the unit and acceptance tests.

#include <string>
#include <vector>

#include "persuasion/model.hpp"
#include "persuasion/rng.hpp"

namespace testing_support {

using persuasion::CounterRng;
using persuasion::json;

inline int uniform_int(CounterRng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

// Coarse grid so coincident points and collinear triples actually happen.
inline std::string grid_value(CounterRng& rng, int lo = -1) {
  const int v = uniform_int(rng, lo, 4);
  return persuasion::Rational(v, 4).str();
}

inline std::vector<std::string> random_probs(CounterRng& rng, int count) {
  std::vector<int> w(count);
  int total = 0;
  for (int& x : w) total += (x = uniform_int(rng, 1, 4));
  std::vector<std::string> out;
  for (int x : w) out.push_back(persuasion::Rational(x, total).str());
  return out;
}

inline json type_obj(const std::string& id, CounterRng& rng, int xi_lo = -1) {
  return json{{"id", id}, {"rho", grid_value(rng)}, {"xi", grid_value(rng, xi_lo)}};
}

inline json random_dist(CounterRng& rng, const std::string& prefix, int max_types,
                        int xi_lo = -1) {
  const int m = uniform_int(rng, 1, max_types);
  const auto q = random_probs(rng, m);
  json dist = json::array();
  for (int j = 0; j < m; ++j) {
    json t = type_obj(prefix + std::to_string(j), rng, xi_lo);
    t["q"] = q[j];
    dist.push_back(t);
  }
  return dist;
}

/// kind: 0 iid, 1 prophet-secretary, 2 random-order.
inline json random_symmetric(CounterRng& rng, int kind, int n, int max_types = 4,
                             int max_d = 3) {
  if (kind == 0) {
    return json{{"kind", "iid"}, {"n", n}, {"palette", random_dist(rng, "t", max_types)}};
  }
  if (kind == 1) {
    json dists = json::array();
    for (int i = 0; i < n; ++i) {
      dists.push_back(random_dist(rng, "d" + std::to_string(i) + "_", max_types));
    }
    return json{{"kind", "prophet_secretary"}, {"dists", dists}};
  }
  const int d = uniform_int(rng, 1, max_d);
  json vecs = json::array();
  for (int v = 0; v < d; ++v) {
    json vec = json::array();
    for (int i = 0; i < n; ++i) {
      vec.push_back(type_obj("v" + std::to_string(v) + "_" + std::to_string(i), rng));
    }
    vecs.push_back(vec);
  }
  json probs = json::array();
  for (const auto& p : random_probs(rng, d)) probs.push_back(p);
  return json{{"kind", "d_random_order"}, {"vectors", vecs}, {"vector_probs", probs}};
}

/// Independent instance with n - 1 random actions plus one action whose
/// receiver utility is deterministic and equal to rho_E. Pass xi_lo = 0 for
/// non-negative sender values (what the approximation ratios assume).
inline json random_rhoE_optimal(CounterRng& rng, int n, int max_types = 3, int xi_lo = -1) {
  json actions = json::array();
  persuasion::Rational best(-100);
  for (int i = 0; i + 1 < n; ++i) {
    json dist = random_dist(rng, "a" + std::to_string(i) + "_", max_types, xi_lo);
    persuasion::Rational mean(0);
    for (const auto& t : dist) {
      mean += persuasion::Rational::parse(t["rho"].get<std::string>()) *
              persuasion::Rational::parse(t["q"].get<std::string>());
    }
    if (mean > best) best = mean;
    actions.push_back(dist);
  }
  // Deterministic receiver value at the best mean, random sender values.
  const int m = uniform_int(rng, 1, 2);
  const auto q = random_probs(rng, m);
  json det = json::array();
  for (int j = 0; j < m; ++j) {
    det.push_back({{"id", "safe_" + std::to_string(j)},
                   {"rho", best.str()},
                   {"xi", grid_value(rng, xi_lo)},
                   {"q", q[j]}});
  }
  const int pos = uniform_int(rng, 0, n - 1);
  actions.insert(actions.begin() + pos, det);
  return json{{"kind", "independent"}, {"actions", actions}};
}

/// Arbitrary independent instance (no precondition).
inline json random_independent(CounterRng& rng, int n, int max_types = 3) {
  json actions = json::array();
  for (int i = 0; i < n; ++i) {
    actions.push_back(random_dist(rng, "a" + std::to_string(i) + "_", max_types));
  }
  return json{{"kind", "independent"}, {"actions", actions}};
}

}  // namespace testing_support
