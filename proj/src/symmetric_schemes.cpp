#include "persuasion/symmetric_schemes.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "persuasion/lp.hpp"
#include "persuasion/parallel.hpp"

namespace persuasion {

namespace {

void check_k(const SymmetricInstance& inst, int k) {
  if (k < 2 || k > inst.num_actions()) {
    throw ValidationError("k must lie in [2, " +
                          std::to_string(inst.num_actions()) + "]");
  }
}

// Adds `mass` split evenly over the slots in [0, k) whose type sits at point.
void spread(const State& state, int k, const PointSet& ps, int point,
            double mass, std::vector<double>& out) {
  int count = 0;
  for (int i = 0; i < k; ++i) count += ps.point_of_type[state[i]] == point;
  for (int i = 0; i < k; ++i) {
    if (ps.point_of_type[state[i]] == point) out[i] += mass / count;
  }
}

Recommendation to_sparse(const std::vector<double>& dense) {
  Recommendation r;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] > 0) r.emplace_back(static_cast<int>(i), dense[i]);
  }
  return r;
}

}  // namespace

SlopeScheme slope_algorithm(const SymmetricInstance& inst, int k,
                            int threads) {
  check_k(inst, k);
  const ProbabilityOracle oracle(inst, k);
  const PointSet& ps = oracle.point_set();
  const auto pairs = oracle.segment_pairs();
  const auto slopes = oracle.candidate_slopes();
  const double rhoE = rho_E(inst).to_double();

  struct Eval {
    SlopeLpResult result;
    std::vector<int> segment_index;
  };
  std::vector<Eval> evals(slopes.size());
  parallel_for(static_cast<int>(slopes.size()), threads, [&](int si) {
    const Slope& s = slopes[si];
    std::vector<SlopeLpSegment> segs;
    Eval& ev = evals[si];
    if (!s.is_neg_infinity()) {
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].slope != s.value()) continue;
        segs.push_back(
            {pairs[i].p, ps.points[pairs[i].left], ps.points[pairs[i].right]});
        ev.segment_index.push_back(static_cast<int>(i));
      }
    }
    std::vector<SlopeLpUnique> uniques;
    for (std::size_t pt = 0; pt < ps.points.size(); ++pt) {
      const double p = oracle.unique_point(static_cast<int>(pt), s);
      if (p > 0) uniques.push_back({p, ps.points[pt]});
    }
    ev.result = solve_slope_lp(segs, uniques, rhoE, s);
  });

  int best = -1;
  for (std::size_t si = 0; si < slopes.size(); ++si) {
    if (!evals[si].result.feasible) continue;
    if (best < 0 ||
        evals[si].result.objective > evals[best].result.objective + 1e-12) {
      best = static_cast<int>(si);
    }
  }
  if (best < 0) {
    throw std::runtime_error("slope_algorithm: no candidate slope is feasible");
  }

  SlopeScheme scheme;
  scheme.k = k;
  scheme.s_star = slopes[best];
  scheme.u_sender = evals[best].result.objective;
  scheme.u_receiver = evals[best].result.receiver;
  const auto& ev = evals[best];
  for (std::size_t i = 0; i < ev.segment_index.size(); ++i) {
    const auto& pr = pairs[ev.segment_index[i]];
    scheme.alpha[{ps.representative[pr.left], ps.representative[pr.right]}] =
        ev.result.alpha[i];
  }
  return scheme;
}

json to_json(const SlopeScheme& scheme, const SymmetricInstance& inst) {
  json alpha = json::array();
  for (const auto& [key, a] : scheme.alpha) {
    alpha.push_back({{"a", inst.types[key.first].id},
                     {"b", inst.types[key.second].id},
                     {"alpha", round12(a)}});
  }
  return json{{"method", "slope"},
              {"k", scheme.k},
              {"s_star", scheme.s_star.str()},
              {"alpha", alpha},
              {"u_sender", round12(scheme.u_sender)},
              {"u_receiver", round12(scheme.u_receiver)}};
}

SlopeExecutor::SlopeExecutor(const SymmetricInstance& inst, SlopeScheme scheme)
    : scheme_(std::move(scheme)), ps_(make_point_set(inst.types)) {
  for (const auto& [key, a] : scheme_.alpha) {
    alpha_by_point_[{ps_.point_of_type.at(key.first),
                     ps_.point_of_type.at(key.second)}] = a;
  }
}

Recommendation SlopeExecutor::distribution(const State& state) const {
  const int k = scheme_.k;
  std::vector<int> point_ids;
  for (int i = 0; i < k; ++i) point_ids.push_back(ps_.point_of_type[state[i]]);
  std::sort(point_ids.begin(), point_ids.end());
  point_ids.erase(std::unique(point_ids.begin(), point_ids.end()),
                  point_ids.end());
  std::vector<Point> pts;
  for (int p : point_ids) pts.push_back(ps_.points[p]);
  const ParetoFrontier f = pareto_frontier(pts);
  const SlopeCorrespondence c = point_for_slope(f, scheme_.s_star);

  std::vector<double> dense(k, 0.0);
  if (c.is_segment) {
    const int left = point_ids[c.left], right = point_ids[c.right];
    const auto it = alpha_by_point_.find({left, right});
    if (it == alpha_by_point_.end()) {
      throw std::runtime_error(
          "slope scheme has no weight for a realized segment of slope " +
          scheme_.s_star.str());
    }
    spread(state, k, ps_, left, it->second, dense);
    spread(state, k, ps_, right, 1.0 - it->second, dense);
  } else {
    spread(state, k, ps_, point_ids[c.vertex], 1.0, dense);
  }
  return to_sparse(dense);
}

ImitationExecutor::ImitationExecutor(const SymmetricInstance& inst, int k,
                                     int threads)
    : k_(k) {
  check_k(inst, k);
  base_ = std::make_unique<SlopeExecutor>(
      inst, slope_algorithm(inst, inst.num_actions(), threads));
}

Recommendation ImitationExecutor::distribution(const State& state) const {
  std::vector<double> dense(k_, 0.0);
  for (const auto& [action, p] : base_->distribution(state)) {
    if (action < k_) {
      dense[action] += p;
    } else {
      for (int i = 0; i < k_; ++i) dense[i] += p / k_;
    }
  }
  return to_sparse(dense);
}

// --- bicriteria ---------------------------------------------------------------

BicriteriaScheme bicriteria_scheme(const SymmetricInstance& inst, int k,
                                   double epsilon, int samples,
                                   CounterRng& rng) {
  check_k(inst, k);
  if (samples < 1) throw ValidationError("samples must be >= 1");
  if (!(epsilon >= 0)) throw ValidationError("epsilon must be >= 0");
  for (const auto& t : inst.types) {
    if (t.rho < Rational(-1) || t.rho > Rational(1) || t.xi < Rational(-1) ||
        t.xi > Rational(1)) {
      throw ValidationError("bicriteria needs utilities in [-1, 1]; type '" +
                            t.id + "' is outside");
    }
  }

  // Empirical distribution of the first k slots.
  const StateSampler sampler{Instance(inst)};
  std::map<std::vector<int>, double> empirical;
  State st;
  for (int s = 0; s < samples; ++s) {
    sampler.sample_into(rng, st);
    empirical[std::vector<int>(st.begin(), st.begin() + k)] += 1.0 / samples;
  }

  // Close the sample under relabeling of the k slots so the LP is symmetric.
  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    if (k <= 6) {
      do perms.push_back(p);
      while (std::next_permutation(p.begin(), p.end()));
    } else {
      perms.push_back(p);
    }
  }
  auto permute = [](const std::vector<int>& key, const std::vector<int>& pi) {
    std::vector<int> out(key.size());
    for (std::size_t s = 0; s < key.size(); ++s) out[s] = key[pi[s]];
    return out;
  };
  std::map<std::vector<int>, double> sym;
  for (const auto& [key, w] : empirical) {
    for (const auto& pi : perms) sym[permute(key, pi)] += w / perms.size();
  }

  auto row = [k](int i, int j) { return i * (k - 1) + (j < i ? j : j - 1); };
  BlockLp lp;
  lp.num_rows = k * (k - 1);
  lp.rhs.assign(lp.num_rows, 0.0);
  std::vector<const std::vector<int>*> keys;
  for (const auto& [key, w] : sym) {
    keys.push_back(&key);
    lp.begin_block(w);
    for (int i = 0; i < k; ++i) {
      std::vector<std::pair<int, double>> entries;
      const double rho_i = inst.types[key[i]].rho.to_double();
      for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        entries.emplace_back(
            row(i, j), rho_i - inst.types[key[j]].rho.to_double() + epsilon);
      }
      lp.add_option(inst.types[key[i]].xi.to_double(), entries);
    }
    lp.end_block();
  }
  const BlockLpSolution sol = solve_block_lp(lp);
  if (sol.status != LpStatus::optimal) {
    throw std::runtime_error("bicriteria LP is infeasible");
  }

  std::map<std::vector<int>, std::vector<double>> raw;
  for (std::size_t b = 0; b < keys.size(); ++b) {
    raw[*keys[b]] = std::vector<double>(sol.phi.begin() + lp.block_begin[b],
                                        sol.phi.begin() + lp.block_begin[b + 1]);
  }

  BicriteriaScheme out;
  out.k = k;
  out.epsilon = epsilon;
  out.samples = samples;
  // Average over relabelings: phi'(theta, pi(i)) = mean phi(pi theta, i).
  for (const auto& [key, phi] : raw) {
    auto& dst = out.table[key];
    dst.assign(k, 0.0);
    for (const auto& pi : perms) {
      const auto& src = raw.at(permute(key, pi));
      for (int i = 0; i < k; ++i) dst[pi[i]] += src[i] / perms.size();
    }
  }

  std::vector<double> mass(k, 0.0);
  std::vector<std::vector<double>> dev(k, std::vector<double>(k, 0.0));
  for (const auto& [key, w] : sym) {
    const auto& phi = out.table.at(key);
    for (int i = 0; i < k; ++i) {
      const double m = w * phi[i];
      out.empirical_sender += m * inst.types[key[i]].xi.to_double();
      out.empirical_receiver += m * inst.types[key[i]].rho.to_double();
      mass[i] += m;
      for (int j = 0; j < k; ++j) {
        dev[i][j] += m * (inst.types[key[j]].rho.to_double() -
                          inst.types[key[i]].rho.to_double());
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    if (mass[i] <= 1e-12) continue;
    for (int j = 0; j < k; ++j) {
      out.max_regret = std::max(out.max_regret, dev[i][j] / mass[i]);
    }
  }
  return out;
}

json to_json(const BicriteriaScheme& scheme, const SymmetricInstance& inst) {
  json table = json::array();
  for (const auto& [key, phi] : scheme.table) {
    json ids = json::array(), probs = json::array();
    for (int t : key) ids.push_back(inst.types[t].id);
    for (double p : phi) probs.push_back(round12(p));
    table.push_back({{"types", ids}, {"phi", probs}});
  }
  return json{{"method", "bicriteria"},
              {"k", scheme.k},
              {"epsilon", scheme.epsilon},
              {"samples", scheme.samples},
              {"table", table},
              {"u_sender_empirical", round12(scheme.empirical_sender)},
              {"u_receiver_empirical", round12(scheme.empirical_receiver)},
              {"max_regret_empirical", round12(scheme.max_regret)}};
}

Recommendation BicriteriaExecutor::distribution(const State& state) const {
  const int k = scheme_.k;
  const auto it =
      scheme_.table.find(std::vector<int>(state.begin(), state.begin() + k));
  if (it == scheme_.table.end()) {
    Recommendation uniform;
    for (int i = 0; i < k; ++i) uniform.emplace_back(i, 1.0 / k);
    return uniform;
  }
  return to_sparse(it->second);
}

}  // namespace persuasion
