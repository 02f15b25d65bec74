#include "persuasion/exact_oracle.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "persuasion/lp.hpp"
#include "persuasion/parallel.hpp"
#include "persuasion/prob_oracle.hpp"

namespace persuasion {

namespace {

int receiver_actions(const Instance& inst) {
  return std::visit([](const auto& i) { return i.num_actions(); }, inst);
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) return out;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
}

}  // namespace

MergedPrior merged_prior(const Instance& inst, double state_bound) {
  const PointSet ps = make_point_set(types_of(inst));
  const int N = receiver_actions(inst);
  std::map<std::vector<int>, Rational> acc;
  for (const auto& ws : enumerate_states(inst, state_bound)) {
    std::vector<int> key(N);
    for (int i = 0; i < N; ++i) key[i] = ps.point_of_type[ws.state[i]];
    acc[key] += ws.prob;
  }
  MergedPrior out;
  out.points = ps.points;
  out.point_of_type = ps.point_of_type;
  for (auto& [key, p] : acc) {
    if (p.is_zero()) continue;
    out.keys.push_back(key);
    out.prob.push_back(p.to_double());
  }
  return out;
}

TabularScheme optimal_scheme_bruteforce(const Instance& inst, int k,
                                        double state_bound, int threads) {
  const int N = receiver_actions(inst);
  if (k < 1 || k > N) {
    throw ValidationError("k must lie in [1, " + std::to_string(N) + "]");
  }
  const MergedPrior prior = merged_prior(inst, state_bound);
  std::vector<double> rho(prior.points.size()), xi(prior.points.size());
  for (std::size_t p = 0; p < prior.points.size(); ++p) {
    rho[p] = prior.points[p].rho.to_double();
    xi[p] = prior.points[p].xi.to_double();
  }

  // Symmetric priors: any optimal scheme can be relabeled onto [k].
  std::vector<std::vector<int>> candidates =
      std::holds_alternative<SymmetricInstance>(inst)
          ? std::vector<std::vector<int>>{subsets(k, k).front()}
          : subsets(N, k);

  std::vector<TabularScheme> results(candidates.size());
  std::vector<char> ok(candidates.size(), 0);
  parallel_for(static_cast<int>(candidates.size()), threads, [&](int c) {
    const std::vector<int>& K = candidates[c];
    BlockLp lp;
    lp.num_rows = k * (N - 1);
    lp.rhs.assign(lp.num_rows, 0.0);
    for (std::size_t b = 0; b < prior.keys.size(); ++b) {
      const auto& key = prior.keys[b];
      lp.begin_block(prior.prob[b]);
      for (int s = 0; s < k; ++s) {
        const int i = K[s];
        std::vector<std::pair<int, double>> entries;
        for (int j = 0; j < N; ++j) {
          if (j == i) continue;
          const double coef = rho[key[i]] - rho[key[j]];
          if (coef != 0) entries.emplace_back(s * (N - 1) + (j < i ? j : j - 1), coef);
        }
        lp.add_option(xi[key[i]], entries);
      }
      lp.end_block();
    }
    const BlockLpSolution sol = solve_block_lp(lp);
    if (sol.status != LpStatus::optimal) return;
    TabularScheme& out = results[c];
    out.signals = K;
    out.opt = sol.objective;
    for (std::size_t b = 0; b < prior.keys.size(); ++b) {
      std::vector<double> phi(sol.phi.begin() + lp.block_begin[b],
                              sol.phi.begin() + lp.block_begin[b + 1]);
      for (int s = 0; s < k; ++s) {
        out.receiver += prior.prob[b] * phi[s] * rho[prior.keys[b][K[s]]];
      }
      out.table.emplace(prior.keys[b], std::move(phi));
    }
    ok[c] = 1;
  });

  int best = -1;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (ok[c] && (best < 0 || results[c].opt > results[best].opt + 1e-12)) {
      best = static_cast<int>(c);
    }
  }
  // Recommending a fixed receiver-best action is always persuasive, so this
  // only fires on a solver failure.
  if (best < 0) throw std::runtime_error("brute-force LP found no feasible signal set");
  return std::move(results[best]);
}

json to_json(const TabularScheme& scheme, const Instance& inst) {
  const auto& types = types_of(inst);
  const PointSet ps = make_point_set(types);
  json table = json::array();
  for (const auto& [key, phi] : scheme.table) {
    json pts = json::array(), probs = json::array();
    for (int p : key) pts.push_back(types[ps.representative[p]].id);
    for (double v : phi) probs.push_back(round12(v));
    table.push_back({{"types", pts}, {"phi", probs}});
  }
  return json{{"method", "exact"},
              {"k", scheme.signals.size()},
              {"signals", scheme.signals},
              {"opt", round12(scheme.opt)},
              {"u_sender", round12(scheme.opt)},
              {"u_receiver", round12(scheme.receiver)},
              {"table", table}};
}

TabularExecutor::TabularExecutor(const Instance& inst, TabularScheme scheme)
    : scheme_(std::move(scheme)),
      point_of_type_(make_point_set(types_of(inst)).point_of_type),
      actions_(receiver_actions(inst)) {}

Recommendation TabularExecutor::distribution(const State& state) const {
  std::vector<int> key(actions_);
  for (int i = 0; i < actions_; ++i) key[i] = point_of_type_[state[i]];
  const auto it = scheme_.table.find(key);
  if (it == scheme_.table.end()) return {{scheme_.signals.front(), 1.0}};
  std::map<int, double> mass;
  for (std::size_t s = 0; s < it->second.size(); ++s) {
    if (it->second[s] > 0) mass[scheme_.signals[s]] += it->second[s];
  }
  return Recommendation(mass.begin(), mass.end());
}

PersuasivenessReport persuasiveness_check(const SchemeExecutor& scheme,
                                          const Instance& inst,
                                          double state_bound,
                                          double tolerance) {
  const int N = receiver_actions(inst);
  const auto& types = types_of(inst);
  std::vector<double> rho(types.size()), xi(types.size());
  for (std::size_t t = 0; t < types.size(); ++t) {
    rho[t] = types[t].rho.to_double();
    xi[t] = types[t].xi.to_double();
  }
  std::vector<double> mass(N, 0.0);
  std::vector<std::vector<double>> value(N, std::vector<double>(N, 0.0));
  PersuasivenessReport report;
  for (const auto& ws : enumerate_states(inst, state_bound)) {
    const double q = ws.prob.to_double();
    for (const auto& [a, p] : scheme.distribution(ws.state)) {
      if (a < 0 || a >= N) {
        throw std::runtime_error("scheme recommended an action outside [0, " +
                                 std::to_string(N) + ")");
      }
      const double w = q * p;
      mass[a] += w;
      report.sender += w * xi[ws.state[a]];
      report.receiver += w * rho[ws.state[a]];
      for (int j = 0; j < N; ++j) value[a][j] += w * rho[ws.state[j]];
    }
  }
  for (int i = 0; i < N; ++i) {
    if (mass[i] <= 0) continue;
    SignalReport s;
    s.action = i;
    s.prob = mass[i];
    // Tiny signals are judged on unconditioned sums so rounding cannot
    // blow up the comparison.
    const double scale = mass[i] > 1e-9 ? 1 / mass[i] : 1.0;
    s.receiver = value[i][i] * scale;
    s.best_deviation = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      if (value[i][j] * scale > s.best_deviation) {
        s.best_deviation = value[i][j] * scale;
        s.deviation_action = j;
      }
    }
    if (N == 1) s.best_deviation = s.receiver;
    s.persuasive = s.receiver >= s.best_deviation - tolerance;
    if (mass[i] <= 1e-9) {
      s.receiver = value[i][i] / mass[i];
      s.best_deviation = s.deviation_action >= 0
                             ? value[i][s.deviation_action] / mass[i]
                             : s.receiver;
    }
    report.persuasive = report.persuasive && s.persuasive;
    report.signals.push_back(s);
  }
  return report;
}

json to_json(const PersuasivenessReport& report) {
  json signals = json::array();
  for (const auto& s : report.signals) {
    signals.push_back({{"action", s.action},
                       {"prob", round12(s.prob)},
                       {"receiver", round12(s.receiver)},
                       {"best_deviation", round12(s.best_deviation)},
                       {"deviation_action", s.deviation_action},
                       {"persuasive", s.persuasive}});
  }
  return json{{"persuasive", report.persuasive},
              {"u_sender", round12(report.sender)},
              {"u_receiver", round12(report.receiver)},
              {"signals", signals}};
}

}  // namespace persuasion
