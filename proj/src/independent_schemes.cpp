#include "persuasion/independent_schemes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "persuasion/lp.hpp"
#include "persuasion/parallel.hpp"

namespace persuasion {

namespace {

void check_k(const IndependentInstance& inst, int k) {
  if (k < 2 || k > inst.num_actions()) {
    throw ValidationError("k must lie in [2, " +
                          std::to_string(inst.num_actions()) + "]");
  }
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-14;
}

struct GEval {
  double value = 0;
  double slope = 0;  // a supergradient at z
};

GEval g_eval(const IndependentInstance& inst, int action, double rho_E,
             double z) {
  const Distribution& dist = inst.actions[action];
  const int m = static_cast<int>(dist.size());
  LinearProgram lp(m);
  std::vector<double> mass(m, 1.0), shift(m);
  for (int j = 0; j < m; ++j) {
    const ActionType& t = inst.types[dist[j].type];
    lp.objective[j] = t.xi.to_double();
    lp.upper[j] = dist[j].prob.to_double();
    shift[j] = t.rho.to_double() - rho_E;
  }
  lp.add_row(mass, Relation::le, z);
  lp.add_row(shift, Relation::ge, 0.0);
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) {
    throw std::runtime_error("g curve LP: " + std::string(status_name(sol.status)));
  }
  return {sol.objective, std::max(0.0, sol.duals[0])};
}

// Upper concave envelope of (z, value) samples, sorted by z.
std::vector<GiCurve::Breakpoint> envelope(std::vector<std::pair<double, double>> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    if (!hull.empty() && p.first - hull.back().first <= 1e-15) {
      hull.back().second = std::max(hull.back().second, p.second);
      continue;
    }
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // b is redundant when it lies on or below the chord a-p.
      const double chord =
          a.second + (p.second - a.second) * (b.first - a.first) / (p.first - a.first);
      if (b.second <= chord + 1e-12) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  std::vector<GiCurve::Breakpoint> out;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    double slope = 0;
    if (i + 1 < hull.size()) {
      slope = (hull[i + 1].second - hull[i].second) /
              (hull[i + 1].first - hull[i].first);
    }
    out.push_back({hull[i].first, hull[i].second, std::max(0.0, slope)});
  }
  return out;
}

}  // namespace

// --- precondition -------------------------------------------------------------

RhoECheck check_rhoE_optimality(const IndependentInstance& inst) {
  const Rational rhoE = rho_E(inst);
  for (int i = 0; i < inst.num_actions(); ++i) {
    bool deterministic = true;
    for (const auto& e : inst.actions[i]) {
      if (!e.prob.is_zero() && inst.types[e.type].rho != rhoE) {
        deterministic = false;
        break;
      }
    }
    if (deterministic) {
      return {true, "action " + std::to_string(i) +
                        " has deterministic receiver utility rho_E = " +
                        rhoE.str()};
    }
  }
  return {false,
          "unknown: no action has deterministic receiver utility rho_E = " +
              rhoE.str() + "; persuasiveness is not guaranteed"};
}

// --- g curves -----------------------------------------------------------------

double GiCurve::operator()(double z) const {
  if (points.empty() || z <= points.front().z) return points.empty() ? 0 : points.front().value;
  auto it = std::upper_bound(points.begin(), points.end(), z,
                             [](double v, const Breakpoint& b) { return v < b.z; });
  const Breakpoint& b = *(it - 1);
  if (it == points.end()) return b.value;
  return b.value + b.slope * (z - b.z);
}

double g_value(const IndependentInstance& inst, int action, double rho_E,
               double z) {
  return g_eval(inst, action, rho_E, z).value;
}

GiCurve g_curve(const IndependentInstance& inst, int action, double rho_E,
                const std::optional<std::vector<double>>& grid) {
  std::vector<std::pair<double, double>> samples;
  if (grid) {
    samples.emplace_back(0.0, g_value(inst, action, rho_E, 0.0));
    samples.emplace_back(1.0, g_value(inst, action, rho_E, 1.0));
    for (double z : *grid) {
      if (z > 0 && z < 1) samples.emplace_back(z, g_value(inst, action, rho_E, z));
    }
    return {action, envelope(std::move(samples))};
  }

  // Tangent refinement: if g at the intersection of the tangents at a and b
  // meets them, g is linear on both sides of it; otherwise split there.
  struct Node {
    double z;
    GEval e;
  };
  const Node lo{0.0, g_eval(inst, action, rho_E, 0.0)};
  const Node hi{1.0, g_eval(inst, action, rho_E, 1.0)};
  samples.emplace_back(lo.z, lo.e.value);
  samples.emplace_back(hi.z, hi.e.value);
  std::vector<std::tuple<Node, Node, int>> stack{{lo, hi, 0}};
  while (!stack.empty()) {
    auto [a, b, depth] = stack.back();
    stack.pop_back();
    if (b.z - a.z <= 1e-12 || depth > 60) continue;
    if (a.e.slope - b.e.slope <= 1e-13) continue;  // parallel tangents: linear
    double zc = (b.e.value - a.e.value + a.e.slope * a.z - b.e.slope * b.z) /
                (a.e.slope - b.e.slope);
    zc = std::clamp(zc, a.z, b.z);
    const double tangent = a.e.value + a.e.slope * (zc - a.z);
    const Node c{zc, g_eval(inst, action, rho_E, zc)};
    samples.emplace_back(c.z, c.e.value);
    if (c.e.value >= tangent - 1e-12) continue;
    stack.emplace_back(c, b, depth + 1);
    stack.emplace_back(a, c, depth + 1);
  }
  return {action, envelope(std::move(samples))};
}

// --- the relaxation -----------------------------------------------------------

RelaxationSolution f_of_S(const IndependentInstance& inst,
                          const std::vector<int>& S) {
  const int n = inst.num_actions();
  std::vector<int> acts(S.begin(), S.end());
  std::sort(acts.begin(), acts.end());
  acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
  for (int a : acts) {
    if (a < 0 || a >= n) throw ValidationError("action index out of range");
    if (a == inst.designated) {
      throw ValidationError("S must not contain the designated action");
    }
  }
  RelaxationSolution out;
  out.S = acts;
  acts.push_back(inst.designated);

  const Rational rhoE = rho_E(inst);
  std::vector<int> z_var, x_begin;
  int vars = 0;
  for (int a : acts) {
    z_var.push_back(vars++);
    x_begin.push_back(vars);
    vars += static_cast<int>(inst.actions[a].size());
  }
  LinearProgram lp(vars);
  std::vector<double> total(vars, 0.0);
  for (std::size_t s = 0; s < acts.size(); ++s) {
    const Distribution& dist = inst.actions[acts[s]];
    total[z_var[s]] = 1.0;
    std::vector<double> cap(vars, 0.0), shift(vars, 0.0);
    cap[z_var[s]] = -1.0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
      const int v = x_begin[s] + static_cast<int>(j);
      const ActionType& t = inst.types[dist[j].type];
      lp.objective[v] = t.xi.to_double();
      lp.upper[v] = dist[j].prob.to_double();
      cap[v] = 1.0;
      shift[v] = (t.rho - rhoE).to_double();
    }
    lp.add_row(std::move(cap), Relation::le, 0.0);
    lp.add_row(std::move(shift), Relation::ge, 0.0);
  }
  lp.add_row(std::move(total), Relation::le, 1.0);
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) {
    throw std::runtime_error("f(S) LP: " + std::string(status_name(sol.status)));
  }

  out.z.assign(n, 0.0);
  out.g.assign(n, 0.0);
  out.x.resize(n);
  for (int a = 0; a < n; ++a) out.x[a].assign(inst.actions[a].size(), 0.0);
  for (std::size_t s = 0; s < acts.size(); ++s) {
    const int a = acts[s];
    const Distribution& dist = inst.actions[a];
    for (std::size_t j = 0; j < dist.size(); ++j) {
      const double x = std::clamp(sol.values[x_begin[s] + j], 0.0,
                                  dist[j].prob.to_double());
      out.x[a][j] = x;
      out.z[a] += x;  // tightened: z_i = sum_j x_ij
      out.g[a] += x * inst.types[dist[j].type].xi.to_double();
    }
    out.objective += out.g[a];
  }
  return out;
}

// --- selection ----------------------------------------------------------------

std::vector<int> actions_greedy(const IndependentInstance& inst, int k,
                                int threads) {
  check_k(inst, k);
  const int n = inst.num_actions();
  std::vector<int> S;
  double current = f_of_S(inst, S).objective;
  for (int step = 0; step < k - 1; ++step) {
    std::vector<int> cand;
    for (int i = 0; i < n; ++i) {
      if (i != inst.designated && std::find(S.begin(), S.end(), i) == S.end()) {
        cand.push_back(i);
      }
    }
    std::vector<double> value(cand.size());
    parallel_for(static_cast<int>(cand.size()), threads, [&](int c) {
      std::vector<int> T = S;
      T.push_back(cand[c]);
      value[c] = f_of_S(inst, T).objective;
    });
    int best = 0;
    for (std::size_t c = 1; c < cand.size(); ++c) {
      if (value[c] - current > value[best] - current + 1e-12) best = static_cast<int>(c);
    }
    S.push_back(cand[best]);
    current = value[best];
  }
  std::sort(S.begin(), S.end());
  return S;
}

std::vector<int> actions_reduce(const IndependentInstance& inst, int k) {
  check_k(inst, k);
  std::vector<int> rest;
  for (int i = 0; i < inst.num_actions(); ++i) {
    if (i != inst.designated) rest.push_back(i);
  }
  const RelaxationSolution sol = f_of_S(inst, rest);
  std::stable_sort(rest.begin(), rest.end(),
                   [&](int a, int b) { return sol.g[a] > sol.g[b]; });
  rest.resize(k - 1);
  std::sort(rest.begin(), rest.end());
  return rest;
}

KnapsackResult knapsack_dp(const std::vector<KnapsackItem>& items,
                           const KnapsackItem& designated, double rate, int k,
                           double delta) {
  KnapsackResult out;
  if (designated.w_req > 1 + 1e-12) return out;

  double p_max = std::max(designated.p_req, std::min(rate, designated.p_opt));
  for (const auto& it : items) {
    p_max = std::max(p_max, std::max(it.p_req, std::min(rate, it.p_opt)));
  }
  out.feasible = true;
  if (p_max <= 0) return out;  // kappa = 0: nothing to gain beyond designated

  const double kappa = delta * p_max / (2 * k);
  // Optional profit beyond rate can never be collected.
  const long cap = static_cast<long>(std::ceil(rate / kappa));
  const long pr_bound = static_cast<long>(k) * static_cast<long>(std::floor(2 * k / delta));
  auto adj = [kappa](double p) { return static_cast<long>(std::floor(p / kappa + 1e-9)); };

  struct Cell {
    double size;
    std::vector<int> actions;
  };
  using Key = std::tuple<int, long, long>;  // (count, required, optional)
  std::map<Key, Cell> table;
  table[{0, adj(designated.p_req), std::min(cap, adj(designated.p_opt))}] = {
      designated.w_req, {}};
  for (const auto& it : items) {
    if (it.w_req > 1 + 1e-12) continue;
    const long pr = adj(it.p_req), po = adj(it.p_opt);
    std::vector<std::pair<Key, Cell>> updates;
    for (const auto& [key, cell] : table) {
      const auto [j, r, o] = key;
      if (j >= k - 1) continue;
      const double size = cell.size + it.w_req;
      if (size > 1 + 1e-12) continue;
      Key next{j + 1, r + pr, std::min(cap, o + po)};
      if (std::get<1>(next) > pr_bound) {
        throw std::logic_error("knapsack DP: required profit exceeds table bound");
      }
      Cell c{size, cell.actions};
      c.actions.push_back(it.action);
      updates.emplace_back(next, std::move(c));
    }
    for (auto& [key, cell] : updates) {
      auto found = table.find(key);
      if (found == table.end() || cell.size < found->second.size - 1e-15) {
        table[key] = std::move(cell);
      }
    }
  }

  double best = -1;
  for (const auto& [key, cell] : table) {
    const auto [j, r, o] = key;
    const double value = kappa * r + std::min(rate * (1 - cell.size), kappa * o);
    if (value > best + 1e-15) {
      best = value;
      out.actions = cell.actions;
    }
  }
  out.adjusted_profit = best;
  std::sort(out.actions.begin(), out.actions.end());
  return out;
}

std::vector<int> fptas_select(const IndependentInstance& inst, int k,
                              double epsilon, int threads) {
  check_k(inst, k);
  if (!(epsilon > 0 && epsilon < 1)) throw ValidationError("epsilon must lie in (0, 1)");
  const int n = inst.num_actions();
  const double delta = epsilon / 2;
  const int L = static_cast<int>(std::ceil(k / delta - 1e-12));
  const double tau = 1.0 / L;
  const double rhoE = rho_E(inst).to_double();

  std::vector<GiCurve> curves(n);
  parallel_for(n, threads, [&](int i) { curves[i] = g_curve(inst, i, rhoE); });
  std::vector<std::vector<double>> marginal(n, std::vector<double>(L));
  std::vector<double> guesses;
  for (int i = 0; i < n; ++i) {
    for (int l = 1; l <= L; ++l) {
      marginal[i][l - 1] = std::max(0.0, curves[i](l * tau) - curves[i]((l - 1) * tau));
      guesses.push_back(marginal[i][l - 1]);
    }
  }
  std::sort(guesses.begin(), guesses.end(), std::greater<>());
  std::vector<double> distinct;
  for (double g : guesses) {
    if (distinct.empty() || !close(distinct.back(), g)) distinct.push_back(g);
  }

  auto item_for = [&](int i, double m) {
    int above = 0, equal = 0;
    for (double v : marginal[i]) {
      if (close(v, m)) {
        ++equal;
      } else if (v > m) {
        ++above;
      }
    }
    KnapsackItem it;
    it.action = i;
    it.w_req = tau * above;
    it.p_req = curves[i](it.w_req);
    it.w_opt = tau * equal;
    it.p_opt = (m / tau) * it.w_opt;
    return it;
  };

  std::vector<std::vector<int>> chosen(distinct.size());
  parallel_for(static_cast<int>(distinct.size()), threads, [&](int gi) {
    const double m = distinct[gi];
    std::vector<KnapsackItem> items;
    for (int i = 0; i < n; ++i) {
      if (i != inst.designated) items.push_back(item_for(i, m));
    }
    const KnapsackResult r =
        knapsack_dp(items, item_for(inst.designated, m), m / tau, k, delta);
    if (!r.feasible) return;
    std::vector<int> S = r.actions;
    for (int i = 0; i < n && static_cast<int>(S.size()) < k - 1; ++i) {
      if (i != inst.designated && std::find(S.begin(), S.end(), i) == S.end()) {
        S.push_back(i);
      }
    }
    std::sort(S.begin(), S.end());
    chosen[gi] = std::move(S);
  });

  // Score each distinct candidate set by its true relaxation value.
  std::vector<std::vector<int>> sets;
  for (const auto& S : chosen) {
    if (!S.empty() && std::find(sets.begin(), sets.end(), S) == sets.end()) {
      sets.push_back(S);
    }
  }
  if (sets.empty()) {
    std::vector<int> S;
    for (int i = 0; i < n && static_cast<int>(S.size()) < k - 1; ++i) {
      if (i != inst.designated) S.push_back(i);
    }
    return S;
  }
  std::vector<double> value(sets.size());
  parallel_for(static_cast<int>(sets.size()), threads,
               [&](int s) { value[s] = f_of_S(inst, sets[s]).objective; });
  std::size_t best = 0;
  for (std::size_t s = 1; s < sets.size(); ++s) {
    if (value[s] > value[best] + 1e-12) best = s;
  }
  return sets[best];
}

// --- the ex-post scheme ---------------------------------------------------------

ExPostScheme compute_signal(const IndependentInstance& inst,
                            const std::vector<int>& S) {
  const RelaxationSolution sol = f_of_S(inst, S);
  const int n = inst.num_actions();
  const int d = inst.designated;

  ExPostScheme out;
  out.order = sol.S;
  out.order.push_back(d);
  std::sort(out.order.begin(), out.order.end());
  auto ratio = [&](int a) { return sol.z[a] > 1e-15 ? sol.g[a] / sol.z[a] : 0.0; };
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](int a, int b) { return ratio(a) > ratio(b); });
  out.fallback = d;
  out.f_value = sol.objective;
  out.guaranteed = check_rhoE_optimality(inst).holds;

  out.accept.resize(n);
  for (int a = 0; a < n; ++a) {
    const Distribution& dist = inst.actions[a];
    out.accept[a].assign(dist.size(), 0.0);
    for (std::size_t j = 0; j < dist.size(); ++j) {
      const double q = dist[j].prob.to_double();
      if (q > 0) out.accept[a][j] = std::clamp(sol.x[a][j] / q, 0.0, 1.0);
    }
  }

  // Closed form: coins are independent, so arrival probabilities multiply.
  double reach = 1, miss_others = 1;
  for (int a : out.order) {
    double rho = 0;
    for (std::size_t j = 0; j < inst.actions[a].size(); ++j) {
      rho += sol.x[a][j] * inst.types[inst.actions[a][j].type].rho.to_double();
    }
    out.u_sender += reach * sol.g[a];
    out.u_receiver += reach * rho;
    reach *= 1 - sol.z[a];
    if (a != d) miss_others *= 1 - sol.z[a];
  }
  for (std::size_t j = 0; j < inst.actions[d].size(); ++j) {
    const ActionType& t = inst.types[inst.actions[d][j].type];
    const double rest = inst.actions[d][j].prob.to_double() - sol.x[d][j];
    out.u_sender += miss_others * rest * t.xi.to_double();
    out.u_receiver += miss_others * rest * t.rho.to_double();
  }
  return out;
}

json to_json(const ExPostScheme& scheme, const IndependentInstance& inst,
             const std::string& selector) {
  const int k = static_cast<int>(scheme.order.size());
  json accept = json::object();
  for (int a : scheme.order) {
    json per = json::object();
    for (std::size_t j = 0; j < inst.actions[a].size(); ++j) {
      per[inst.types[inst.actions[a][j].type].id] = round12(scheme.accept[a][j]);
    }
    accept[std::to_string(a)] = per;
  }
  json out{{"method", "independent"},
           {"selector", selector},
           {"k", k},
           {"order", scheme.order},
           {"accept", accept},
           {"fallback", scheme.fallback},
           {"f_value", round12(scheme.f_value)},
           {"u_sender_lb", round12((1 - std::pow(1 - 1.0 / k, k)) * scheme.f_value)},
           {"u_sender", round12(scheme.u_sender)},
           {"u_receiver", round12(scheme.u_receiver)}};
  if (!scheme.guaranteed) out["warning"] = "persuasiveness not guaranteed";
  return out;
}

ExPostExecutor::ExPostExecutor(const IndependentInstance& inst,
                               ExPostScheme scheme)
    : scheme_(std::move(scheme)) {
  entry_of_type_.resize(inst.num_actions());
  for (int a = 0; a < inst.num_actions(); ++a) {
    entry_of_type_[a].assign(inst.types.size(), -1);
    for (std::size_t j = 0; j < inst.actions[a].size(); ++j) {
      entry_of_type_[a][inst.actions[a][j].type] = static_cast<int>(j);
    }
  }
}

Recommendation ExPostExecutor::distribution(const State& state) const {
  std::map<int, double> mass;
  double reach = 1;
  for (int a : scheme_.order) {
    const int e = entry_of_type_[a][state[a]];
    if (e < 0) throw std::runtime_error("state holds a type outside the action's support");
    const double acc = scheme_.accept[a][e];
    if (acc > 0) mass[a] += reach * acc;
    reach *= 1 - acc;
  }
  if (reach > 0) mass[scheme_.fallback] += reach;
  return Recommendation(mass.begin(), mass.end());
}

}  // namespace persuasion
