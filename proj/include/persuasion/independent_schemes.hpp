#pragma once

#include <optional>
#include <string>
#include <vector>

#include "persuasion/model.hpp"
#include "persuasion/scheme.hpp"

namespace persuasion {

/// Sufficient-condition check for rho_E-optimality. The general condition
/// refers to the unknown optimal scheme, so a negative answer is "unknown".
struct RhoECheck {
  bool holds = false;
  std::string diagnosis;
};

RhoECheck check_rhoE_optimality(const IndependentInstance& inst);

/// Piecewise-linear concave g(z) on [0, 1]: the best sender value from at
/// most z mass of one action's types, subject to receiver value >= rho_E.
struct GiCurve {
  struct Breakpoint {
    double z = 0;
    double value = 0;
    double slope = 0;  // to the right of z; 0 at z = 1
  };
  int action = -1;
  std::vector<Breakpoint> points;

  double operator()(double z) const;
};

/// Exact breakpoints via tangent refinement on the parametric LP. With a
/// grid, the LP is solved at those z only and the concave envelope returned.
GiCurve g_curve(const IndependentInstance& inst, int action, double rho_E,
                const std::optional<std::vector<double>>& grid = std::nullopt);

/// Single evaluation of g at z, through the same LP.
double g_value(const IndependentInstance& inst, int action, double rho_E,
               double z);

/// Optimal solution of the relaxation over S plus the designated action.
struct RelaxationSolution {
  std::vector<int> S;                  // sorted, designated excluded
  std::vector<double> z;               // per action; 0 outside S + designated
  std::vector<std::vector<double>> x;  // per action, per support entry
  std::vector<double> g;               // per action: sum_j x_ij xi_ij
  double objective = 0;
};

RelaxationSolution f_of_S(const IndependentInstance& inst,
                          const std::vector<int>& S);

/// Greedy marginal-gain selection of k-1 actions; ties to the lowest index.
std::vector<int> actions_greedy(const IndependentInstance& inst, int k,
                                int threads = 1);

/// The k-1 actions with the largest g_i(z_i) in f(all but designated).
std::vector<int> actions_reduce(const IndependentInstance& inst, int k);

/// One knapsack item pair of the discretized problem.
struct KnapsackItem {
  int action = -1;
  double w_req = 0, p_req = 0;  // particles with marginal above the guess
  double w_opt = 0, p_opt = 0;  // particles with marginal equal to it
};

struct KnapsackResult {
  bool feasible = false;
  std::vector<int> actions;  // non-designated actions packed
  double adjusted_profit = 0;
};

/// Profit-scaled DP over (count, required profit, optional profit) keeping
/// the minimum required size. `rate` is the guessed marginal per unit mass.
KnapsackResult knapsack_dp(const std::vector<KnapsackItem>& items,
                           const KnapsackItem& designated, double rate, int k,
                           double delta);

/// Discretized selection with the (1 - eps) guarantee on f.
std::vector<int> fptas_select(const IndependentInstance& inst, int k,
                              double epsilon, int threads = 1);

/// The ex-post scheme: coins in ratio order, fallback to the designated.
struct ExPostScheme {
  std::vector<int> order;                   // S + designated, ratio order
  std::vector<std::vector<double>> accept;  // per action, per support entry
  int fallback = 0;
  double f_value = 0;
  double u_sender = 0;    // exact, closed form
  double u_receiver = 0;  // exact, closed form
  bool guaranteed = true;  // false when rho_E-optimality is not established
};

ExPostScheme compute_signal(const IndependentInstance& inst,
                            const std::vector<int>& S);

json to_json(const ExPostScheme& scheme, const IndependentInstance& inst,
             const std::string& selector);

class ExPostExecutor : public SchemeExecutor {
 public:
  ExPostExecutor(const IndependentInstance& inst, ExPostScheme scheme);
  std::string name() const override { return "independent"; }
  Recommendation distribution(const State& state) const override;
  const ExPostScheme& scheme() const { return scheme_; }

 private:
  ExPostScheme scheme_;
  std::vector<std::vector<int>> entry_of_type_;  // per action: type -> entry
};

}  // namespace persuasion
