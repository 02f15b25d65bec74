#pragma once

#include <map>
#include <vector>

#include "persuasion/geometry.hpp"
#include "persuasion/model.hpp"
#include "persuasion/scheme.hpp"

namespace persuasion {

/// States merged by the utility points of the receiver's actions: the LP only
/// sees utilities, so states with equal point vectors are interchangeable.
struct MergedPrior {
  std::vector<std::vector<int>> keys;  // point index per action
  std::vector<double> prob;
  std::vector<Point> points;
  std::vector<int> point_of_type;
};

MergedPrior merged_prior(const Instance& inst, double state_bound);

/// Optimal direct persuasive scheme over a fixed signal set.
struct TabularScheme {
  std::vector<int> signals;  // recommended actions (K)
  std::map<std::vector<int>, std::vector<double>> table;  // key -> phi over K
  double opt = 0;
  double receiver = 0;
};

/// Best over every admissible K (symmetric: K = [k]; independent: all
/// k-subsets). Throws ValidationError when the expansion exceeds the bound.
TabularScheme optimal_scheme_bruteforce(const Instance& inst, int k,
                                        double state_bound = 1e5,
                                        int threads = 1);

json to_json(const TabularScheme& scheme, const Instance& inst);

class TabularExecutor : public SchemeExecutor {
 public:
  TabularExecutor(const Instance& inst, TabularScheme scheme);
  std::string name() const override { return "exact"; }
  Recommendation distribution(const State& state) const override;
  const TabularScheme& scheme() const { return scheme_; }

 private:
  TabularScheme scheme_;
  std::vector<int> point_of_type_;
  int actions_;
};

struct SignalReport {
  int action = 0;
  double prob = 0;
  double receiver = 0;       // conditional on the signal
  double best_deviation = 0;  // conditional value of the best other action
  int deviation_action = -1;
  bool persuasive = true;
};

struct PersuasivenessReport {
  std::vector<SignalReport> signals;  // only signals sent with positive mass
  double sender = 0;
  double receiver = 0;
  bool persuasive = true;
};

/// Exact per-signal conditional utilities over the enumerated prior.
PersuasivenessReport persuasiveness_check(const SchemeExecutor& scheme,
                                          const Instance& inst,
                                          double state_bound = 1e5,
                                          double tolerance = 1e-8);

json to_json(const PersuasivenessReport& report);

}  // namespace persuasion
