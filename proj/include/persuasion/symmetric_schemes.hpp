#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "persuasion/geometry.hpp"
#include "persuasion/model.hpp"
#include "persuasion/prob_oracle.hpp"
#include "persuasion/scheme.hpp"

namespace persuasion {

/// Output of the slope search: one slope plus a mixing weight for every
/// frontier segment of that slope. Segments are keyed by their endpoint
/// points, named by the lowest type index at each point.
struct SlopeScheme {
  int k = 0;
  Slope s_star;
  std::map<std::pair<int, int>, double> alpha;  // (left, right) -> weight on left
  double u_sender = 0;
  double u_receiver = 0;
};

/// Optimal direct persuasive scheme recommending from the first k actions.
/// Candidate slopes are evaluated independently on `threads` workers.
SlopeScheme slope_algorithm(const SymmetricInstance& inst, int k,
                            int threads = 1);

json to_json(const SlopeScheme& scheme, const SymmetricInstance& inst);

/// Looks at the first k types, finds the frontier correspondence for s* and
/// recommends accordingly. When several slots hold the chosen point the
/// recommendation is split evenly among them, keeping the scheme symmetric.
class SlopeExecutor : public SchemeExecutor {
 public:
  SlopeExecutor(const SymmetricInstance& inst, SlopeScheme scheme);
  std::string name() const override { return "slope"; }
  Recommendation distribution(const State& state) const override;
  const SlopeScheme& scheme() const { return scheme_; }

 private:
  SlopeScheme scheme_;
  PointSet ps_;
  std::map<std::pair<int, int>, double> alpha_by_point_;
};

/// Runs the optimal n-signal scheme; recommendations outside [k] become a
/// uniform choice in [k].
class ImitationExecutor : public SchemeExecutor {
 public:
  ImitationExecutor(const SymmetricInstance& inst, int k, int threads = 1);
  std::string name() const override { return "imitation"; }
  Recommendation distribution(const State& state) const override;
  const SlopeScheme& base_scheme() const { return base_->scheme(); }
  int k() const { return k_; }

 private:
  int k_;
  std::unique_ptr<SlopeExecutor> base_;
};

/// Sampled-LP scheme with eps-relaxed persuasiveness on the first k slots.
struct BicriteriaScheme {
  int k = 0;
  double epsilon = 0;
  int samples = 0;
  std::map<std::vector<int>, std::vector<double>> table;  // first-k types
  double empirical_sender = 0;
  double empirical_receiver = 0;
  double max_regret = 0;  // worst per-signal conditional regret, empirical
};

/// Throws ValidationError when a utility lies outside [-1, 1].
BicriteriaScheme bicriteria_scheme(const SymmetricInstance& inst, int k,
                                   double epsilon, int samples,
                                   CounterRng& rng);

json to_json(const BicriteriaScheme& scheme, const SymmetricInstance& inst);

class BicriteriaExecutor : public SchemeExecutor {
 public:
  explicit BicriteriaExecutor(BicriteriaScheme scheme)
      : scheme_(std::move(scheme)) {}
  std::string name() const override { return "bicriteria"; }
  Recommendation distribution(const State& state) const override;
  const BicriteriaScheme& scheme() const { return scheme_; }

 private:
  BicriteriaScheme scheme_;
};

}  // namespace persuasion
