#pragma once

#include <string>
#include <utility>
#include <vector>

#include "persuasion/model.hpp"
#include "persuasion/rng.hpp"

namespace persuasion {

/// Rounds to 12 significant digits, the precision of every float we emit.
double round12(double x);

/// Probability of recommending each action (sparse; entries sum to 1).
using Recommendation = std::vector<std::pair<int, double>>;

/// A direct scheme: maps a state to a recommended action.
class SchemeExecutor {
 public:
  virtual ~SchemeExecutor() = default;

  virtual std::string name() const = 0;

  /// Exact recommendation distribution for `state`.
  virtual Recommendation distribution(const State& state) const = 0;

  /// Draws one recommendation. The default samples from distribution().
  virtual int recommend(const State& state, CounterRng& rng) const;
};

}  // namespace persuasion
