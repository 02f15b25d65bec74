#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "persuasion/rational.hpp"
#include "persuasion/rng.hpp"

namespace persuasion {

using json = nlohmann::json;

/// Raised for malformed or inconsistent instance documents and arguments.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ActionType {
  std::string id;
  Rational rho;  // receiver utility
  Rational xi;   // sender utility
};

/// One support entry of a distribution: index into the instance's type table.
struct TypeEntry {
  int type = 0;
  Rational prob;
};
using Distribution = std::vector<TypeEntry>;

/// Realized type index per action slot.
using State = std::vector<int>;

enum class Scenario { iid, prophet_secretary, random_order };

const char* scenario_name(Scenario s);

/// A prior that is invariant under permuting the action coordinates.
///
/// Every type ever mentioned lives in `types`; IID order follows the palette,
/// prophet-secretary is distribution-major, random-order is vector-major.
/// `observed` < n marks a truncated view: the permutation still runs over all
/// n slots but only the first `observed` actions exist for the receiver.
struct SymmetricInstance {
  Scenario scenario = Scenario::iid;
  std::vector<ActionType> types;
  int n = 0;
  int observed = 0;

  Distribution palette;                   // iid
  std::vector<Distribution> dists;        // prophet-secretary
  std::vector<std::vector<int>> vectors;  // random-order, each of length n
  std::vector<Rational> vector_probs;

  /// Actions available to the receiver.
  int num_actions() const { return observed; }
};

struct IndependentInstance {
  std::vector<ActionType> types;
  std::vector<Distribution> actions;
  /// A-priori receiver-optimal action (max E[rho], then max E[xi], then
  /// lowest index). Actions are never renumbered.
  int designated = 0;

  int num_actions() const { return static_cast<int>(actions.size()); }
};

using Instance = std::variant<SymmetricInstance, IndependentInstance>;

Instance load_instance(const json& doc);
Instance load_instance_file(const std::string& path);
json to_json(const Instance& instance);

/// Checks probability sums, id uniqueness, shapes; fills `designated`.
void validate(SymmetricInstance& inst);
void validate(IndependentInstance& inst);

Rational rho_E(const SymmetricInstance& inst);
Rational rho_E(const IndependentInstance& inst);
Rational rho_E(const Instance& inst);

Rational expected_rho(const IndependentInstance& inst, int action);
Rational expected_xi(const IndependentInstance& inst, int action);

SymmetricInstance truncate(const SymmetricInstance& inst, int k);

/// Precomputed cumulative tables for fast sampling.
class StateSampler {
 public:
  explicit StateSampler(const Instance& inst);
  State sample(CounterRng& rng) const;
  void sample_into(CounterRng& rng, State& out) const;

 private:
  struct Cumulative {
    std::vector<double> cum;
    std::vector<int> type;
    int draw(CounterRng& rng) const;
  };
  enum class Kind { iid, prophet_secretary, random_order, independent } kind_;
  int n_ = 0;
  std::vector<Cumulative> tables_;  // per dist/action; single for iid
  Cumulative vector_pick_;          // random-order vector choice
  std::vector<std::vector<int>> vectors_;
};

State sample_state(const Instance& inst, CounterRng& rng);

struct WeightedState {
  State state;
  Rational prob;
};

/// Number of (draw, permutation) outcomes the full expansion would visit.
double state_count(const Instance& inst);

/// Exact prior over full states. Throws ValidationError when the expansion
/// would exceed `bound` outcomes. States are distinct because type ids are.
std::vector<WeightedState> enumerate_states(const Instance& inst,
                                            double bound = 1e6);

const std::vector<ActionType>& types_of(const Instance& inst);

}  // namespace persuasion
