#include <cmath>

#include "doctest.h"
#include "persuasion/exact_oracle.hpp"
#include "persuasion/fixtures.hpp"
#include "persuasion/symmetric_schemes.hpp"
#include "support.hpp"

using namespace persuasion;

namespace {

SymmetricInstance sym(const json& doc) { return std::get<SymmetricInstance>(load_instance(doc)); }

int slot_of(const SymmetricInstance& inst, const State& state, const std::string& id) {
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (inst.types[state[i]].id == id) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

TEST_CASE("slope algorithm on the intro instance") {
  const auto inst = sym(fixtures::intro());
  const auto three = slope_algorithm(inst, 3);
  CHECK(three.u_sender == doctest::Approx(2.0 / 3));
  CHECK(three.u_receiver >= 1.0 / 3 - 1e-8);

  const auto two = slope_algorithm(inst, 2);
  CHECK(two.u_sender == doctest::Approx(2.0 / 3));
  CHECK(two.s_star == Slope(Rational(-1)));
  REQUIRE(two.alpha.size() == 1);
  CHECK(two.alpha.begin()->second == doctest::Approx(1));

  // GB and BG in the first two slots: all mass on GB.
  const SlopeExecutor ex(inst, two);
  for (const auto& ws : enumerate_states(Instance(inst))) {
    const int gb = slot_of(inst, ws.state, "GB"), bg = slot_of(inst, ws.state, "BG");
    if (gb < 2 && bg < 2) {
      const auto rec = ex.distribution(ws.state);
      REQUIRE(rec.size() == 1);
      CHECK(rec[0].first == gb);
      CHECK(rec[0].second == doctest::Approx(1));
    }
  }
}

TEST_CASE("single type: utility is its sender value") {
  const json doc = {{"kind", "iid"},
                    {"n", 3},
                    {"palette", json::array({{{"id", "x"}, {"rho", "1/2"}, {"xi", "3/4"}, {"q", "1"}}})}};
  const auto inst = sym(doc);
  for (int k = 2; k <= 3; ++k) CHECK(slope_algorithm(inst, k).u_sender == doctest::Approx(0.75));
  CounterRng rng(1);
  const auto b = bicriteria_scheme(inst, 2, 0.05, 200, rng);
  CHECK(b.empirical_sender == doctest::Approx(0.75));
}

TEST_CASE("slope output is persuasive and matches the exact optimum") {
  CounterRng rng(71, 71);
  for (int i = 0; i < 30; ++i) {
    const int n = testing_support::uniform_int(rng, 2, 4);
    const auto inst = sym(testing_support::random_symmetric(rng, i % 3, n));
    const int k = testing_support::uniform_int(rng, 2, n);
    const auto scheme = slope_algorithm(inst, k);
    const SlopeExecutor ex(inst, scheme);
    const auto report = persuasiveness_check(ex, Instance(inst), 1e6);
    CHECK(report.persuasive);
    CHECK(report.sender == doctest::Approx(scheme.u_sender).epsilon(1e-9));
    CHECK(scheme.u_receiver >= rho_E(inst).to_double() - 1e-8);
    CHECK(scheme.u_sender ==
          doctest::Approx(optimal_scheme_bruteforce(Instance(inst), k, 1e6).opt).epsilon(1e-7));
  }
}

TEST_CASE("imitation scheme") {
  const auto tight = sym(fixtures::tight_random_order(4));
  const ImitationExecutor two(tight, 2);
  CHECK(persuasiveness_check(two, Instance(tight)).sender >= 0.5 - 1e-9);

  const auto intro = sym(fixtures::intro());
  const ImitationExecutor i2(intro, 2);
  const auto report = persuasiveness_check(i2, Instance(intro));
  CHECK(report.persuasive);
  CHECK(report.sender >= 4.0 / 9 - 1e-9);

  // k = n: exactly the slope scheme.
  const ImitationExecutor full(intro, 3);
  const SlopeExecutor slope(intro, slope_algorithm(intro, 3));
  for (const auto& ws : enumerate_states(Instance(intro))) {
    CHECK(full.distribution(ws.state) == slope.distribution(ws.state));
  }
}

TEST_CASE("bicriteria with a vacuous persuasiveness slack is pointwise sender-optimal") {
  const auto inst = sym(fixtures::intro());
  CounterRng rng(9);
  const auto b = bicriteria_scheme(inst, 3, 2.0, 500, rng);
  CHECK(b.empirical_sender == doctest::Approx(1));
  const BicriteriaExecutor ex(b);
  for (const auto& ws : enumerate_states(Instance(inst))) {
    const auto rec = ex.distribution(ws.state);
    double on_gb = 0;
    for (const auto& [a, p] : rec) {
      if (inst.types[ws.state[a]].id == "GB") on_gb += p;
    }
    CHECK(on_gb == doctest::Approx(1));
  }
}

TEST_CASE("bicriteria rejects utilities outside [-1, 1]") {
  const json doc = {{"kind", "iid"},
                    {"n", 2},
                    {"palette", json::array({{{"id", "x"}, {"rho", "2"}, {"xi", "0"}, {"q", "1"}}})}};
  CounterRng rng(1);
  CHECK_THROWS_AS(bicriteria_scheme(sym(doc), 2, 0.1, 10, rng), ValidationError);
}

TEST_CASE("scheme json carries the chosen slope") {
  const auto inst = sym(fixtures::intro());
  const json j = to_json(slope_algorithm(inst, 2), inst);
  CHECK(j["method"] == "slope");
  CHECK(j["k"] == 2);
  CHECK(j["s_star"] == "-1");
  CHECK(j["alpha"].size() == 1);
}
