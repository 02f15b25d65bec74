#include <cmath>

#include "doctest.h"
#include "persuasion/fixtures.hpp"
#include "persuasion/independent_schemes.hpp"
#include "persuasion/simulate.hpp"
#include "persuasion/symmetric_schemes.hpp"

using namespace persuasion;

TEST_CASE("intro slope scheme: sample mean near 2/3") {
  const auto inst = std::get<SymmetricInstance>(load_instance(fixtures::intro()));
  const SlopeExecutor ex(inst, slope_algorithm(inst, 3));
  const auto r = estimate(ex, Instance(inst), 100000, 7);
  CHECK(std::abs(r.sender.mean - 2.0 / 3) <= 3 * r.sender.stderr_);
  CHECK(r.persuasive_3sigma);
}

TEST_CASE("footnote compute-signal: sample mean near the closed form") {
  const int k = 3;
  const auto inst = std::get<IndependentInstance>(load_instance(fixtures::footnote_iid(k)));
  const ExPostExecutor ex(inst, compute_signal(inst, actions_greedy(inst, k)));
  const auto r = estimate(ex, Instance(inst), 100000, 8);
  CHECK(std::abs(r.sender.mean - (1 - std::pow(1 - 1.0 / k, k))) <= 3 * r.sender.stderr_);
}

TEST_CASE("deterministic instance has zero spread") {
  const json doc = {{"kind", "iid"},
                    {"n", 2},
                    {"palette", json::array({{{"id", "x"}, {"rho", "1/2"}, {"xi", "1/4"}, {"q", "1"}}})}};
  const auto inst = std::get<SymmetricInstance>(load_instance(doc));
  const SlopeExecutor ex(inst, slope_algorithm(inst, 2));
  const auto r = estimate(ex, Instance(inst), 1000, 1);
  CHECK(r.sender.mean == doctest::Approx(0.25));
  CHECK(r.sender.stderr_ == 0);
  CHECK(r.receiver.mean == doctest::Approx(0.5));
}

TEST_CASE("estimates are reproducible and independent of the thread count") {
  const auto inst = std::get<SymmetricInstance>(load_instance(fixtures::ratio_iid(6)));
  const SlopeExecutor ex(inst, slope_algorithm(inst, 3));
  const json one = to_json(estimate(ex, Instance(inst), 30000, 42, 1));
  CHECK(to_json(estimate(ex, Instance(inst), 30000, 42, 1)) == one);
  CHECK(to_json(estimate(ex, Instance(inst), 30000, 42, 4)) == one);
  CHECK(to_json(estimate(ex, Instance(inst), 30000, 43, 1)) != one);
  CHECK(to_table(estimate(ex, Instance(inst), 30000, 42, 3)) ==
        to_table(estimate(ex, Instance(inst), 30000, 42, 1)));
}
