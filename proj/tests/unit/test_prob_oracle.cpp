#include "doctest.h"
#include "persuasion/fixtures.hpp"
#include "persuasion/prob_oracle.hpp"
#include "support.hpp"

using namespace persuasion;

namespace {

SymmetricInstance intro() {
  return std::get<SymmetricInstance>(load_instance(fixtures::intro()));
}

int type_index(const SymmetricInstance& inst, const std::string& id) {
  for (std::size_t i = 0; i < inst.types.size(); ++i) {
    if (inst.types[i].id == id) return static_cast<int>(i);
  }
  throw std::runtime_error("no type " + id);
}

}  // namespace

TEST_CASE("subset product sums") {
  CHECK(subset_product_sum({1, 1, 1}, 2) == doctest::Approx(3));
  CHECK(subset_product_sum({0.5, 0.5}, 2) == doctest::Approx(0.25));
  CHECK(subset_product_sum({0.3, 0.7, 0.2}, 0) == doctest::Approx(1));
  CHECK_THROWS(subset_product_sum({0.3, 0.7}, 3));
}

TEST_CASE("intro instance oracles") {
  const auto inst = intro();
  const int gb = type_index(inst, "GB"), bg = type_index(inst, "BG"), bb = type_index(inst, "BB");
  const Slope m1(Rational(-1));
  CHECK(ProbabilityOracle(inst, 3).p_segment(gb, bg) == doctest::Approx(1));
  const ProbabilityOracle two(inst, 2);
  CHECK(two.p_segment(gb, bg) == doctest::Approx(1.0 / 3));
  CHECK(two.p_unique(gb, m1) == doctest::Approx(1.0 / 3));
  CHECK(two.p_unique(bb, m1) == doctest::Approx(0));

  // Segment slope -1 plus one auxiliary on each side, plus the two boundaries.
  const auto slopes = two.candidate_slopes();
  CHECK(slopes.size() == 5);
  CHECK(slopes.front().is_neg_infinity());
  CHECK(slopes.back() == Slope(Rational(0)));
  CHECK(std::count(slopes.begin(), slopes.end(), m1) == 1);
}

TEST_CASE("same-distribution pair never co-occurs in prophet secretary") {
  const json doc = {{"kind", "prophet_secretary"},
                    {"dists", json::array({json::array({{{"id", "a"}, {"rho", "0"}, {"xi", "1"}, {"q", "1/2"}},
                                                        {{"id", "b"}, {"rho", "1"}, {"xi", "0"}, {"q", "1/2"}}}),
                                           json::array({{{"id", "c"}, {"rho", "0"}, {"xi", "0"}, {"q", "1"}}})})}};
  const auto inst = std::get<SymmetricInstance>(load_instance(doc));
  CHECK(ProbabilityOracle(inst, 2).p_segment(0, 1) == 0);
}

TEST_CASE("single type has only the boundary slopes") {
  const json doc = {{"kind", "iid"},
                    {"n", 3},
                    {"palette", json::array({{{"id", "x"}, {"rho", "1"}, {"xi", "1"}, {"q", "1"}}})}};
  const auto inst = std::get<SymmetricInstance>(load_instance(doc));
  CHECK(ProbabilityOracle(inst, 2).candidate_slopes().size() == 2);
}

TEST_CASE("enumerated tables on the intro instance") {
  const auto inst = intro();
  const Slope m1(Rational(-1));
  const auto t = enumerate_oracle(inst, 2, {m1});
  const int gb = type_index(inst, "GB"), bg = type_index(inst, "BG");
  CHECK(t.segment.at({gb, bg}) == Rational(1, 3));
  CHECK(t.unique[0].at(gb) == Rational(1, 3));
}

TEST_CASE("property: analytic oracle matches enumeration on small random instances") {
  CounterRng rng(8, 8);
  double worst = 0;
  for (int i = 0; i < 45; ++i) {
    const int n = testing_support::uniform_int(rng, 2, 4);
    const auto inst = std::get<SymmetricInstance>(
        load_instance(testing_support::random_symmetric(rng, i % 3, n)));
    const int k = testing_support::uniform_int(rng, 2, n);
    const ProbabilityOracle oracle(inst, k);
    const auto slopes = oracle.candidate_slopes();
    const auto t = enumerate_oracle(inst, k, slopes);
    for (const auto& [ab, p] : t.segment) {
      worst = std::max(worst, std::abs(oracle.p_segment(ab.first, ab.second) - p.to_double()));
    }
    for (std::size_t s = 0; s < slopes.size(); ++s) {
      for (int c = 0; c < static_cast<int>(inst.types.size()); ++c) {
        const auto it = t.unique[s].find(c);
        const double want = it == t.unique[s].end() ? 0 : it->second.to_double();
        worst = std::max(worst, std::abs(oracle.p_unique(c, slopes[s]) - want));
      }
    }
  }
  CHECK(worst <= 1e-12);
}
