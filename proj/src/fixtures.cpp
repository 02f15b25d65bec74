#include "persuasion/fixtures.hpp"

namespace persuasion::fixtures {

namespace {

json type(const std::string& id, const std::string& rho, const std::string& xi) {
  return json{{"id", id}, {"rho", rho}, {"xi", xi}};
}

json entry(const std::string& id, const std::string& rho, const std::string& xi,
           const std::string& q) {
  json t = type(id, rho, xi);
  t["q"] = q;
  return t;
}

std::string frac(int num, int den) {
  return den == 1 ? std::to_string(num) : Rational(num, den).str();
}

}  // namespace

json intro() {
  return json{{"kind", "d_random_order"},
              {"vectors", json::array({json::array({type("GB", "0", "1"),
                                                    type("BG", "1", "0"),
                                                    type("BB", "0", "0")})})},
              {"vector_probs", json::array({"1"})}};
}

json sec43() {
  return json{{"kind", "independent"},
              {"actions",
               json::array({json::array({entry("a1", "0", "1", "1")}),
                            json::array({entry("a2_good", "1", "0", "1/2"),
                                         entry("a2_bad", "0", "0", "1/2")})})}};
}

json footnote_iid(int k) {
  if (k < 2) throw ValidationError("footnote fixture needs k >= 2");
  json actions = json::array();
  for (int i = 0; i < k; ++i) {
    const std::string s = std::to_string(i + 1);
    actions.push_back(json::array({entry("hi" + s, "1", "1", frac(1, k)),
                                   entry("lo" + s, "0", "0", frac(k - 1, k))}));
  }
  return json{{"kind", "independent"}, {"actions", actions}};
}

json ratio_iid(int n) {
  if (n < 2) throw ValidationError("ratio fixture needs n >= 2");
  return json{{"kind", "iid"},
              {"n", n},
              {"palette", json::array({entry("hit", "1", "1", frac(1, n)),
                                       entry("miss", "0", "0", frac(n - 1, n))})}};
}

json tight_random_order(int n) {
  if (n < 2) throw ValidationError("tight fixture needs n >= 2");
  json vec = json::array({type("star", "1", "1")});
  for (int i = 1; i < n; ++i) vec.push_back(type("blank" + std::to_string(i), "0", "0"));
  return json{{"kind", "d_random_order"},
              {"vectors", json::array({vec})},
              {"vector_probs", json::array({"1"})}};
}

std::vector<std::pair<std::string, json>> shipped() {
  return {{"intro.json", intro()},
          {"sec43.json", sec43()},
          {"footnote_iid.json", footnote_iid(3)},
          {"footnote_iid_k2.json", footnote_iid(2)},
          {"footnote_iid_k3.json", footnote_iid(3)},
          {"footnote_iid_k5.json", footnote_iid(5)},
          {"ratio_iid.json", ratio_iid(6)},
          {"tight_random_order.json", tight_random_order(4)}};
}

}  // namespace persuasion::fixtures
