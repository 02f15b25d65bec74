#include <fstream>

#include "doctest.h"
#include "persuasion/fixtures.hpp"
#include "persuasion/model.hpp"

using namespace persuasion;

TEST_CASE("shipped fixture files match the generators") {
  for (const auto& [name, doc] : fixtures::shipped()) {
    CAPTURE(name);
    std::ifstream in(std::string(FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    const json file = json::parse(in);
    CHECK(file == doc);
    CHECK_NOTHROW(load_instance(file));
  }
}

TEST_CASE("generators reject degenerate sizes") {
  CHECK_THROWS_AS(fixtures::footnote_iid(1), ValidationError);
  CHECK_THROWS_AS(fixtures::ratio_iid(1), ValidationError);
  CHECK_THROWS_AS(fixtures::tight_random_order(1), ValidationError);
}
