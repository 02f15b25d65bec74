#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "persuasion/model.hpp"

using persuasion::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PERSUADE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("solve and exact on the examples") {
  const Run slope = run("solve --instance " + fixture("intro.json") + " --k 2 --method slope");
  REQUIRE(slope.code == 0);
  CHECK(json::parse(slope.out)["u_sender"].get<double>() == doctest::Approx(2.0 / 3));

  const Run exact = run("exact --instance " + fixture("sec43.json") + " --k 2");
  REQUIRE(exact.code == 0);
  CHECK(json::parse(exact.out)["opt"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("greedy refuses without the precondition") {
  CHECK(run("solve --instance " + fixture("sec43.json") + " --k 2 --method greedy").code == 3);
  const Run forced = run("solve --instance " + fixture("sec43.json") + " --k 2 --method greedy --force");
  REQUIRE(forced.code == 0);
  CHECK(json::parse(forced.out).contains("warning"));
}

TEST_CASE("invalid input exits 1") {
  CHECK(run("solve --instance /no/such/file.json --k 2").code == 1);
  CHECK(run("solve --instance " + fixture("intro.json") + " --k 9").code == 1);
  CHECK(run("solve --instance " + fixture("intro.json") + " --k 2 --method nope").code == 1);
  CHECK(run("frobnicate").code == 1);

  const std::string bad = std::string(BUILD_DIR) + "/bad_instance.json";
  std::ofstream(bad) << R"({"kind":"iid","n":2,"palette":[{"id":"a","rho":"1","xi":"1","q":"1/3"}]})";
  CHECK(run("solve --instance " + bad + " --k 2").code == 1);
}

TEST_CASE("simulation output is byte-identical across reruns and thread counts") {
  const std::string base =
      "simulate --instance " + fixture("ratio_iid.json") + " --k 3 --samples 20000 --seed 5";
  const Run a = run(base + " --threads 1");
  const Run b = run(base + " --threads 1");
  const Run c = run(base + " --threads 4");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(run(base + " --format table").out == run(base + " --format table --threads 3").out);
}

TEST_CASE("compare holds its bounds on every shipped fixture") {
  for (const char* name : {"intro.json", "tight_random_order.json", "ratio_iid.json",
                           "footnote_iid_k3.json"}) {
    CAPTURE(name);
    const Run r = run(std::string("compare --instance ") + fixture(name) + " --k 2");
    CHECK(r.code == 0);
    for (const auto& row : json::parse(r.out)["rows"]) CHECK(row["ok"].get<bool>());
  }
}

TEST_CASE("compare drops ratio bounds when sender values can be negative") {
  const std::string neg = std::string(BUILD_DIR) + "/negative_sender.json";
  std::ofstream(neg) << R"({"kind":"independent","actions":[
    [{"id":"a","rho":"0","xi":"-1/4","q":"1/9"},{"id":"b","rho":"-1/4","xi":"0","q":"4/9"},
     {"id":"c","rho":"1","xi":"0","q":"4/9"}],
    [{"id":"s0","rho":"1/3","xi":"-1/4","q":"1/2"},{"id":"s1","rho":"1/3","xi":"0","q":"1/2"}]]})";
  const Run r = run("compare --instance " + neg + " --k 2");
  REQUIRE(r.code == 0);
  for (const auto& row : json::parse(r.out)["rows"]) {
    CHECK(row["bound"].is_null());
    CHECK(row["ratio"].is_null());
  }
}

TEST_CASE("fixture command reproduces the shipped files") {
  const Run r = run("fixture --name footnote_iid --k 5");
  REQUIRE(r.code == 0);
  std::ifstream in(fixture("footnote_iid_k5.json"));
  CHECK(json::parse(r.out) == json::parse(in));
}
