#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "persuasion/model.hpp"
#include "persuasion/scheme.hpp"

namespace persuasion {

struct Estimate {
  double mean = 0;
  double stderr_ = 0;  // sample sd / sqrt(count)
};

struct SignalStats {
  int action = 0;
  std::int64_t count = 0;
  double frequency = 0;
  Estimate receiver;  // conditional on the signal
  // Worst deviation: min over j of E[rho_i - rho_j | signal i].
  int deviation_action = -1;
  Estimate margin;
  bool persuasive_3sigma = true;  // margin.mean >= -3 * margin.stderr_
};

struct SimReport {
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  std::string scheme;
  Estimate sender;
  Estimate receiver;
  std::vector<SignalStats> signals;  // signals with count > 0
  bool persuasive_3sigma = true;
};

/// Samples states, asks the executor for a recommendation each time and
/// aggregates. Work runs in fixed-size chunks with per-chunk random streams,
/// merged by chunk index, so the report is identical for any thread count.
SimReport estimate(const SchemeExecutor& scheme, const Instance& inst,
                   std::int64_t samples, std::uint64_t seed, int threads = 1);

json to_json(const SimReport& report);
std::string to_table(const SimReport& report);

}  // namespace persuasion
