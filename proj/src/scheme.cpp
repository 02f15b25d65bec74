#include "persuasion/scheme.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

#include "persuasion/parallel.hpp"

namespace persuasion {

int SchemeExecutor::recommend(const State& state, CounterRng& rng) const {
  const Recommendation d = distribution(state);
  double u = rng.uniform();
  for (const auto& [action, p] : d) {
    if (u < p) return action;
    u -= p;
  }
  // Rounding left a sliver of mass; give it to the last positive entry.
  for (auto it = d.rbegin(); it != d.rend(); ++it) {
    if (it->second > 0) return it->first;
  }
  return d.empty() ? 0 : d.front().first;
}

double round12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PERSUADE_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return 1;
}

}  // namespace persuasion
