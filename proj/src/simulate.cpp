#include "persuasion/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "persuasion/parallel.hpp"

namespace persuasion {

namespace {

constexpr std::int64_t kChunk = 4096;

struct Moments {
  double sum = 0, sq = 0;
  void add(double v) {
    sum += v;
    sq += v * v;
  }
  void merge(const Moments& o) {
    sum += o.sum;
    sq += o.sq;
  }
  Estimate estimate(std::int64_t count) const {
    if (count <= 0) return {};
    const double mean = sum / count;
    double var = count > 1 ? (sq - sum * mean) / (count - 1) : 0.0;
    if (var < 0) var = 0;
    return {mean, std::sqrt(var / count)};
  }
};

struct Tally {
  explicit Tally(int actions)
      : count(actions, 0), rho(actions), diff(actions, std::vector<Moments>(actions)) {}
  Moments sender, receiver;
  std::vector<std::int64_t> count;
  std::vector<Moments> rho;
  std::vector<std::vector<Moments>> diff;  // [signal][other]: rho_i - rho_j

  void merge(const Tally& o) {
    sender.merge(o.sender);
    receiver.merge(o.receiver);
    for (std::size_t i = 0; i < count.size(); ++i) {
      count[i] += o.count[i];
      rho[i].merge(o.rho[i]);
      if (o.count[i] == 0) continue;
      for (std::size_t j = 0; j < count.size(); ++j) diff[i][j].merge(o.diff[i][j]);
    }
  }
};

std::string state_text(const State& s, const std::vector<ActionType>& types) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += types[s[i]].id;
  }
  return out + "]";
}

}  // namespace

SimReport estimate(const SchemeExecutor& scheme, const Instance& inst,
                   std::int64_t samples, std::uint64_t seed, int threads) {
  if (samples < 1) throw ValidationError("samples must be >= 1");
  const int N = std::visit([](const auto& i) { return i.num_actions(); }, inst);
  const auto& types = types_of(inst);
  std::vector<double> rho(types.size()), xi(types.size());
  for (std::size_t t = 0; t < types.size(); ++t) {
    rho[t] = types[t].rho.to_double();
    xi[t] = types[t].xi.to_double();
  }
  const StateSampler sampler(inst);
  const CounterRng root(seed);
  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;

  Tally total(N);
  // Chunks run in batches; each batch is merged in chunk order, which keeps
  // memory bounded and the floating-point sums independent of scheduling.
  const std::int64_t batch = std::max(1, threads) * 4;
  for (std::int64_t first = 0; first < chunks; first += batch) {
    const int here = static_cast<int>(std::min(batch, chunks - first));
    std::vector<Tally> part(here, Tally(N));
    parallel_for(here, threads, [&](int c) {
      const std::int64_t chunk = first + c;
      const std::int64_t begin = chunk * kChunk;
      const std::int64_t end = std::min(samples, begin + kChunk);
      CounterRng rng = root.split(static_cast<std::uint64_t>(chunk));
      Tally& t = part[c];
      State st;
      for (std::int64_t s = begin; s < end; ++s) {
        sampler.sample_into(rng, st);
        int a;
        try {
          a = scheme.recommend(st, rng);
        } catch (const std::exception& e) {
          throw std::runtime_error(std::string(e.what()) + " (state " +
                                   state_text(st, types) + ")");
        }
        if (a < 0 || a >= N) {
          throw std::runtime_error("scheme recommended action " + std::to_string(a) +
                                   " outside the receiver's range (state " +
                                   state_text(st, types) + ")");
        }
        t.sender.add(xi[st[a]]);
        t.receiver.add(rho[st[a]]);
        ++t.count[a];
        t.rho[a].add(rho[st[a]]);
        for (int j = 0; j < N; ++j) t.diff[a][j].add(rho[st[a]] - rho[st[j]]);
      }
    });
    for (const auto& p : part) total.merge(p);
  }

  SimReport r;
  r.samples = samples;
  r.seed = seed;
  r.scheme = scheme.name();
  r.sender = total.sender.estimate(samples);
  r.receiver = total.receiver.estimate(samples);
  for (int i = 0; i < N; ++i) {
    if (total.count[i] == 0) continue;
    SignalStats s;
    s.action = i;
    s.count = total.count[i];
    s.frequency = static_cast<double>(s.count) / samples;
    s.receiver = total.rho[i].estimate(s.count);
    s.margin.mean = std::numeric_limits<double>::infinity();
    for (int j = 0; j < N; ++j) {
      if (j == i) continue;
      const Estimate e = total.diff[i][j].estimate(s.count);
      // Rank by the most pessimistic end of the 3-sigma band.
      if (s.deviation_action < 0 ||
          e.mean + 3 * e.stderr_ < s.margin.mean + 3 * s.margin.stderr_) {
        s.margin = e;
        s.deviation_action = j;
      }
    }
    if (s.deviation_action < 0) s.margin = {};
    s.persuasive_3sigma = s.margin.mean >= -3 * s.margin.stderr_ - 1e-12;
    r.persuasive_3sigma = r.persuasive_3sigma && s.persuasive_3sigma;
    r.signals.push_back(s);
  }
  return r;
}

json to_json(const SimReport& r) {
  auto est = [](const Estimate& e) {
    return json{{"mean", round12(e.mean)}, {"stderr", round12(e.stderr_)}};
  };
  json signals = json::array();
  for (const auto& s : r.signals) {
    signals.push_back({{"action", s.action},
                       {"count", s.count},
                       {"frequency", round12(s.frequency)},
                       {"receiver", est(s.receiver)},
                       {"deviation_action", s.deviation_action},
                       {"margin", est(s.margin)},
                       {"persuasive_3sigma", s.persuasive_3sigma}});
  }
  return json{{"scheme", r.scheme},
              {"samples", r.samples},
              {"seed", r.seed},
              {"rng", CounterRng::kName},
              {"sender", est(r.sender)},
              {"receiver", est(r.receiver)},
              {"signals", signals},
              {"persuasive_3sigma", r.persuasive_3sigma}};
}

std::string to_table(const SimReport& r) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "scheme %s  samples %lld  seed %llu\n",
                r.scheme.c_str(), static_cast<long long>(r.samples),
                static_cast<unsigned long long>(r.seed));
  out << line;
  std::snprintf(line, sizeof line, "sender   %.12g +- %.12g\nreceiver %.12g +- %.12g\n",
                r.sender.mean, r.sender.stderr_, r.receiver.mean, r.receiver.stderr_);
  out << line;
  std::snprintf(line, sizeof line, "%8s %12s %16s %14s %10s %16s %14s %4s\n", "signal",
                "frequency", "receiver", "stderr", "deviation", "margin", "stderr", "ok");
  out << line;
  for (const auto& s : r.signals) {
    std::snprintf(line, sizeof line, "%8d %12.6g %16.12g %14.6g %10d %16.12g %14.6g %4s\n",
                  s.action, s.frequency, s.receiver.mean, s.receiver.stderr_,
                  s.deviation_action, s.margin.mean, s.margin.stderr_,
                  s.persuasive_3sigma ? "yes" : "no");
    out << line;
  }
  return out.str();
}

}  // namespace persuasion
