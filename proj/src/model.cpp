#include "persuasion/model.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

namespace persuasion {

namespace {

Rational parse_rat(const json& v, const std::string& where) {
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw ValidationError(where +
                        ": rationals must be strings \"p/q\" or integers");
}

json rat_json(const Rational& r) {
  if (r.is_integer()) {
    try {
      return json(std::stoll(r.str()));
    } catch (...) {
    }
  }
  return json(r.str());
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

ActionType parse_type(const json& t, const std::string& where) {
  if (!t.is_object()) throw ValidationError(where + ": type must be an object");
  const json& id = require(t, "id", where);
  if (!id.is_string()) throw ValidationError(where + ": id must be a string");
  return ActionType{id.get<std::string>(),
                    parse_rat(require(t, "rho", where), where + ".rho"),
                    parse_rat(require(t, "xi", where), where + ".xi")};
}

Distribution parse_dist(const json& arr, std::vector<ActionType>& types,
                        const std::string& where) {
  if (!arr.is_array()) throw ValidationError(where + ": expected an array");
  Distribution d;
  for (std::size_t j = 0; j < arr.size(); ++j) {
    const std::string w = where + "[" + std::to_string(j) + "]";
    types.push_back(parse_type(arr[j], w));
    d.push_back({static_cast<int>(types.size()) - 1,
                 parse_rat(require(arr[j], "q", w), w + ".q")});
  }
  return d;
}

void check_unique_ids(const std::vector<ActionType>& types) {
  std::set<std::string> seen;
  for (const auto& t : types) {
    if (!seen.insert(t.id).second) {
      throw ValidationError("duplicate type id '" + t.id + "'");
    }
  }
}

void check_dist(const Distribution& d, const std::string& where) {
  if (d.empty()) throw ValidationError(where + ": empty support");
  Rational sum;
  for (const auto& e : d) {
    if (e.prob < Rational(0)) {
      throw ValidationError(where + ": negative probability");
    }
    sum += e.prob;
  }
  if (sum != Rational(1)) {
    throw ValidationError(where + ": probabilities must sum to 1 (got " +
                          sum.str() + ")");
  }
}

json type_json(const ActionType& t) {
  return json{{"id", t.id}, {"rho", rat_json(t.rho)}, {"xi", rat_json(t.xi)}};
}

json dist_json(const Distribution& d, const std::vector<ActionType>& types) {
  json arr = json::array();
  for (const auto& e : d) {
    json t = type_json(types[e.type]);
    t["q"] = rat_json(e.prob);
    arr.push_back(std::move(t));
  }
  return arr;
}

Rational factorial(int n) {
  Rational f(1);
  for (int i = 2; i <= n; ++i) f *= Rational(i);
  return f;
}

}  // namespace

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::iid:
      return "iid";
    case Scenario::prophet_secretary:
      return "prophet_secretary";
    case Scenario::random_order:
      return "d_random_order";
  }
  return "?";
}

void validate(SymmetricInstance& inst) {
  check_unique_ids(inst.types);
  switch (inst.scenario) {
    case Scenario::iid:
      if (inst.n < 1) throw ValidationError("n must be >= 1");
      check_dist(inst.palette, "palette");
      break;
    case Scenario::prophet_secretary:
      inst.n = static_cast<int>(inst.dists.size());
      if (inst.n < 1) throw ValidationError("dists must be non-empty");
      for (std::size_t i = 0; i < inst.dists.size(); ++i) {
        check_dist(inst.dists[i], "dists[" + std::to_string(i) + "]");
      }
      break;
    case Scenario::random_order: {
      if (inst.vectors.empty()) throw ValidationError("vectors must be non-empty");
      if (inst.vectors.size() != inst.vector_probs.size()) {
        throw ValidationError("vector_probs length must match vectors");
      }
      inst.n = static_cast<int>(inst.vectors.front().size());
      if (inst.n < 1) throw ValidationError("vectors must be non-empty");
      Rational sum;
      for (std::size_t j = 0; j < inst.vectors.size(); ++j) {
        if (static_cast<int>(inst.vectors[j].size()) != inst.n) {
          throw ValidationError("all vectors must have the same length");
        }
        if (inst.vector_probs[j] < Rational(0)) {
          throw ValidationError("negative vector probability");
        }
        sum += inst.vector_probs[j];
      }
      if (sum != Rational(1)) {
        throw ValidationError("vector_probs: probabilities must sum to 1 (got " +
                              sum.str() + ")");
      }
      break;
    }
  }
  if (inst.observed == 0) inst.observed = inst.n;
  if (inst.observed < 1 || inst.observed > inst.n) {
    throw ValidationError("observed must lie in [1, n]");
  }
}

Rational expected_rho(const IndependentInstance& inst, int action) {
  Rational e;
  for (const auto& t : inst.actions[action]) e += t.prob * inst.types[t.type].rho;
  return e;
}

Rational expected_xi(const IndependentInstance& inst, int action) {
  Rational e;
  for (const auto& t : inst.actions[action]) e += t.prob * inst.types[t.type].xi;
  return e;
}

void validate(IndependentInstance& inst) {
  check_unique_ids(inst.types);
  if (inst.actions.empty()) throw ValidationError("actions must be non-empty");
  for (std::size_t i = 0; i < inst.actions.size(); ++i) {
    check_dist(inst.actions[i], "actions[" + std::to_string(i) + "]");
  }
  int best = 0;
  Rational best_rho = expected_rho(inst, 0), best_xi = expected_xi(inst, 0);
  for (int i = 1; i < inst.num_actions(); ++i) {
    const Rational r = expected_rho(inst, i), x = expected_xi(inst, i);
    if (r > best_rho || (r == best_rho && x > best_xi)) {
      best = i;
      best_rho = r;
      best_xi = x;
    }
  }
  inst.designated = best;
}

Instance load_instance(const json& doc) {
  if (!doc.is_object()) throw ValidationError("instance must be a JSON object");
  const json& kind_v = require(doc, "kind", "instance");
  if (!kind_v.is_string()) throw ValidationError("kind must be a string");
  const std::string kind = kind_v.get<std::string>();

  if (kind == "independent") {
    IndependentInstance inst;
    const json& acts = require(doc, "actions", "instance");
    if (!acts.is_array()) throw ValidationError("actions must be an array");
    for (std::size_t i = 0; i < acts.size(); ++i) {
      inst.actions.push_back(
          parse_dist(acts[i], inst.types, "actions[" + std::to_string(i) + "]"));
    }
    validate(inst);
    return inst;
  }

  SymmetricInstance inst;
  if (kind == "iid") {
    inst.scenario = Scenario::iid;
    const json& n = require(doc, "n", "instance");
    if (!n.is_number_integer()) throw ValidationError("n must be an integer");
    inst.n = n.get<int>();
    inst.palette = parse_dist(require(doc, "palette", "instance"), inst.types,
                              "palette");
  } else if (kind == "prophet_secretary") {
    inst.scenario = Scenario::prophet_secretary;
    const json& dists = require(doc, "dists", "instance");
    if (!dists.is_array()) throw ValidationError("dists must be an array");
    for (std::size_t i = 0; i < dists.size(); ++i) {
      inst.dists.push_back(
          parse_dist(dists[i], inst.types, "dists[" + std::to_string(i) + "]"));
    }
  } else if (kind == "d_random_order") {
    inst.scenario = Scenario::random_order;
    const json& vecs = require(doc, "vectors", "instance");
    const json& probs = require(doc, "vector_probs", "instance");
    if (!vecs.is_array() || !probs.is_array()) {
      throw ValidationError("vectors and vector_probs must be arrays");
    }
    for (std::size_t j = 0; j < vecs.size(); ++j) {
      const std::string w = "vectors[" + std::to_string(j) + "]";
      if (!vecs[j].is_array()) throw ValidationError(w + ": expected an array");
      std::vector<int> v;
      for (std::size_t i = 0; i < vecs[j].size(); ++i) {
        inst.types.push_back(
            parse_type(vecs[j][i], w + "[" + std::to_string(i) + "]"));
        v.push_back(static_cast<int>(inst.types.size()) - 1);
      }
      inst.vectors.push_back(std::move(v));
    }
    for (std::size_t j = 0; j < probs.size(); ++j) {
      inst.vector_probs.push_back(
          parse_rat(probs[j], "vector_probs[" + std::to_string(j) + "]"));
    }
  } else {
    throw ValidationError("unknown kind '" + kind + "'");
  }
  if (doc.contains("observed")) {
    if (!doc["observed"].is_number_integer()) {
      throw ValidationError("observed must be an integer");
    }
    inst.observed = doc["observed"].get<int>();
    if (inst.observed < 1) throw ValidationError("observed must lie in [1, n]");
  }
  validate(inst);
  return inst;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("parse failure in '" + path + "': " + e.what());
  }
  return load_instance(doc);
}

json to_json(const Instance& instance) {
  if (const auto* ind = std::get_if<IndependentInstance>(&instance)) {
    json acts = json::array();
    for (const auto& a : ind->actions) acts.push_back(dist_json(a, ind->types));
    return json{{"kind", "independent"}, {"actions", acts}};
  }
  const auto& s = std::get<SymmetricInstance>(instance);
  json doc{{"kind", scenario_name(s.scenario)}};
  switch (s.scenario) {
    case Scenario::iid:
      doc["n"] = s.n;
      doc["palette"] = dist_json(s.palette, s.types);
      break;
    case Scenario::prophet_secretary: {
      json dists = json::array();
      for (const auto& d : s.dists) dists.push_back(dist_json(d, s.types));
      doc["dists"] = dists;
      break;
    }
    case Scenario::random_order: {
      json vecs = json::array(), probs = json::array();
      for (const auto& v : s.vectors) {
        json arr = json::array();
        for (int t : v) arr.push_back(type_json(s.types[t]));
        vecs.push_back(arr);
      }
      for (const auto& q : s.vector_probs) probs.push_back(rat_json(q));
      doc["vectors"] = vecs;
      doc["vector_probs"] = probs;
      break;
    }
  }
  if (s.observed != s.n) doc["observed"] = s.observed;
  return doc;
}

Rational rho_E(const SymmetricInstance& inst) {
  Rational e;
  switch (inst.scenario) {
    case Scenario::iid:
      for (const auto& t : inst.palette) e += t.prob * inst.types[t.type].rho;
      return e;
    case Scenario::prophet_secretary:
      for (const auto& d : inst.dists) {
        for (const auto& t : d) e += t.prob * inst.types[t.type].rho;
      }
      return e / Rational(inst.n);
    case Scenario::random_order:
      for (std::size_t j = 0; j < inst.vectors.size(); ++j) {
        Rational sum;
        for (int t : inst.vectors[j]) sum += inst.types[t].rho;
        e += inst.vector_probs[j] * sum;
      }
      return e / Rational(inst.n);
  }
  return e;
}

Rational rho_E(const IndependentInstance& inst) {
  return expected_rho(inst, inst.designated);
}

Rational rho_E(const Instance& inst) {
  return std::visit([](const auto& i) { return rho_E(i); }, inst);
}

SymmetricInstance truncate(const SymmetricInstance& inst, int k) {
  if (k < 1 || k > inst.num_actions()) {
    throw ValidationError("truncate: k must lie in [1, " +
                          std::to_string(inst.num_actions()) + "]");
  }
  SymmetricInstance out = inst;
  if (inst.scenario == Scenario::iid) {
    out.n = k;
    out.observed = k;
  } else {
    out.observed = k;
  }
  return out;
}

const std::vector<ActionType>& types_of(const Instance& inst) {
  return std::visit(
      [](const auto& i) -> const std::vector<ActionType>& { return i.types; },
      inst);
}

// --- sampling ---------------------------------------------------------------

int StateSampler::Cumulative::draw(CounterRng& rng) const {
  const double u = rng.uniform() * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cum.begin());
  // upper_bound never lands on a zero-probability entry.
  if (idx >= cum.size()) idx = cum.size() - 1;
  return type[idx];
}

namespace {

template <typename Entries>
auto make_cumulative(const Entries& d) {
  std::vector<double> cum;
  std::vector<int> type;
  double acc = 0;
  for (const auto& e : d) {
    acc += e.prob.to_double();
    cum.push_back(acc);
    type.push_back(e.type);
  }
  return std::pair{cum, type};
}

template <typename T>
void shuffle(std::vector<T>& v, CounterRng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

}  // namespace

StateSampler::StateSampler(const Instance& inst) {
  auto add = [this](const Distribution& d) {
    auto [cum, type] = make_cumulative(d);
    tables_.push_back(Cumulative{std::move(cum), std::move(type)});
  };
  if (const auto* ind = std::get_if<IndependentInstance>(&inst)) {
    kind_ = Kind::independent;
    n_ = ind->num_actions();
    for (const auto& a : ind->actions) add(a);
    return;
  }
  const auto& s = std::get<SymmetricInstance>(inst);
  n_ = s.n;
  switch (s.scenario) {
    case Scenario::iid:
      kind_ = Kind::iid;
      add(s.palette);
      break;
    case Scenario::prophet_secretary:
      kind_ = Kind::prophet_secretary;
      for (const auto& d : s.dists) add(d);
      break;
    case Scenario::random_order: {
      kind_ = Kind::random_order;
      Distribution picks;
      for (std::size_t j = 0; j < s.vector_probs.size(); ++j) {
        picks.push_back({static_cast<int>(j), s.vector_probs[j]});
      }
      auto [cum, type] = make_cumulative(picks);
      vector_pick_ = Cumulative{std::move(cum), std::move(type)};
      vectors_ = s.vectors;
      break;
    }
  }
}

void StateSampler::sample_into(CounterRng& rng, State& out) const {
  out.resize(n_);
  switch (kind_) {
    case Kind::iid:
      for (int i = 0; i < n_; ++i) out[i] = tables_[0].draw(rng);
      return;
    case Kind::independent:
      for (int i = 0; i < n_; ++i) out[i] = tables_[i].draw(rng);
      return;
    case Kind::prophet_secretary:
      for (int i = 0; i < n_; ++i) out[i] = tables_[i].draw(rng);
      shuffle(out, rng);
      return;
    case Kind::random_order:
      out = vectors_[vector_pick_.draw(rng)];
      shuffle(out, rng);
      return;
  }
}

State StateSampler::sample(CounterRng& rng) const {
  State s;
  sample_into(rng, s);
  return s;
}

State sample_state(const Instance& inst, CounterRng& rng) {
  return StateSampler(inst).sample(rng);
}

// --- enumeration ------------------------------------------------------------

double state_count(const Instance& inst) {
  if (const auto* ind = std::get_if<IndependentInstance>(&inst)) {
    double c = 1;
    for (const auto& a : ind->actions) c *= static_cast<double>(a.size());
    return c;
  }
  const auto& s = std::get<SymmetricInstance>(inst);
  double perms = 1;
  for (int i = 2; i <= s.n; ++i) perms *= i;
  switch (s.scenario) {
    case Scenario::iid: {
      double c = 1;
      for (int i = 0; i < s.n; ++i) c *= static_cast<double>(s.palette.size());
      return c;
    }
    case Scenario::prophet_secretary: {
      double c = perms;
      for (const auto& d : s.dists) c *= static_cast<double>(d.size());
      return c;
    }
    case Scenario::random_order:
      return perms * static_cast<double>(s.vectors.size());
  }
  return 0;
}

namespace {

// Cartesian product of the given distributions, in slot order.
void product(const std::vector<const Distribution*>& dists,
             std::vector<WeightedState>& out) {
  const std::size_t n = dists.size();
  std::vector<std::size_t> idx(n, 0);
  std::vector<Rational> prefix(n + 1);
  prefix[0] = Rational(1);
  State st(n);
  std::size_t level = 0;
  // Iterative odometer with prefix products.
  while (true) {
    while (level < n) {
      const auto& e = (*dists[level])[idx[level]];
      st[level] = e.type;
      prefix[level + 1] = prefix[level] * e.prob;
      ++level;
    }
    out.push_back({st, prefix[n]});
    // advance
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < dists[pos]->size()) break;
      idx[pos] = 0;
      if (pos == 0) return;
    }
    if (n == 0) return;
    level = pos;
  }
}

}  // namespace

std::vector<WeightedState> enumerate_states(const Instance& inst,
                                            double bound) {
  const double count = state_count(inst);
  if (count > bound) {
    throw ValidationError("state space of " + std::to_string(count) +
                          " outcomes exceeds the bound " +
                          std::to_string(bound));
  }
  std::vector<WeightedState> out;
  out.reserve(static_cast<std::size_t>(count));
  if (const auto* ind = std::get_if<IndependentInstance>(&inst)) {
    std::vector<const Distribution*> ds;
    for (const auto& a : ind->actions) ds.push_back(&a);
    product(ds, out);
    return out;
  }
  const auto& s = std::get<SymmetricInstance>(inst);
  if (s.scenario == Scenario::iid) {
    std::vector<const Distribution*> ds(s.n, &s.palette);
    product(ds, out);
    return out;
  }
  const Rational inv_perms = Rational(1) / factorial(s.n);
  std::vector<int> perm(s.n);
  if (s.scenario == Scenario::prophet_secretary) {
    std::vector<WeightedState> draws;
    std::vector<const Distribution*> ds;
    for (const auto& d : s.dists) ds.push_back(&d);
    product(ds, draws);
    for (auto& d : draws) d.prob *= inv_perms;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (const auto& d : draws) {
        State st(s.n);
        for (int slot = 0; slot < s.n; ++slot) st[slot] = d.state[perm[slot]];
        out.push_back({std::move(st), d.prob});
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }
  for (std::size_t j = 0; j < s.vectors.size(); ++j) {
    const Rational p = s.vector_probs[j] * inv_perms;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      State st(s.n);
      for (int slot = 0; slot < s.n; ++slot) st[slot] = s.vectors[j][perm[slot]];
      out.push_back({std::move(st), p});
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

}  // namespace persuasion
