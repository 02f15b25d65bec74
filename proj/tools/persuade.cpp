// persuade: command-line front end for the persuasion solvers.
//
// Exit codes: 0 ok, 1 invalid input, 2 infeasible or a violated bound,
// 3 refused because the rho_E-optimality precondition is not established.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "persuasion/exact_oracle.hpp"
#include "persuasion/fixtures.hpp"
#include "persuasion/independent_schemes.hpp"
#include "persuasion/model.hpp"
#include "persuasion/parallel.hpp"
#include "persuasion/simulate.hpp"
#include "persuasion/symmetric_schemes.hpp"

using namespace persuasion;

namespace {

struct Refusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string instance;
  int k = 0;
  std::string method = "slope";
  double epsilon = 0.1;
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  std::string out;
  double state_bound = 1e5;
  bool force = false;
  bool quiet = false;  // compare warns once itself
  int threads = 0;
  std::string format = "json";
  std::string methods;
  std::string name;
  int n = 0;
  std::string dir;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int actions_of(const Instance& inst) {
  return std::visit([](const auto& i) { return i.num_actions(); }, inst);
}

bool is_symmetric_method(const std::string& m) {
  return m == "slope" || m == "imitation" || m == "bicriteria";
}

bool is_independent_method(const std::string& m) {
  return m == "greedy" || m == "fptas" || m == "reduce";
}

void check_method(const Instance& inst, const std::string& m) {
  const bool sym = std::holds_alternative<SymmetricInstance>(inst);
  if (m == "exact") return;
  if (!is_symmetric_method(m) && !is_independent_method(m)) {
    throw ValidationError("unknown method '" + m + "'");
  }
  if (sym && !is_symmetric_method(m)) {
    throw ValidationError("method '" + m + "' needs an independent instance");
  }
  if (!sym && !is_independent_method(m)) {
    throw ValidationError("method '" + m + "' needs a symmetric instance");
  }
}

int resolve_k(const Instance& inst, int k) {
  if (k == 0) throw ValidationError("--k is required");
  if (k < 2 || k > actions_of(inst)) {
    throw ValidationError("k must lie in [2, " + std::to_string(actions_of(inst)) + "]");
  }
  return k;
}

struct Solved {
  json doc;
  std::unique_ptr<SchemeExecutor> executor;
  double u_sender = 0;
  bool guaranteed = true;
};

// Exact sender utility by enumeration when the prior is small enough.
void add_exact_utilities(Solved& s, const Instance& inst, const Config& cfg) {
  if (state_count(inst) > cfg.state_bound) return;
  const PersuasivenessReport r = persuasiveness_check(*s.executor, inst, cfg.state_bound);
  s.doc["u_sender"] = round12(r.sender);
  s.doc["u_receiver"] = round12(r.receiver);
  s.u_sender = r.sender;
}

Solved solve(const Instance& inst, int k, const std::string& method, const Config& cfg) {
  check_method(inst, method);
  const int threads = resolve_threads(cfg.threads);
  Solved s;
  if (method == "exact") {
    TabularScheme t = optimal_scheme_bruteforce(inst, k, cfg.state_bound, threads);
    s.doc = to_json(t, inst);
    s.u_sender = t.opt;
    s.executor = std::make_unique<TabularExecutor>(inst, std::move(t));
  } else if (const auto* sym = std::get_if<SymmetricInstance>(&inst)) {
    if (method == "slope") {
      SlopeScheme scheme = slope_algorithm(*sym, k, threads);
      s.doc = to_json(scheme, *sym);
      s.u_sender = scheme.u_sender;
      s.executor = std::make_unique<SlopeExecutor>(*sym, std::move(scheme));
    } else if (method == "imitation") {
      auto ex = std::make_unique<ImitationExecutor>(*sym, k, threads);
      const double n = sym->num_actions();
      s.doc = json{{"method", "imitation"},
                   {"k", k},
                   {"base", to_json(ex->base_scheme(), *sym)},
                   {"u_sender_lb", round12(k / n * ex->base_scheme().u_sender)}};
      s.u_sender = k / n * ex->base_scheme().u_sender;
      s.executor = std::move(ex);
      add_exact_utilities(s, inst, cfg);
    } else {
      CounterRng rng(cfg.seed);
      BicriteriaScheme scheme = bicriteria_scheme(
          *sym, k, cfg.epsilon, static_cast<int>(cfg.samples), rng);
      s.doc = to_json(scheme, *sym);
      s.doc["seed"] = cfg.seed;
      s.u_sender = scheme.empirical_sender;
      s.executor = std::make_unique<BicriteriaExecutor>(std::move(scheme));
      s.guaranteed = false;
      add_exact_utilities(s, inst, cfg);
    }
  } else {
    const auto& ind = std::get<IndependentInstance>(inst);
    const RhoECheck check = check_rhoE_optimality(ind);
    if (!check.holds && !cfg.force) {
      throw Refusal("rho_E-optimality not established (" + check.diagnosis +
                    "); rerun with --force to compute anyway");
    }
    if (!check.holds && !cfg.quiet) std::cerr << "warning: " << check.diagnosis << "\n";
    std::vector<int> S;
    if (method == "greedy") {
      S = actions_greedy(ind, k, threads);
    } else if (method == "fptas") {
      S = fptas_select(ind, k, cfg.epsilon, threads);
    } else {
      S = actions_reduce(ind, k);
    }
    ExPostScheme scheme = compute_signal(ind, S);
    s.doc = to_json(scheme, ind, method);
    s.doc["rho_E_check"] = check.diagnosis;
    if (method == "fptas") s.doc["epsilon"] = cfg.epsilon;
    s.u_sender = scheme.u_sender;
    s.guaranteed = check.holds;
    s.executor = std::make_unique<ExPostExecutor>(ind, std::move(scheme));
  }
  s.doc["rho_E"] = rho_E(inst).str();
  return s;
}

int cmd_solve(const Config& cfg) {
  const Instance inst = load_instance_file(cfg.instance);
  const Solved s = solve(inst, resolve_k(inst, cfg.k), cfg.method, cfg);
  emit(dump(s.doc), cfg.out);
  return 0;
}

int cmd_exact(const Config& cfg) {
  const Instance inst = load_instance_file(cfg.instance);
  const int k = cfg.k;
  if (k < 1 || k > actions_of(inst)) {
    throw ValidationError("k must lie in [1, " + std::to_string(actions_of(inst)) + "]");
  }
  const TabularScheme t =
      optimal_scheme_bruteforce(inst, k, cfg.state_bound, resolve_threads(cfg.threads));
  json doc = to_json(t, inst);
  doc["rho_E"] = rho_E(inst).str();
  emit(dump(doc), cfg.out);
  return 0;
}

int cmd_simulate(const Config& cfg) {
  const Instance inst = load_instance_file(cfg.instance);
  const Solved s = solve(inst, resolve_k(inst, cfg.k), cfg.method, cfg);
  const SimReport r =
      estimate(*s.executor, inst, cfg.samples, cfg.seed, resolve_threads(cfg.threads));
  if (cfg.format == "table") {
    emit(to_table(r), cfg.out);
  } else {
    json doc = to_json(r);
    doc["method"] = cfg.method;
    doc["k"] = cfg.k;
    emit(dump(doc), cfg.out);
  }
  return 0;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_compare(const Config& cfg) {
  const Instance inst = load_instance_file(cfg.instance);
  const bool sym = std::holds_alternative<SymmetricInstance>(inst);
  const int n = actions_of(inst);
  std::vector<std::string> methods = split_list(cfg.methods);
  if (methods.empty()) {
    methods = sym ? std::vector<std::string>{"slope", "imitation"}
                  : std::vector<std::string>{"greedy", "fptas", "reduce"};
  }
  for (const auto& m : methods) check_method(inst, m);
  std::vector<int> ks;
  if (cfg.k) {
    ks.push_back(resolve_k(inst, cfg.k));
  } else {
    for (int k = 2; k <= n; ++k) ks.push_back(k);
  }
  const int threads = resolve_threads(cfg.threads);
  const double opt_n = optimal_scheme_bruteforce(inst, n, cfg.state_bound, threads).opt;

  // Multiplicative guarantees only mean something for non-negative sender
  // utilities; otherwise only the exact methods keep a bound.
  bool nonneg = true;
  for (const auto& t : types_of(inst)) nonneg = nonneg && t.xi >= Rational(0);

  Config forced = cfg;
  forced.force = true;
  forced.quiet = true;
  if (const auto* ind = std::get_if<IndependentInstance>(&inst)) {
    const RhoECheck check = check_rhoE_optimality(*ind);
    if (!check.holds) std::cerr << "warning: " << check.diagnosis << "\n";
  }
  json rows = json::array();
  bool all_ok = true;
  for (int k : ks) {
    const double opt_k = optimal_scheme_bruteforce(inst, k, cfg.state_bound, threads).opt;
    const double c = 1 - std::pow(1 - 1.0 / k, k);
    for (const auto& m : methods) {
      const Solved s = solve(inst, k, m, forced);
      // Guarantees are stated against OPT_k or OPT_n; both become a
      // required minimum utility here.
      double required = 0;
      bool has_bound = s.guaranteed;
      if (m == "slope" || m == "exact") {
        required = opt_k;
      } else if (m == "imitation") {
        required = static_cast<double>(k) / n * opt_n;
      } else if (m == "greedy") {
        required = c * (1 - std::pow(1 - 1.0 / k, k - 1)) * opt_k;
      } else if (m == "fptas") {
        required = c * (1 - cfg.epsilon) * (1 - 1.0 / k) * opt_k;
      } else if (m == "reduce") {
        required = c * (1 - 1.0 / k) * static_cast<double>(k) / n * opt_n;
      } else {
        has_bound = false;
      }
      if (!nonneg && m != "slope" && m != "exact") has_bound = false;
      const double bound = opt_k > 1e-12 ? required / opt_k : 0.0;
      const bool ok = !has_bound || s.u_sender >= required - 1e-6;
      all_ok = all_ok && ok;
      rows.push_back({{"method", m},
                      {"k", k},
                      {"u_sender", round12(s.u_sender)},
                      {"opt_k", round12(opt_k)},
                      {"ratio", opt_k > 1e-12 ? json(round12(s.u_sender / opt_k)) : json(nullptr)},
                      {"bound", has_bound ? json(round12(bound)) : json(nullptr)},
                      {"ok", ok}});
    }
  }
  if (cfg.format == "table") {
    std::ostringstream t;
    char line[160];
    std::snprintf(line, sizeof line, "%-11s %3s %16s %16s %14s %14s %4s\n", "method", "k",
                  "u_sender", "opt_k", "ratio", "bound", "ok");
    t << line;
    for (const auto& r : rows) {
      const std::string bound =
          r["bound"].is_null() ? "-" : std::to_string(r["bound"].get<double>());
      char ratio[32] = "-";
      if (!r["ratio"].is_null()) std::snprintf(ratio, sizeof ratio, "%.10g", r["ratio"].get<double>());
      std::snprintf(line, sizeof line, "%-11s %3d %16.12g %16.12g %14s %14s %4s\n",
                    r["method"].get<std::string>().c_str(), r["k"].get<int>(),
                    r["u_sender"].get<double>(), r["opt_k"].get<double>(),
                    ratio, bound.c_str(), r["ok"].get<bool>() ? "yes" : "NO");
      t << line;
    }
    emit(t.str(), cfg.out);
  } else {
    emit(dump(json{{"opt_n", round12(opt_n)}, {"rows", rows}}), cfg.out);
  }
  if (!all_ok) throw BoundViolation("a method fell below its guaranteed bound");
  return 0;
}

int cmd_fixture(const Config& cfg) {
  if (!cfg.dir.empty()) {
    for (const auto& [file, doc] : fixtures::shipped()) {
      emit(dump(doc), cfg.dir + "/" + file);
    }
    return 0;
  }
  json doc;
  if (cfg.name == "intro") {
    doc = fixtures::intro();
  } else if (cfg.name == "sec43") {
    doc = fixtures::sec43();
  } else if (cfg.name == "footnote_iid") {
    doc = fixtures::footnote_iid(cfg.k ? cfg.k : 3);
  } else if (cfg.name == "ratio_iid") {
    doc = fixtures::ratio_iid(cfg.n ? cfg.n : 6);
  } else if (cfg.name == "tight_random_order") {
    doc = fixtures::tight_random_order(cfg.n ? cfg.n : 4);
  } else {
    throw ValidationError("unknown fixture '" + cfg.name + "'");
  }
  emit(dump(doc), cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signaling schemes for Bayesian persuasion with limited signals"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* c, bool needs_instance) {
    auto* opt = c->add_option("--instance", cfg.instance, "instance JSON file");
    if (needs_instance) opt->required()->check(CLI::ExistingFile);
    c->add_option("--k", cfg.k, "number of signals");
    c->add_option("--out", cfg.out, "output file (default stdout)");
    c->add_option("--state-bound", cfg.state_bound, "max enumerated outcomes");
    c->add_option("--threads", cfg.threads, "worker threads (else PERSUADE_THREADS, else 1)");
  };
  auto* solve_cmd = app.add_subcommand("solve", "compute a signaling scheme");
  auto* exact_cmd = app.add_subcommand("exact", "brute-force optimal scheme and OPT_k");
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo report for a scheme");
  auto* cmp_cmd = app.add_subcommand("compare", "realized vs guaranteed ratios");
  auto* fix_cmd = app.add_subcommand("fixture", "write a built-in instance");
  for (auto* c : {solve_cmd, exact_cmd, sim_cmd, cmp_cmd}) common(c, true);
  for (auto* c : {solve_cmd, sim_cmd, cmp_cmd}) {
    c->add_option("--epsilon", cfg.epsilon, "FPTAS / bicriteria accuracy");
    c->add_option("--samples", cfg.samples, "sample count");
    c->add_option("--seed", cfg.seed, "random seed");
    c->add_flag("--force", cfg.force, "run without the rho_E-optimality guarantee");
  }
  for (auto* c : {solve_cmd, sim_cmd}) {
    c->add_option("--method", cfg.method,
                  "slope|imitation|bicriteria|greedy|fptas|reduce|exact");
  }
  for (auto* c : {sim_cmd, cmp_cmd}) {
    c->add_option("--format", cfg.format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));
  }
  cmp_cmd->add_option("--methods", cfg.methods, "comma-separated method list");
  fix_cmd->add_option("--name", cfg.name, "intro|sec43|footnote_iid|ratio_iid|tight_random_order");
  fix_cmd->add_option("--k", cfg.k, "k for footnote_iid");
  fix_cmd->add_option("--n", cfg.n, "n for ratio_iid / tight_random_order");
  fix_cmd->add_option("--out", cfg.out, "output file (default stdout)");
  fix_cmd->add_option("--dir", cfg.dir, "write every shipped fixture into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) return cmd_solve(cfg);
    if (*exact_cmd) return cmd_exact(cfg);
    if (*sim_cmd) return cmd_simulate(cfg);
    if (*cmp_cmd) return cmd_compare(cfg);
    if (*fix_cmd) return cmd_fixture(cfg);
  } catch (const Refusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
