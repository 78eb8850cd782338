// bidfair: command-line front end.
//
// Exit codes: 0 pass, 1 guarantee violation or mismatch, 2 input error, 3 internal contract
// violation.

#include "bidfair/bidfair.hpp"
#include "bidfair/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace bidfair;
using io::json;

enum Exit { ok = 0, violated = 1, input_error = 2, contract_error = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

SizeGuard default_guard() {
  SizeGuard g;
  if (const char* env = std::getenv("BIDFAIR_SIZE_GUARD")) {
    try {
      g.max_items = std::stoul(env);
    } catch (const std::exception&) {
      throw InputError("BIDFAIR_SIZE_GUARD must be a nonnegative integer");
    }
  }
  return g;
}

Rational rational_arg(const std::string& s, const char* what) {
  try {
    return parse_rational(s);
  } catch (const ParseError& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string kind;
  std::size_t k = 1;
  std::size_t n = 0;
  std::size_t m = 6;
  std::size_t universe = 8;
  std::uint64_t seed = 1;
  bool random_entitlements = false;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  json doc;
  try {
    if (a.kind == "altruistic_negative") doc = io::instance_document(gen_altruistic_negative(a.k));
    else if (a.kind == "original_negative") doc = io::instance_document(gen_original_negative(a.k));
    else if (a.kind == "modified_negative") doc = io::instance_document(gen_modified_negative(a.k));
    else if (a.kind == "xos_hard") doc = io::instance_document(gen_xos_hard(a.n == 0 ? 4 * a.k * a.k : a.n, a.k));
    else if (a.kind == "random_submodular")
      doc = io::instance_document(gen_random_submodular(a.seed, a.n == 0 ? 3 : a.n, a.m, a.universe, !a.random_entitlements));
    else throw InputError("unknown generator '" + a.kind + "'");
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  write_json(doc, a.out);
  return ok;
}

// ------------------------------------------------------------------ shares

json partition_json(const std::vector<ItemSet>& p, const Instance& inst) {
  io::ItemNames items{inst.item_names()};
  json out = json::array();
  for (const auto& b : p) out.push_back(items.list(b));
  return out;
}

json witness_json(const FractionalPartition& fp, const Instance& inst) {
  io::ItemNames items{inst.item_names()};
  json out = json::array();
  for (const auto& e : fp.entries) out.push_back({{"bundle", items.list(e.bundle)}, {"weight", io::to_json(e.weight)}});
  return out;
}

int cmd_shares(const std::string& path, const std::vector<std::string>& agents, std::optional<std::size_t> guard_arg,
               const std::string& out) {
  const auto doc = io::read_instance_document(read_json(path));
  const Instance& inst = doc.instance;
  SizeGuard guard = default_guard();
  if (guard_arg) guard.max_items = *guard_arg;
  json result = json::object();
  for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
    const Agent& a = inst.agent(i);
    if (!agents.empty() && std::find(agents.begin(), agents.end(), a.id) == agents.end()) continue;
    const auto mms = mms_exact(*a.valuation, inst.agent_count(), inst.items(), guard);
    const auto aps = aps_exact(*a.valuation, a.entitlement.value(), inst.items(), guard);
    json entry{{"entitlement", io::to_json(a.entitlement.value())},
               {"mms", io::to_json(mms.value)},
               {"mms_partition", partition_json(mms.partition, inst)},
               {"aps", io::to_json(aps.value)},
               {"aps_witness", witness_json(aps.witness, inst)}};
    if (const auto* ud = dynamic_cast<const UnitDemandValuation*>(a.valuation.get())) {
      std::vector<Rational> values;
      inst.items().for_each([&](ItemId e) { values.push_back(ud->values()[e]); });
      entry["aps_unit_demand"] = io::to_json(aps_unit_demand(values, a.entitlement.value()));
    }
    result[a.id] = entry;
  }
  for (const auto& id : agents) inst.agent_index(id);
  write_json({{"format", "bidfair.shares"}, {"version", io::format_version}, {"agents", result}}, out);
  return ok;
}

// ------------------------------------------------------------------ play

struct PlayArgs {
  std::string path;
  std::vector<std::string> strategies;  // id=spec
  std::string fallback = "proportional";
  std::string mode;
  std::string rho;
  std::string threshold;
  std::string tiebreak;
  std::uint64_t seed = 0;
  std::string out;
};

std::map<std::string, std::string> spec_params(const std::string& text) {
  std::map<std::string, std::string> params;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("strategy parameter '" + item + "' lacks '='");
    params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return params;
}

/// "kind[:key=value,...]", where share/rho default to exact values.
StrategySpec parse_strategy(const std::string& text, const Instance& inst, AgentIndex self, const SizeGuard& guard) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const auto params = colon == std::string::npos ? std::map<std::string, std::string>{} : spec_params(text.substr(colon + 1));
  auto get = [&](const char* key) -> std::optional<Rational> {
    if (auto it = params.find(key); it != params.end()) return rational_arg(it->second, key);
    return std::nullopt;
  };
  const Agent& a = inst.agent(self);
  StrategySpec s;
  if (kind == "proportional") {
    s.kind = StrategySpec::Kind::proportional_aps;
    s.rho = get("rho").value_or(ProportionalApsStrategy::default_rho(a.entitlement.value()));
    if (auto share = get("share")) s.share = *share;
    else s.share = aps_exact(*a.valuation, a.entitlement.value(), inst.items(), guard).value;
  } else if (kind == "altruistic") {
    s.kind = StrategySpec::Kind::altruistic_mms;
    if (auto share = get("share")) s.share = *share;
    else s.share = mms_exact(*a.valuation, inst.agent_count(), inst.items(), guard).value;
  } else if (kind == "unit_demand") {
    s.kind = StrategySpec::Kind::unit_demand_full_budget;
  } else if (kind == "zero") {
    s.kind = StrategySpec::Kind::zero;
  } else if (kind == "random") {
    s.kind = StrategySpec::Kind::random;
    if (auto it = params.find("seed"); it != params.end()) s.seed = std::stoull(it->second);
  } else if (kind == "fraction") {
    s.kind = StrategySpec::Kind::fraction;
    s.amount = get("of").value_or(Rational(1, 2));
  } else {
    throw InputError("unknown strategy '" + kind + "'");
  }
  return s;
}

/// Guarantee target for the strategies that carry one.
std::optional<std::pair<Rational, Rational>> strategy_guarantee(const StrategySpec& s) {
  if (s.kind == StrategySpec::Kind::proportional_aps) return std::make_pair(s.share, s.rho);
  if (s.kind == StrategySpec::Kind::altruistic_mms) return std::make_pair(s.share, altruistic_rho());
  return std::nullopt;
}

int cmd_play(const PlayArgs& a) {
  const auto doc = io::read_instance_document(read_json(a.path));
  const Instance& inst = doc.instance;
  const SizeGuard guard = default_guard();
  const bool use_scenario = doc.scenario && a.strategies.empty() && a.mode.empty() && a.tiebreak.empty();

  GameConfig cfg;
  std::vector<StrategySpec> specs(inst.agent_count());
  if (use_scenario) {
    cfg = doc.scenario->config;
    specs = doc.scenario->strategies;
  } else {
    if (!a.mode.empty()) cfg.mode = io::mode_from(a.mode);
    if (cfg.mode == GameMode::altruistic) cfg.rho = a.rho.empty() ? altruistic_rho() : rational_arg(a.rho, "--rho");
    if (a.threshold == "at_least") cfg.threshold = SpendThreshold::at_least;
    else if (!a.threshold.empty() && a.threshold != "greater") throw InputError("--threshold must be greater or at_least");
    if (a.tiebreak.empty() || a.tiebreak == "lexicographic") cfg.tie_break = TieBreakPolicy::lexicographic();
    else if (a.tiebreak == "random") cfg.tie_break = TieBreakPolicy::seeded_random(a.seed);
    else if (a.tiebreak.rfind("adversarial:", 0) == 0)
      cfg.tie_break = TieBreakPolicy::adversarial_against(inst.agent_index(a.tiebreak.substr(12)));
    else throw InputError("unknown --tiebreak '" + a.tiebreak + "'");
    cfg.validate();
    std::vector<bool> assigned(inst.agent_count(), false);
    for (const auto& entry : a.strategies) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos) throw InputError("--strategy expects id=spec");
      const AgentIndex i = inst.agent_index(entry.substr(0, eq));
      specs[i] = parse_strategy(entry.substr(eq + 1), inst, i, guard);
      assigned[i] = true;
    }
    for (AgentIndex i = 0; i < inst.agent_count(); ++i)
      if (!assigned[i]) specs[i] = parse_strategy(a.fallback, inst, i, guard);
  }

  auto strategies = instantiate_all(specs, inst);
  const auto result = run_game(inst, strategies, cfg);

  io::ReportGuaranteeInput g{std::vector<std::optional<Rational>>(inst.agent_count()),
                             std::vector<Rational>(inst.agent_count())};
  json extra = json::object();
  json strat = json::object();
  for (AgentIndex i = 0; i < inst.agent_count(); ++i) strat[inst.agent(i).id] = io::strategy_to_json(specs[i], inst);
  extra["strategies"] = strat;
  bool pass = true;
  if (use_scenario) {
    const auto& sc = *doc.scenario;
    const Rational value = inst.agent(sc.p).valuation->value(result.allocation.bundles[sc.p]);
    const bool matches = sc.value_is_upper_bound ? value <= sc.expected_value : value == sc.expected_value;
    extra["scenario"] = {{"name", sc.name},
                         {"p", inst.agent(sc.p).id},
                         {"value", io::to_json(value)},
                         {"expected_value", io::to_json(sc.expected_value)},
                         {"value_is_upper_bound", sc.value_is_upper_bound},
                         {"share", io::to_json(sc.share)},
                         {"ratio", io::to_json(value / sc.share)},
                         {"matches", matches}};
    pass = matches;
  } else {
    for (AgentIndex i = 0; i < inst.agent_count(); ++i)
      if (auto gt = strategy_guarantee(specs[i])) {
        g.shares[i] = gt->first;
        g.targets[i] = gt->second;
      }
  }
  const json report = io::report_document(inst, result.transcript, g, extra);
  write_json(report, a.out);
  return pass && report["guarantee"]["all_pass"].get<bool>() ? ok : violated;
}

// ------------------------------------------------------------------ alloc

int cmd_alloc(const std::string& path, const std::string& eps_text, const std::string& mode_text,
              const std::string& k_text, const std::string& out) {
  const auto doc = io::read_instance_document(read_json(path));
  const Instance& inst = doc.instance;
  const Rational eps = rational_arg(eps_text, "--epsilon");
  if (eps <= 0 || eps >= 1) throw InputError("--epsilon must lie in (0, 1)");
  if (mode_text != "aps" && mode_text != "mms") throw InputError("--mode must be aps or mms");
  const ShareMode mode = mode_text == "aps" ? ShareMode::aps : ShareMode::mms;
  std::optional<Rational> K;
  if (!k_text.empty()) K = rational_arg(k_text, "--K");

  const auto res = unconditional_allocate(inst, eps, K, mode);
  const SizeGuard guard = default_guard();
  io::ReportGuaranteeInput g{std::vector<std::optional<Rational>>(inst.agent_count()),
                             std::vector<Rational>(inst.agent_count())};
  json extra = json::object();
  if (inst.items().size() <= guard.max_items) {
    for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
      const Agent& a = inst.agent(i);
      g.shares[i] = mode == ShareMode::aps ? aps_exact(*a.valuation, a.entitlement.value(), inst.items(), guard).value
                                           : mms_exact(*a.valuation, inst.agent_count(), inst.items(), guard).value;
      g.targets[i] = (1 - eps) * res.targets[i];
    }
  } else {
    extra["note"] = "instance exceeds the size guard; exact shares not computed";
  }
  json guesses = json::object();
  for (AgentIndex i = 0; i < inst.agent_count(); ++i) guesses[inst.agent(i).id] = io::to_json(res.guesses[i]);
  const Rational k = K ? *K : ratio_bound(inst);
  extra["alloc"] = {{"mode", mode_text},
                    {"epsilon", io::to_json(eps)},
                    {"K", io::to_json(k)},
                    {"calls", res.calls},
                    {"call_bound", iteration_bound(inst.agent_count(), k, eps)},
                    {"guesses", guesses}};
  const json report = io::report_document(inst, res.game.transcript, g, extra);
  write_json(report, out);
  return report["guarantee"]["all_pass"].get<bool>() ? ok : violated;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const std::string& path) {
  const auto doc = io::read_report_document(read_json(path));
  if (auto problem = transcript_problem(doc.transcript, doc.instance, doc.transcript.config)) {
    std::cout << "FAIL transcript: " << *problem << "\n";
    return violated;
  }
  const auto rep = guarantee_report(doc.instance, doc.transcript.allocation, doc.guarantee.shares, doc.guarantee.targets);
  if (!doc.recorded_guarantee.is_null() && io::guarantee_to_json(rep) != doc.recorded_guarantee) {
    std::cout << "FAIL guarantee: recorded report differs from recomputation\n";
    return violated;
  }
  if (!rep.all_pass()) {
    std::cout << "FAIL guarantee: some agent is below target\n";
    return violated;
  }
  std::cout << "PASS " << doc.transcript.rounds.size() << " rounds\n";
  return ok;
}

// ------------------------------------------------------------------ lpcert

int cmd_lpcert(const std::string& z_text, const std::string& n_text, const std::string& out) {
  const Rational z = rational_arg(z_text, "--z");
  std::optional<std::uint64_t> n;
  if (n_text != "inf") {
    try {
      n = std::stoull(n_text);
    } catch (const std::exception&) {
      throw InputError("--n must be a count or 'inf'");
    }
  }
  TheoremSystem sys;
  try {
    sys = build_theorem_system(z, n);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const auto res = check_feasible(sys);
  json rows = json::array();
  for (const auto& c : sys.constraints) {
    json coeffs = json::object();
    for (std::size_t j = 0; j < TheoremSystem::variables; ++j) coeffs[TheoremSystem::names[j]] = io::to_json(c.coeffs[j]);
    rows.push_back({{"coefficients", coeffs}, {"rhs", io::to_json(c.rhs)}, {"relation", c.strict ? "<" : "<="}});
  }
  json j{{"format", "bidfair.lpcert"},
         {"version", io::format_version},
         {"z", io::to_json(z)},
         {"n", n ? json(*n) : json("inf")},
         {"constraints", rows},
         {"status", res.feasible ? "feasible" : "infeasible"}};
  if (res.feasible) {
    json w = json::object();
    for (std::size_t k = 0; k < TheoremSystem::variables; ++k) w[TheoremSystem::names[k]] = io::to_json(res.witness[k]);
    j["witness"] = w;
  } else {
    const auto& c = *res.certificate;
    json mult = json::array();
    for (const auto& y : c.multipliers) mult.push_back(io::to_json(y));
    json comb = json::object();
    for (std::size_t k = 0; k < TheoremSystem::variables; ++k) comb[TheoremSystem::names[k]] = io::to_json(c.combined[k]);
    j["certificate"] = {{"multipliers", mult},
                        {"combined", comb},
                        {"combined_rhs", io::to_json(c.combined_rhs)},
                        {"relation", c.strict ? "<" : "<="},
                        {"valid", certifies_infeasibility(sys, c)}};
  }
  write_json(j, out);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair allocation through the bidding game"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance (with its scripted run for constructed kinds)");
  g->add_option("kind", gen.kind,
                "altruistic_negative | original_negative | modified_negative | xos_hard | random_submodular")
      ->required();
  g->add_option("--k", gen.k, "Construction depth");
  g->add_option("--n", gen.n, "Agents (xos_hard, random_submodular)");
  g->add_option("--m", gen.m, "Items (random_submodular)");
  g->add_option("--universe", gen.universe, "Coverage universe size (random_submodular)");
  g->add_option("--seed", gen.seed, "Seed (random_submodular)");
  g->add_flag("--random-entitlements", gen.random_entitlements, "Unequal entitlements (random_submodular)");
  g->add_option("-o,--output", gen.out, "Output path, default stdout");

  std::string shares_path, shares_out;
  std::vector<std::string> shares_agents;
  std::optional<std::size_t> shares_guard;
  auto* s = app.add_subcommand("shares", "Exact MMS and APS with witnesses");
  s->add_option("instance", shares_path, "Instance file, - for stdin")->required();
  s->add_option("--agent", shares_agents, "Restrict to these agent ids");
  s->add_option("--guard", shares_guard, "Item limit for exhaustive routines");
  s->add_option("-o,--output", shares_out, "Output path, default stdout");

  PlayArgs play;
  auto* p = app.add_subcommand("play", "Run the bidding game and report");
  p->add_option("instance", play.path, "Instance file, - for stdin")->required();
  p->add_option("--strategy", play.strategies,
                "id=kind[:key=value,...]; kinds proportional, altruistic, unit_demand, zero, random, fraction");
  p->add_option("--default", play.fallback, "Strategy for unassigned agents");
  p->add_option("--mode", play.mode, "standard | altruistic | multi_pick");
  p->add_option("--rho", play.rho, "Altruistic spend fraction, default 10/27");
  p->add_option("--threshold", play.threshold, "greater | at_least");
  p->add_option("--tiebreak", play.tiebreak, "lexicographic | random | adversarial:<id>");
  p->add_option("--seed", play.seed, "Seed for random tie-breaking");
  p->add_option("-o,--output", play.out, "Output path, default stdout");

  std::string alloc_path, alloc_eps = "1/10", alloc_mode = "aps", alloc_k, alloc_out;
  auto* a = app.add_subcommand("alloc", "Unconditional allocation by guess refinement");
  a->add_option("instance", alloc_path, "Instance file, - for stdin")->required();
  a->add_option("--epsilon", alloc_eps, "Refinement step in (0, 1)");
  a->add_option("--mode", alloc_mode, "aps | mms");
  a->add_option("--K", alloc_k, "Value ratio bound, computed when omitted");
  a->add_option("-o,--output", alloc_out, "Output path, default stdout");

  std::string verify_path;
  auto* v = app.add_subcommand("verify", "Re-verify a run report");
  v->add_option("report", verify_path, "Report file, - for stdin")->required();

  std::string lp_z = "27/10", lp_n = "inf", lp_out;
  auto* l = app.add_subcommand("lpcert", "Feasibility of the inequality system behind the 10/27 bound");
  l->add_option("--z", lp_z, "Substituted z > 5/2");
  l->add_option("--n", lp_n, "Agent count or inf");
  l->add_option("-o,--output", lp_out, "Output path, default stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : input_error;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*s) return cmd_shares(shares_path, shares_agents, shares_guard, shares_out);
    if (*p) return cmd_play(play);
    if (*a) return cmd_alloc(alloc_path, alloc_eps, alloc_mode, alloc_k, alloc_out);
    if (*v) return cmd_verify(verify_path);
    if (*l) return cmd_lpcert(lp_z, lp_n, lp_out);
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return contract_error;
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const std::invalid_argument*>(&e) == nullptr) {
      std::cerr << "internal error: " << e.what() << "\n";
      return contract_error;
    }
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  }
  return input_error;
}
