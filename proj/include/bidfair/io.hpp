#pragma once

// JSON formats for instances, scenarios, transcripts and reports. Requires nlohmann/json.

#include "bidfair/analysis.hpp"
#include "bidfair/game.hpp"
#include "bidfair/instance.hpp"
#include "bidfair/scenario.hpp"
#include "bidfair/valuation.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bidfair::io {

using nlohmann::json;

inline constexpr int format_version = 1;

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

inline json to_json(const Rational& r) { return format_rational(r); }

inline Rational rational_from(const json& j, const char* what) {
  if (!j.is_string()) throw FormatError(std::string(what) + ": expected a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline void check_header(const json& j, const std::string& format) {
  if (!j.is_object()) throw FormatError("document is not an object");
  if (j.value("format", std::string()) != format)
    throw FormatError("expected format '" + format + "'");
  if (j.value("version", 0) != format_version) throw FormatError("unsupported version");
}

// ---------------------------------------------------------------- items and sets

struct ItemNames {
  const std::vector<std::string>& names;

  std::string name(ItemId e) const { return names.at(e); }

  ItemId index(const json& j) const {
    if (!j.is_string()) throw FormatError("item reference must be a string");
    const auto s = j.get<std::string>();
    for (ItemId e = 0; e < names.size(); ++e)
      if (names[e] == s) return e;
    throw FormatError("unknown item '" + s + "'");
  }

  json list(const std::vector<ItemId>& items) const {
    json out = json::array();
    for (ItemId e : items) out.push_back(name(e));
    return out;
  }
  json list(const ItemSet& s) const { return list(s.items()); }

  std::vector<ItemId> ids(const json& j) const {
    if (!j.is_array()) throw FormatError("expected a list of items");
    std::vector<ItemId> out;
    for (const auto& x : j) out.push_back(index(x));
    return out;
  }
  ItemSet set(const json& j) const {
    ItemSet s(names.size());
    for (ItemId e : ids(j)) s.insert(e);
    return s;
  }

  json value_map(const std::vector<Rational>& values) const {
    json out = json::object();
    for (ItemId e = 0; e < values.size(); ++e)
      if (values[e] != 0) out[name(e)] = to_json(values[e]);
    return out;
  }
  std::vector<Rational> values(const json& j) const {
    if (!j.is_object()) throw FormatError("expected an item -> value map");
    std::vector<Rational> out(names.size());
    for (const auto& [k, v] : j.items()) out[index(json(k))] = rational_from(v, "item value");
    return out;
  }
};

// ---------------------------------------------------------------- valuations

inline json valuation_to_json(const Valuation& v, const ItemNames& items) {
  json j;
  j["kind"] = v.kind();
  if (const auto* a = dynamic_cast<const AdditiveValuation*>(&v)) {
    j["values"] = items.value_map(a->values());
  } else if (const auto* u = dynamic_cast<const UnitDemandValuation*>(&v)) {
    j["values"] = items.value_map(u->values());
  } else if (const auto* x = dynamic_cast<const XOSValuation*>(&v)) {
    j["clauses"] = json::array();
    for (const auto& c : x->clauses()) j["clauses"].push_back(items.value_map(c));
  } else if (const auto* r = dynamic_cast<const RowSubstitutesValuation*>(&v)) {
    j["rows"] = json::array();
    for (const auto& row : r->rows()) j["rows"].push_back({{"weight", to_json(row.weight)}, {"items", items.list(row.items)}});
  } else if (const auto* c = dynamic_cast<const WeightedCoverageValuation*>(&v)) {
    j["elements"] = json::array();
    for (const auto& w : c->element_weights()) j["elements"].push_back(to_json(w));
    j["covers"] = json::object();
    for (ItemId e = 0; e < c->covers().size(); ++e)
      if (!c->covers()[e].empty()) j["covers"][items.name(e)] = c->covers()[e];
  } else if (const auto* t = dynamic_cast<const TableValuation*>(&v)) {
    j["entries"] = json::array();
    for (const auto& [set, value] : t->entries())
      j["entries"].push_back({{"items", items.list(set)}, {"value", to_json(value)}});
  } else if (const auto* tr = dynamic_cast<const TruncatedValuation*>(&v)) {
    j["cap"] = to_json(tr->cap());
    j["base"] = valuation_to_json(*tr->base(), items);
  } else if (const auto* s = dynamic_cast<const ScaledValuation*>(&v)) {
    j["factor"] = to_json(s->factor());
    j["base"] = valuation_to_json(*s->base(), items);
  } else {
    throw FormatError("valuation kind '" + v.kind() + "' cannot be serialized");
  }
  return j;
}

inline ValuationPtr valuation_from_json(const json& j, const ItemNames& items) {
  const auto kind = field(j, "kind").get<std::string>();
  const std::size_t m = items.names.size();
  try {
    if (kind == "additive") return std::make_shared<AdditiveValuation>(items.values(field(j, "values")));
    if (kind == "unit_demand") return std::make_shared<UnitDemandValuation>(items.values(field(j, "values")));
    if (kind == "xos") {
      std::vector<std::vector<Rational>> clauses;
      for (const auto& c : field(j, "clauses")) clauses.push_back(items.values(c));
      return std::make_shared<XOSValuation>(m, std::move(clauses));
    }
    if (kind == "row_substitutes") {
      std::vector<RowSubstitutesValuation::Row> rows;
      for (const auto& r : field(j, "rows"))
        rows.push_back({rational_from(field(r, "weight"), "row weight"), items.ids(field(r, "items"))});
      return std::make_shared<RowSubstitutesValuation>(m, std::move(rows));
    }
    if (kind == "coverage") {
      std::vector<Rational> weights;
      for (const auto& w : field(j, "elements")) weights.push_back(rational_from(w, "element weight"));
      std::vector<std::vector<std::size_t>> covers(m);
      for (const auto& [name, list] : field(j, "covers").items())
        covers[items.index(json(name))] = list.get<std::vector<std::size_t>>();
      return std::make_shared<WeightedCoverageValuation>(std::move(weights), std::move(covers));
    }
    if (kind == "table") {
      std::vector<std::pair<ItemSet, Rational>> entries;
      for (const auto& e : field(j, "entries"))
        entries.emplace_back(items.set(field(e, "items")), rational_from(field(e, "value"), "table value"));
      return std::make_shared<TableValuation>(m, std::move(entries));
    }
    if (kind == "truncated")
      return std::make_shared<TruncatedValuation>(valuation_from_json(field(j, "base"), items),
                                                  rational_from(field(j, "cap"), "cap"));
    if (kind == "scaled")
      return std::make_shared<ScaledValuation>(valuation_from_json(field(j, "base"), items),
                                               rational_from(field(j, "factor"), "factor"));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("valuation: ") + e.what());
  } catch (const json::exception& e) {
    throw FormatError(std::string("valuation: ") + e.what());
  }
  throw FormatError("unknown valuation kind '" + kind + "'");
}

// ---------------------------------------------------------------- instances

inline json instance_body(const Instance& inst) {
  ItemNames items{inst.item_names()};
  json j;
  j["items"] = inst.item_names();
  if (!(inst.items() == ItemSet::full(inst.ground_size()))) j["available"] = items.list(inst.items());
  j["agents"] = json::array();
  for (const auto& a : inst.agents())
    j["agents"].push_back({{"id", a.id},
                           {"entitlement", to_json(a.entitlement.value())},
                           {"valuation", valuation_to_json(*a.valuation, items)}});
  return j;
}

inline Instance instance_from_body(const json& j) {
  try {
    const auto names = field(j, "items").get<std::vector<std::string>>();
    ItemNames items{names};
    std::vector<Agent> agents;
    for (const auto& a : field(j, "agents"))
      agents.push_back(Agent{field(a, "id").get<std::string>(),
                             Entitlement(rational_from(field(a, "entitlement"), "entitlement")),
                             valuation_from_json(field(a, "valuation"), items)});
    std::optional<ItemSet> available;
    if (j.contains("available")) available = items.set(j.at("available"));
    return Instance(names, std::move(agents), std::move(available));
  } catch (const InstanceError& e) {
    throw FormatError(std::string("instance: ") + e.what());
  } catch (const json::exception& e) {
    throw FormatError(std::string("instance: ") + e.what());
  }
}

// ---------------------------------------------------------------- configs and strategies

inline const char* mode_name(GameMode m) {
  switch (m) {
    case GameMode::standard: return "standard";
    case GameMode::altruistic: return "altruistic";
    case GameMode::multi_pick: return "multi_pick";
  }
  return "standard";
}

inline GameMode mode_from(const std::string& s) {
  if (s == "standard") return GameMode::standard;
  if (s == "altruistic") return GameMode::altruistic;
  if (s == "multi_pick") return GameMode::multi_pick;
  throw FormatError("unknown game mode '" + s + "'");
}

inline json config_to_json(const GameConfig& c, const Instance& inst) {
  json tb;
  switch (c.tie_break.kind) {
    case TieBreakPolicy::Kind::lexicographic:
      tb["kind"] = "lexicographic";
      break;
    case TieBreakPolicy::Kind::scripted: {
      tb["kind"] = "scripted";
      tb["preferences"] = json::array();
      for (const auto& round : c.tie_break.preferences) {
        json ids = json::array();
        for (AgentIndex a : round) ids.push_back(inst.agent(a).id);
        tb["preferences"].push_back(ids);
      }
      break;
    }
    case TieBreakPolicy::Kind::seeded_random:
      tb["kind"] = "random";
      tb["seed"] = c.tie_break.seed;
      break;
    case TieBreakPolicy::Kind::adversarial:
      tb["kind"] = "adversarial";
      tb["against"] = inst.agent(c.tie_break.against).id;
      break;
  }
  json j{{"mode", mode_name(c.mode)}, {"tie_break", tb}};
  if (c.mode == GameMode::altruistic) {
    j["rho"] = to_json(c.rho);
    j["threshold"] = c.threshold == SpendThreshold::strictly_greater ? "greater" : "at_least";
  }
  return j;
}

inline GameConfig config_from_json(const json& j, const Instance& inst) {
  GameConfig c;
  try {
    c.mode = mode_from(j.value("mode", std::string("standard")));
    if (c.mode == GameMode::altruistic) {
      c.rho = rational_from(field(j, "rho"), "rho");
      const auto th = j.value("threshold", std::string("greater"));
      if (th != "greater" && th != "at_least") throw FormatError("unknown threshold '" + th + "'");
      c.threshold = th == "greater" ? SpendThreshold::strictly_greater : SpendThreshold::at_least;
    }
    if (j.contains("tie_break")) {
      const auto& tb = j.at("tie_break");
      const auto kind = field(tb, "kind").get<std::string>();
      if (kind == "lexicographic") {
        c.tie_break = TieBreakPolicy::lexicographic();
      } else if (kind == "scripted") {
        std::vector<std::vector<AgentIndex>> prefs;
        for (const auto& round : field(tb, "preferences")) {
          auto& r = prefs.emplace_back();
          for (const auto& id : round) r.push_back(inst.agent_index(id.get<std::string>()));
        }
        c.tie_break = TieBreakPolicy::scripted(std::move(prefs));
      } else if (kind == "random") {
        c.tie_break = TieBreakPolicy::seeded_random(field(tb, "seed").get<std::uint64_t>());
      } else if (kind == "adversarial") {
        c.tie_break = TieBreakPolicy::adversarial_against(inst.agent_index(field(tb, "against").get<std::string>()));
      } else {
        throw FormatError("unknown tie-break kind '" + kind + "'");
      }
    }
    c.validate();
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  } catch (const InstanceError& e) {
    throw FormatError(std::string("config: ") + e.what());
  } catch (const GameError& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return c;
}

inline const std::map<StrategySpec::Kind, std::string>& strategy_names() {
  using K = StrategySpec::Kind;
  static const std::map<K, std::string> names{
      {K::zero, "zero"},
      {K::proportional_aps, "proportional_aps"},
      {K::altruistic_mms, "altruistic_mms"},
      {K::unit_demand_full_budget, "unit_demand_full_budget"},
      {K::scripted, "scripted"},
      {K::random, "random"},
      {K::fraction, "fraction"},
      {K::shadow, "shadow"},
      {K::xos_type1, "constant"},
      {K::xos_type2, "column_sniper"},
  };
  return names;
}

inline json strategy_to_json(const StrategySpec& s, const Instance& inst) {
  ItemNames items{inst.item_names()};
  using K = StrategySpec::Kind;
  json j{{"kind", strategy_names().at(s.kind)}};
  switch (s.kind) {
    case K::proportional_aps:
      j["rho"] = to_json(s.rho);
      j["share"] = to_json(s.share);
      break;
    case K::altruistic_mms:
      j["share"] = to_json(s.share);
      break;
    case K::scripted: {
      j["bids"] = json::array();
      for (const auto& b : s.bids) j["bids"].push_back(to_json(b));
      j["picks"] = json::array();
      for (const auto& p : s.picks) j["picks"].push_back(items.list(p));
      break;
    }
    case K::random:
      j["seed"] = s.seed;
      j["steps"] = s.steps;
      break;
    case K::fraction:
      j["fraction"] = to_json(s.amount);
      break;
    case K::shadow:
      j["target"] = inst.agent(s.target).id;
      j["premium"] = to_json(s.amount);
      j["inner"] = strategy_to_json(s.inner.at(0), inst);
      break;
    case K::xos_type1:
      j["bid"] = to_json(s.amount);
      break;
    case K::xos_type2: {
      j["target"] = inst.agent(s.target).id;
      j["window"] = s.window;
      j["columns"] = json::array();
      for (const auto& c : s.columns) j["columns"].push_back(items.list(c));
      break;
    }
    case K::zero:
    case K::unit_demand_full_budget:
      break;
  }
  return j;
}

inline StrategySpec strategy_from_json(const json& j, const Instance& inst) {
  ItemNames items{inst.item_names()};
  using K = StrategySpec::Kind;
  StrategySpec s;
  const auto kind = field(j, "kind").get<std::string>();
  bool known = false;
  for (const auto& [k, name] : strategy_names())
    if (name == kind) {
      s.kind = k;
      known = true;
    }
  if (!known) throw FormatError("unknown strategy kind '" + kind + "'");
  try {
    switch (s.kind) {
      case K::proportional_aps:
        s.rho = rational_from(field(j, "rho"), "rho");
        s.share = rational_from(field(j, "share"), "share");
        break;
      case K::altruistic_mms:
        s.share = rational_from(field(j, "share"), "share");
        break;
      case K::scripted:
        for (const auto& b : field(j, "bids")) s.bids.push_back(rational_from(b, "bid"));
        for (const auto& p : field(j, "picks")) s.picks.push_back(items.ids(p));
        break;
      case K::random:
        s.seed = field(j, "seed").get<std::uint64_t>();
        s.steps = j.value("steps", 8U);
        break;
      case K::fraction:
        s.amount = rational_from(field(j, "fraction"), "fraction");
        break;
      case K::shadow:
        s.target = inst.agent_index(field(j, "target").get<std::string>());
        s.amount = rational_from(field(j, "premium"), "premium");
        s.inner.push_back(strategy_from_json(field(j, "inner"), inst));
        break;
      case K::xos_type1:
        s.amount = rational_from(field(j, "bid"), "bid");
        break;
      case K::xos_type2:
        s.target = inst.agent_index(field(j, "target").get<std::string>());
        s.window = field(j, "window").get<std::size_t>();
        for (const auto& c : field(j, "columns")) s.columns.push_back(items.ids(c));
        break;
      case K::zero:
      case K::unit_demand_full_budget:
        break;
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("strategy: ") + e.what());
  } catch (const InstanceError& e) {
    throw FormatError(std::string("strategy: ") + e.what());
  }
  return s;
}

// ---------------------------------------------------------------- scenario documents

/// An instance document, optionally carrying a scripted run.
struct InstanceDocument {
  Instance instance;
  std::optional<ScriptedRun> scenario;
};

inline json instance_document(const Instance& inst) {
  json j = instance_body(inst);
  j["format"] = "bidfair.instance";
  j["version"] = format_version;
  return j;
}

inline json instance_document(const ScriptedRun& run) {
  const Instance& inst = run.instance;
  json j = instance_document(inst);
  json strategies = json::object();
  for (AgentIndex i = 0; i < inst.agent_count(); ++i)
    strategies[inst.agent(i).id] = strategy_to_json(run.strategies[i], inst);
  j["scenario"] = {{"name", run.name},
                   {"p", inst.agent(run.p).id},
                   {"config", config_to_json(run.config, inst)},
                   {"strategies", strategies},
                   {"expected",
                    {{"share_kind", run.share_kind},
                     {"share", to_json(run.share)},
                     {"value", to_json(run.expected_value)},
                     {"value_is_upper_bound", run.value_is_upper_bound}}}};
  return j;
}

inline InstanceDocument read_instance_document(const json& j) {
  check_header(j, "bidfair.instance");
  InstanceDocument doc{instance_from_body(j), std::nullopt};
  if (!j.contains("scenario")) return doc;
  const auto& sc = j.at("scenario");
  const Instance& inst = doc.instance;
  try {
    ScriptedRun run{sc.value("name", std::string("scenario")),
                    inst,
                    inst.agent_index(field(sc, "p").get<std::string>()),
                    config_from_json(field(sc, "config"), inst),
                    std::vector<StrategySpec>(inst.agent_count()),
                    "",
                    0,
                    0,
                    false};
    for (const auto& [id, spec] : field(sc, "strategies").items())
      run.strategies[inst.agent_index(id)] = strategy_from_json(spec, inst);
    const auto& ex = field(sc, "expected");
    run.share_kind = field(ex, "share_kind").get<std::string>();
    run.share = rational_from(field(ex, "share"), "share");
    run.expected_value = rational_from(field(ex, "value"), "value");
    run.value_is_upper_bound = ex.value("value_is_upper_bound", false);
    doc.scenario = std::move(run);
  } catch (const json::exception& e) {
    throw FormatError(std::string("scenario: ") + e.what());
  } catch (const InstanceError& e) {
    throw FormatError(std::string("scenario: ") + e.what());
  }
  return doc;
}

// ---------------------------------------------------------------- transcripts and reports

inline json allocation_to_json(const Allocation& a, const Instance& inst) {
  ItemNames items{inst.item_names()};
  json j = json::object();
  for (AgentIndex i = 0; i < inst.agent_count(); ++i) j[inst.agent(i).id] = items.list(a.bundles[i]);
  return j;
}

inline Allocation allocation_from_json(const json& j, const Instance& inst) {
  ItemNames items{inst.item_names()};
  Allocation a = Allocation::empty(inst);
  for (const auto& [id, list] : j.items()) a.bundles[inst.agent_index(id)] = items.set(list);
  return a;
}

inline json transcript_to_json(const Transcript& t, const Instance& inst) {
  ItemNames items{inst.item_names()};
  json rounds = json::array();
  for (const auto& r : t.rounds) {
    json bids = json::object();
    for (AgentIndex i = 0; i < r.bids.size(); ++i)
      bids[inst.agent(i).id] = r.bids[i] ? to_json(*r.bids[i]) : json(nullptr);
    rounds.push_back({{"round", r.round},
                      {"bids", bids},
                      {"winner", inst.agent(r.winner).id},
                      {"items", items.list(r.items)},
                      {"payment", to_json(r.payment)}});
  }
  json violations = json::array();
  for (const auto& v : t.violations)
    violations.push_back({{"round", v.round}, {"agent", inst.agent(v.agent).id}, {"reason", v.reason}});
  return {{"config", config_to_json(t.config, inst)},
          {"rounds", rounds},
          {"violations", violations},
          {"allocation", allocation_to_json(t.allocation, inst)}};
}

inline Transcript transcript_from_json(const json& j, const Instance& inst) {
  ItemNames items{inst.item_names()};
  Transcript t;
  try {
    t.config = config_from_json(field(j, "config"), inst);
    for (const auto& r : field(j, "rounds")) {
      RoundRecord rec;
      rec.round = field(r, "round").get<std::size_t>();
      rec.bids.resize(inst.agent_count());
      for (const auto& [id, bid] : field(r, "bids").items())
        if (!bid.is_null()) rec.bids[inst.agent_index(id)] = rational_from(bid, "bid");
      rec.winner = inst.agent_index(field(r, "winner").get<std::string>());
      rec.items = items.ids(field(r, "items"));
      rec.payment = rational_from(field(r, "payment"), "payment");
      t.rounds.push_back(std::move(rec));
    }
    for (const auto& v : j.value("violations", json::array()))
      t.violations.push_back({field(v, "round").get<std::size_t>(),
                              inst.agent_index(field(v, "agent").get<std::string>()),
                              field(v, "reason").get<std::string>()});
    t.allocation = allocation_from_json(field(j, "allocation"), inst);
  } catch (const json::exception& e) {
    throw FormatError(std::string("transcript: ") + e.what());
  } catch (const InstanceError& e) {
    throw FormatError(std::string("transcript: ") + e.what());
  }
  return t;
}

inline json guarantee_to_json(const GuaranteeReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json x{{"agent", e.agent},
           {"share", to_json(e.share)},
           {"value", to_json(e.value)},
           {"target", to_json(e.target)},
           {"pass", e.pass}};
    x["ratio"] = e.ratio ? to_json(*e.ratio) : json(nullptr);
    entries.push_back(std::move(x));
  }
  return {{"agents", entries}, {"all_pass", rep.all_pass()}};
}

struct ReportGuaranteeInput {
  std::vector<std::optional<Rational>> shares;
  std::vector<Rational> targets;
};

/// A self-contained run report: re-verifiable from its own contents.
inline json report_document(const Instance& inst, const Transcript& t, const ReportGuaranteeInput& g,
                            const json& extra = json::object()) {
  json j{{"format", "bidfair.report"},
         {"version", format_version},
         {"instance", instance_body(inst)},
         {"transcript", transcript_to_json(t, inst)}};
  json shares = json::object();
  json targets = json::object();
  for (AgentIndex i = 0; i < inst.agent_count(); ++i) {
    if (!g.shares[i]) continue;
    shares[inst.agent(i).id] = to_json(*g.shares[i]);
    targets[inst.agent(i).id] = to_json(g.targets[i]);
  }
  j["shares"] = shares;
  j["targets"] = targets;
  j["guarantee"] = guarantee_to_json(guarantee_report(inst, t.allocation, g.shares, g.targets));
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

struct ReportDocument {
  Instance instance;
  Transcript transcript;
  ReportGuaranteeInput guarantee;
  json recorded_guarantee;
};

inline ReportDocument read_report_document(const json& j) {
  check_header(j, "bidfair.report");
  Instance inst = instance_from_body(field(j, "instance"));
  Transcript t = transcript_from_json(field(j, "transcript"), inst);
  ReportGuaranteeInput g{std::vector<std::optional<Rational>>(inst.agent_count()),
                         std::vector<Rational>(inst.agent_count())};
  // Bound to locals: items() over a temporary dangles.
  const json shares = j.value("shares", json::object());
  const json targets = j.value("targets", json::object());
  for (const auto& [id, v] : shares.items())
    g.shares[inst.agent_index(id)] = rational_from(v, "share");
  for (const auto& [id, v] : targets.items())
    g.targets[inst.agent_index(id)] = rational_from(v, "target");
  return ReportDocument{std::move(inst), std::move(t), std::move(g), j.value("guarantee", json())};
}

}  // namespace bidfair::io
