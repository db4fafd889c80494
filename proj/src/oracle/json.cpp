#include "rewardkit/oracle/json.hpp"

namespace rewardkit {

Json to_json(const RewardSpec& spec) {
  Json ts = Json::array();
  for (const auto& [t, e] : spec.entries())
    ts.push_back({{"transition", to_json(t)},
                  {"name", spec.alphabet().name(t)},
                  {"r", e.reward},
                  {"gamma", e.discount},
                  {"identifiable", e.identifiable}});
  Json j = {{"alphabet", to_json(spec.alphabet())}, {"relaxed", spec.relaxed()}, {"transitions", ts}};
  j["scale"] = spec.scale ? Json(*spec.scale) : Json(nullptr);
  return j;
}

RewardSpec reward_spec_from_json(const Json& j) {
  Alphabet alphabet = alphabet_from_json(j.at("alphabet"));
  std::map<Transition, RewardEntry> entries;
  for (const auto& e : j.at("transitions")) {
    Transition t = e.contains("transition") ? transition_from_json(e.at("transition"))
                                            : alphabet.parse_name(e.at("name").get<std::string>());
    entries[t] = {e.at("r").get<double>(), e.value("gamma", 1.0), e.value("identifiable", true)};
  }
  RewardSpec spec(std::move(alphabet), std::move(entries), j.value("relaxed", false));
  if (j.contains("scale") && !j.at("scale").is_null()) spec.scale = j.at("scale").get<double>();
  return spec;
}

Json to_json(const UtilityOracleConfig& config, const Alphabet& alphabet) {
  Json j;
  if (const auto* m = std::get_if<MarkovKind>(&config.kind)) {
    j = {{"kind", "markov"}, {"spec", to_json(m->spec)}};
  } else if (const auto* h = std::get_if<HistoryUtilityKind>(&config.kind)) {
    Json us = Json::array();
    for (const auto& [hist, u] : h->utilities) us.push_back({{"history", to_json(hist)}, {"u", u}});
    j = {{"kind", "history-utility"}, {"alphabet", to_json(alphabet)}, {"utilities", us}};
  } else if (const auto* c = std::get_if<CmdpKind>(&config.kind)) {
    Json os = Json::array();
    for (const auto& [hist, o] : c->outcomes)
      os.push_back({{"history", to_json(hist)}, {"r1", o.base}, {"r2", o.constraint}});
    j = {{"kind", "cmdp"}, {"alphabet", to_json(alphabet)}, {"outcomes", os}, {"threshold", c->threshold}};
  } else if (const auto* r = std::get_if<RiskKind>(&config.kind)) {
    Json rs = Json::array();
    for (const auto& [t, v] : r->rewards) rs.push_back({{"transition", to_json(t)}, {"r", v}});
    j = {{"kind", "risk"}, {"alphabet", to_json(alphabet)}, {"rewards", rs}, {"lambda", r->lambda}};
  }
  j["epsilon_u"] = config.epsilon_u;
  return j;
}

Json table_oracle_json(const Alphabet& alphabet, const std::vector<PreferenceEntry>& entries) {
  Json es = Json::array();
  for (const auto& e : entries)
    es.push_back({{"lhs", to_json(e.lhs)}, {"rhs", to_json(e.rhs)}, {"verdict", std::string(to_string(e.verdict))}});
  return {{"kind", "preference-table"}, {"alphabet", to_json(alphabet)}, {"entries", es}};
}

std::unique_ptr<PreferenceOracle> oracle_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const double eps = j.value("epsilon_u", kDefaultIndifferenceTolerance);
  if (kind == "markov") return UtilityOracle::markov(reward_spec_from_json(j.at("spec")), eps);
  if (kind == "preference-table") {
    std::vector<PreferenceEntry> entries;
    for (const auto& e : j.at("entries"))
      entries.push_back({lottery_from_json(e.at("lhs")), lottery_from_json(e.at("rhs")),
                         parse_verdict(e.at("verdict").get<std::string>())});
    return std::make_unique<TableOracle>(alphabet_from_json(j.at("alphabet")), entries);
  }
  Alphabet alphabet = alphabet_from_json(j.at("alphabet"));
  UtilityOracleConfig config;
  config.epsilon_u = eps;
  if (kind == "history-utility") {
    HistoryUtilityKind k;
    for (const auto& e : j.at("utilities")) k.utilities[history_from_json(e.at("history"))] = e.at("u").get<double>();
    config.kind = std::move(k);
  } else if (kind == "cmdp") {
    CmdpKind k;
    k.threshold = j.value("threshold", 0.0);
    for (const auto& e : j.at("outcomes"))
      k.outcomes[history_from_json(e.at("history"))] = {e.at("r1").get<double>(), e.at("r2").get<double>()};
    config.kind = std::move(k);
  } else if (kind == "risk") {
    RiskKind k;
    k.lambda = j.value("lambda", 0.0);
    for (const auto& e : j.at("rewards")) k.rewards[transition_from_json(e.at("transition"))] = e.at("r").get<double>();
    config.kind = std::move(k);
  } else {
    throw std::invalid_argument("unknown oracle kind '" + kind + "'");
  }
  return std::make_unique<UtilityOracle>(std::move(alphabet), std::move(config));
}

}  // namespace rewardkit
