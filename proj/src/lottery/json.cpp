#include "rewardkit/lottery/json.hpp"

#include <stdexcept>

namespace rewardkit {

Json to_json(const Transition& t) {
  Json j = Json::array();
  j.push_back(t.observation);
  if (t.action == kNoAction)
    j.push_back(nullptr);
  else
    j.push_back(t.action);
  return j;
}

Transition transition_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("transition must be [observation, action]");
  Transition t;
  t.observation = j[0].get<SymbolId>();
  t.action = j[1].is_null() ? kNoAction : j[1].get<SymbolId>();
  return t;
}

Json to_json(const History& h) {
  Json j = Json::array();
  for (const auto& t : h.steps()) j.push_back(to_json(t));
  return j;
}

History history_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("history must be an array of transitions");
  std::vector<Transition> ts;
  for (const auto& e : j) ts.push_back(transition_from_json(e));
  return History(std::move(ts));
}

Json to_json(const Lottery& l) {
  Json support = Json::array();
  for (const auto& [h, w] : l.support()) support.push_back({{"history", to_json(h)}, {"weight", w.str()}});
  return {{"support", support}};
}

Lottery lottery_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("support")) throw std::invalid_argument("lottery must be {\"support\": [...]}");
  std::vector<std::pair<History, Rational>> ws;
  for (const auto& e : j.at("support"))
    ws.emplace_back(history_from_json(e.at("history")), Rational::parse(e.at("weight").get<std::string>()));
  return Lottery::from_weights(ws);
}

Json to_json(const Alphabet& a) {
  Json ts = Json::array();
  for (const auto& t : a.transitions()) ts.push_back(to_json(t));
  return {{"observations", a.observations()}, {"actions", a.actions()}, {"transitions", ts}};
}

Alphabet alphabet_from_json(const Json& j) {
  auto obs = j.at("observations").get<std::vector<std::string>>();
  auto acts = j.value("actions", std::vector<std::string>{});
  if (!j.contains("transitions")) {
    if (acts.empty()) return Alphabet::designer(std::move(obs));
    return Alphabet(std::move(obs), std::move(acts));
  }
  std::vector<Transition> ts;
  for (const auto& e : j.at("transitions")) ts.push_back(transition_from_json(e));
  return Alphabet(std::move(obs), std::move(acts), std::move(ts));
}

}  // namespace rewardkit
