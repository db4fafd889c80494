#include "rewardkit/sim/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace rewardkit::sim {

template <class T>
void require_distribution(const Dist<T>& d, const std::string& what) {
  Rational total(0);
  for (const auto& [x, w] : d) {
    if (w.is_negative()) throw std::invalid_argument(what + ": negative probability");
    total += w;
  }
  if (total != Rational(1)) throw std::invalid_argument(what + ": probabilities sum to " + total.str());
}

template void require_distribution(const Dist<StateId>&, const std::string&);

namespace {

std::size_t position(const std::vector<std::string>& names, const std::string& name, const std::string& what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("unknown " + what + " '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

template <class T>
Json dist_json(const Dist<T>& d, const std::vector<std::string>& names) {
  Json j = Json::object();
  for (const auto& [x, w] : d) j[names.at(x)] = w.str();
  return j;
}

template <class T>
Dist<T> dist_from_json(const Json& j, const std::vector<std::string>& names, const std::string& what) {
  Dist<T> d;
  for (const auto& [k, v] : j.items()) {
    Rational w = v.is_string() ? Rational::parse(v.template get<std::string>()) : Rational(v.template get<std::int64_t>());
    d.emplace_back(static_cast<T>(position(names, k, what)), w);
  }
  return d;
}

}  // namespace

TabularEnv::TabularEnv(Spec spec)
    : Environment(Alphabet(spec.observations, spec.actions)), spec_(std::move(spec)) {
  const std::size_t n = spec_.states.size();
  if (n == 0) throw std::invalid_argument("tabular env needs at least one state");
  if (spec_.observation_of.size() != n || spec_.transition.size() != n)
    throw std::invalid_argument("tabular env: per-state tables must cover every state");
  require_distribution(spec_.initial, "initial distribution");
  for (std::size_t s = 0; s < n; ++s) {
    if (spec_.observation_of[s] >= spec_.observations.size())
      throw std::invalid_argument("tabular env: observation out of range");
    if (spec_.transition[s].size() != spec_.actions.size())
      throw std::invalid_argument("tabular env: state '" + spec_.states[s] + "' must list every action");
    for (std::size_t a = 0; a < spec_.actions.size(); ++a) {
      require_distribution(spec_.transition[s][a], "transition " + spec_.states[s] + "/" + spec_.actions[a]);
      for (const auto& [t, w] : spec_.transition[s][a])
        if (t >= n) throw std::invalid_argument("tabular env: next state out of range");
    }
  }
  for (const auto& [s, w] : spec_.initial)
    if (s >= n) throw std::invalid_argument("tabular env: initial state out of range");
}

StateId TabularEnv::state(const std::string& name) const {
  return static_cast<StateId>(position(spec_.states, name, "state"));
}

Json TabularEnv::to_json() const {
  Json obs = Json::object(), tr = Json::object();
  for (std::size_t s = 0; s < spec_.states.size(); ++s) {
    obs[spec_.states[s]] = spec_.observations[spec_.observation_of[s]];
    Json row = Json::object();
    for (std::size_t a = 0; a < spec_.actions.size(); ++a)
      row[spec_.actions[a]] = dist_json(spec_.transition[s][a], spec_.states);
    tr[spec_.states[s]] = row;
  }
  return {{"kind", "tabular"},
          {"observations", spec_.observations},
          {"actions", spec_.actions},
          {"states", spec_.states},
          {"observation_of", obs},
          {"initial", dist_json(spec_.initial, spec_.states)},
          {"transitions", tr}};
}

TabularPolicy::TabularPolicy(Key key, std::vector<Dist<SymbolId>> table, std::vector<std::string> action_names,
                             std::vector<std::string> key_names)
    : key_(key), table_(std::move(table)), action_names_(std::move(action_names)), key_names_(std::move(key_names)) {
  for (std::size_t k = 0; k < table_.size(); ++k) require_distribution(table_[k], "policy row " + std::to_string(k));
}

std::unique_ptr<TabularPolicy> TabularPolicy::constant(Key key, std::size_t keys, SymbolId action) {
  return std::make_unique<TabularPolicy>(key, std::vector<Dist<SymbolId>>(keys, {{action, 1}}));
}

Dist<SymbolId> TabularPolicy::act(const History&, SymbolId o, StateId s) const {
  const std::size_t k = key_ == Key::State ? s : o;
  if (k >= table_.size()) throw std::out_of_range("tabular policy has no row " + std::to_string(k));
  return table_[k];
}

Json TabularPolicy::to_json() const {
  auto name = [](const std::vector<std::string>& names, std::size_t i) {
    return i < names.size() ? names[i] : std::to_string(i);
  };
  Json t = Json::object();
  for (std::size_t k = 0; k < table_.size(); ++k) {
    Json row = Json::object();
    for (const auto& [a, w] : table_[k]) row[name(action_names_, a)] = w.str();
    t[name(key_names_, k)] = row;
  }
  return {{"kind", "tabular"}, {"key", key_ == Key::State ? "state" : "observation"}, {"table", t}};
}

ScriptedEnv::ScriptedEnv(std::string name, Alphabet alphabet, Fn fn)
    : Environment(std::move(alphabet)), name_(std::move(name)), fn_(std::move(fn)) {}

Dist<SymbolId> ScriptedEnv::observe(StateId, const History& h) const {
  auto d = fn_(h);
  require_distribution(d, "scripted env '" + name_ + "'");
  return d;
}

Dist<SymbolId> ScriptedPolicy::act(const History& h, SymbolId o, StateId) const {
  auto d = fn_(h, o);
  require_distribution(d, "scripted policy '" + name_ + "'");
  return d;
}

ScriptRegistry& ScriptRegistry::instance() {
  static ScriptRegistry r;
  return r;
}

void ScriptRegistry::add_env(const std::string& name, EnvFactory f) { envs_[name] = std::move(f); }
void ScriptRegistry::add_policy(const std::string& name, PolicyFactory f) { policies_[name] = std::move(f); }

std::unique_ptr<Environment> ScriptRegistry::env(const std::string& name) const {
  auto it = envs_.find(name);
  if (it == envs_.end()) throw std::invalid_argument("no scripted env named '" + name + "'");
  return it->second();
}

std::unique_ptr<Policy> ScriptRegistry::policy(const std::string& name) const {
  auto it = policies_.find(name);
  if (it == policies_.end()) throw std::invalid_argument("no scripted policy named '" + name + "'");
  return it->second();
}

std::vector<std::string> ScriptRegistry::env_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : envs_) out.push_back(k);
  return out;
}

std::vector<std::string> ScriptRegistry::policy_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : policies_) out.push_back(k);
  return out;
}

std::unique_ptr<Environment> env_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "scripted") return ScriptRegistry::instance().env(j.at("name").get<std::string>());
  if (kind != "tabular") throw std::invalid_argument("unknown env kind '" + kind + "'");
  TabularEnv::Spec s;
  s.observations = j.at("observations").get<std::vector<std::string>>();
  s.actions = j.at("actions").get<std::vector<std::string>>();
  s.states = j.at("states").get<std::vector<std::string>>();
  s.observation_of.assign(s.states.size(), 0);
  s.transition.assign(s.states.size(), std::vector<Dist<StateId>>(s.actions.size()));
  for (std::size_t i = 0; i < s.states.size(); ++i) {
    const auto& st = s.states[i];
    s.observation_of[i] =
        static_cast<SymbolId>(position(s.observations, j.at("observation_of").at(st).get<std::string>(), "observation"));
    const auto& row = j.at("transitions").at(st);
    for (std::size_t a = 0; a < s.actions.size(); ++a)
      s.transition[i][a] = dist_from_json<StateId>(row.at(s.actions[a]), s.states, "state");
  }
  s.initial = dist_from_json<StateId>(j.at("initial"), s.states, "state");
  return std::make_unique<TabularEnv>(std::move(s));
}

std::unique_ptr<Policy> policy_from_json(const Json& j, const Environment& env) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "scripted") return ScriptRegistry::instance().policy(j.at("name").get<std::string>());
  if (kind != "tabular") throw std::invalid_argument("unknown policy kind '" + kind + "'");
  const auto key_text = j.value("key", std::string("state"));
  TabularPolicy::Key key;
  std::vector<std::string> keys;
  if (key_text == "state") {
    auto* tab = dynamic_cast<const TabularEnv*>(&env);
    if (!tab) throw std::invalid_argument("state-keyed policy needs a tabular env");
    key = TabularPolicy::Key::State;
    keys = tab->spec().states;
  } else if (key_text == "observation") {
    key = TabularPolicy::Key::Observation;
    keys = env.alphabet().observations();
  } else {
    throw std::invalid_argument("policy key must be 'state' or 'observation'");
  }
  const auto& actions = env.alphabet().actions();
  std::vector<Dist<SymbolId>> table(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k)
    table[k] = dist_from_json<SymbolId>(j.at("table").at(keys[k]), actions, "action");
  return std::make_unique<TabularPolicy>(key, std::move(table), actions, keys);
}

}  // namespace rewardkit::sim
