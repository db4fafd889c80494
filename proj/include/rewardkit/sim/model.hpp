#pragma once

// Environments and policies over an observation/action alphabet.
//
// One step from latent state s after history h: o ~ observe(s, h),
// a ~ act(h, o, s), then s' ~ next(s, o, a). The history grows by (o, a).
// Scripted kinds keep a single dummy latent state and read the history.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rewardkit/lottery/json.hpp"
#include "rewardkit/lottery/lottery.hpp"

namespace rewardkit::sim {

using StateId = std::uint32_t;
template <class T>
using Dist = std::vector<std::pair<T, Rational>>;

/// Throws std::invalid_argument unless weights are non-negative and sum to exactly 1.
template <class T>
void require_distribution(const Dist<T>& d, const std::string& what);

class Environment {
 public:
  explicit Environment(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  virtual ~Environment() = default;

  const Alphabet& alphabet() const { return alphabet_; }
  virtual std::string kind() const = 0;
  virtual Dist<StateId> initial() const = 0;
  virtual Dist<SymbolId> observe(StateId s, const History& h) const = 0;
  virtual Dist<StateId> next(StateId s, SymbolId o, SymbolId a) const = 0;
  virtual Json to_json() const = 0;

 private:
  Alphabet alphabet_;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string kind() const = 0;
  virtual Dist<SymbolId> act(const History& h, SymbolId o, StateId s) const = 0;
  virtual Json to_json() const = 0;
};

/// Finite latent states, each emitting one fixed observation.
class TabularEnv final : public Environment {
 public:
  struct Spec {
    std::vector<std::string> observations;
    std::vector<std::string> actions;
    std::vector<std::string> states;
    std::vector<SymbolId> observation_of;            // per state
    Dist<StateId> initial;
    std::vector<std::vector<Dist<StateId>>> transition;  // [state][action]
  };

  explicit TabularEnv(Spec spec);

  std::string kind() const override { return "tabular"; }
  Dist<StateId> initial() const override { return spec_.initial; }
  Dist<SymbolId> observe(StateId s, const History&) const override { return {{spec_.observation_of.at(s), 1}}; }
  Dist<StateId> next(StateId s, SymbolId, SymbolId a) const override { return spec_.transition.at(s).at(a); }
  Json to_json() const override;

  const Spec& spec() const { return spec_; }
  std::size_t state_count() const { return spec_.states.size(); }
  StateId state(const std::string& name) const;

 private:
  Spec spec_;
};

/// Markov policy keyed by latent state or by current observation.
class TabularPolicy final : public Policy {
 public:
  enum class Key { State, Observation };

  TabularPolicy(Key key, std::vector<Dist<SymbolId>> table, std::vector<std::string> action_names = {},
                std::vector<std::string> key_names = {});

  /// Same action everywhere.
  static std::unique_ptr<TabularPolicy> constant(Key key, std::size_t keys, SymbolId action);

  std::string kind() const override { return "tabular"; }
  Dist<SymbolId> act(const History&, SymbolId o, StateId s) const override;
  Json to_json() const override;

  Key key() const { return key_; }
  const std::vector<Dist<SymbolId>>& table() const { return table_; }

 private:
  Key key_;
  std::vector<Dist<SymbolId>> table_;
  std::vector<std::string> action_names_;
  std::vector<std::string> key_names_;
};

/// Observation distribution as an arbitrary function of the history so far.
class ScriptedEnv final : public Environment {
 public:
  using Fn = std::function<Dist<SymbolId>(const History&)>;
  ScriptedEnv(std::string name, Alphabet alphabet, Fn fn);

  std::string kind() const override { return "scripted"; }
  Dist<StateId> initial() const override { return {{0, 1}}; }
  Dist<SymbolId> observe(StateId, const History& h) const override;
  Dist<StateId> next(StateId, SymbolId, SymbolId) const override { return {{0, 1}}; }
  Json to_json() const override { return {{"kind", "scripted"}, {"name", name_}}; }

 private:
  std::string name_;
  Fn fn_;
};

class ScriptedPolicy final : public Policy {
 public:
  using Fn = std::function<Dist<SymbolId>(const History&, SymbolId)>;
  ScriptedPolicy(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  std::string kind() const override { return "scripted"; }
  Dist<SymbolId> act(const History& h, SymbolId o, StateId) const override;
  Json to_json() const override { return {{"kind", "scripted"}, {"name", name_}}; }

 private:
  std::string name_;
  Fn fn_;
};

/// Named scripted kinds. Only the built-in gallery registers entries.
class ScriptRegistry {
 public:
  using EnvFactory = std::function<std::unique_ptr<Environment>()>;
  using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

  static ScriptRegistry& instance();
  void add_env(const std::string& name, EnvFactory f);
  void add_policy(const std::string& name, PolicyFactory f);
  std::unique_ptr<Environment> env(const std::string& name) const;
  std::unique_ptr<Policy> policy(const std::string& name) const;
  std::vector<std::string> env_names() const;
  std::vector<std::string> policy_names() const;

 private:
  std::map<std::string, EnvFactory> envs_;
  std::map<std::string, PolicyFactory> policies_;
};

// JSON files:
//   tabular env     {"kind": "tabular", "observations": [..], "actions": [..], "states": [..],
//                    "observation_of": {state: obs}, "initial": {state: "p"},
//                    "transitions": {state: {action: {state: "p"}}}}
//   tabular policy  {"kind": "tabular", "key": "state" | "observation", "actions": [..],
//                    "keys": [..], "table": {key: {action: "p"}}}
//   scripted        {"kind": "scripted", "name": "..."}
std::unique_ptr<Environment> env_from_json(const Json& j);
/// Policy names resolve against the env's alphabet and (for state keys) its states.
std::unique_ptr<Policy> policy_from_json(const Json& j, const Environment& env);

}  // namespace rewardkit::sim
