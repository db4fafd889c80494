#pragma once

// Tabular environments, policies and specs shared by the simulator tests and
// the acceptance binary.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rewardkit/oracle/reward_spec.hpp"
#include "rewardkit/sim/model.hpp"

namespace rewardkit::testing {

using sim::Dist;
using sim::StateId;
using sim::TabularEnv;
using sim::TabularPolicy;

/// One state, one observation, one action.
inline std::unique_ptr<TabularEnv> trivial_env() {
  TabularEnv::Spec s;
  s.observations = {"o"};
  s.actions = {"a"};
  s.states = {"s"};
  s.observation_of = {0};
  s.initial = {{0, 1}};
  s.transition = {{{{0, 1}}}};
  return std::make_unique<TabularEnv>(std::move(s));
}

/// Two states emitting heads/tails, next state a fair coin regardless of action.
inline std::unique_ptr<TabularEnv> coin_env() {
  TabularEnv::Spec s;
  s.observations = {"heads", "tails"};
  s.actions = {"a"};
  s.states = {"h", "t"};
  s.observation_of = {0, 1};
  const Dist<StateId> fair{{0, Rational(1, 2)}, {1, Rational(1, 2)}};
  s.initial = fair;
  s.transition = {{fair}, {fair}};
  return std::make_unique<TabularEnv>(std::move(s));
}

/// States hi/lo; "stay" keeps the state, "toggle" switches. Starts in hi.
inline std::unique_ptr<TabularEnv> toggle_env() {
  TabularEnv::Spec s;
  s.observations = {"hi", "lo"};
  s.actions = {"stay", "toggle"};
  s.states = {"hi", "lo"};
  s.observation_of = {0, 1};
  s.initial = {{0, 1}};
  s.transition = {{{{0, 1}}, {{1, 1}}}, {{{1, 1}}, {{0, 1}}}};
  return std::make_unique<TabularEnv>(std::move(s));
}

/// r = 1 on hi, 0 on lo, gamma = 1: stay earns 1,1,1,... and toggle 1,0,1,0,...
inline RewardSpec toggle_spec(double discount = 1.0) {
  auto env = toggle_env();
  std::map<Transition, RewardEntry> e;
  for (const auto& t : env->alphabet().transitions()) e[t] = {t.observation == 0 ? 1.0 : 0.0, discount, true};
  return RewardSpec(env->alphabet(), e);
}

/// Equal averages, values crossing forever: stay earns 1,1,1,... and toggle
/// 2,0,2,0,..., so stay trails at odd n and ties at even n.
inline RewardSpec oscillating_spec() {
  auto env = toggle_env();
  std::map<Transition, RewardEntry> e;
  for (const auto& t : env->alphabet().transitions()) {
    const bool hi = t.observation == 0, stay = t.action == 0;
    e[t] = {hi ? (stay ? 1.0 : 2.0) : 0.0, 1.0, true};
  }
  return RewardSpec(env->alphabet(), e);
}

inline std::unique_ptr<TabularPolicy> constant_policy(const TabularEnv& env, SymbolId action) {
  return TabularPolicy::constant(TabularPolicy::Key::State, env.state_count(), action);
}

/// Random env with `states` states, `obs` observations, `acts` actions; weights on a 1/2 or 1/4 grid.
inline std::unique_ptr<TabularEnv> random_env(std::mt19937_64& rng, std::size_t states, std::size_t obs,
                                              std::size_t acts) {
  auto dist = [&](std::size_t n) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    Dist<StateId> d;
    std::map<StateId, Rational> acc;
    for (int k = 0; k < 4; ++k) acc[static_cast<StateId>(pick(rng))] += Rational(1, 4);
    for (const auto& [s, w] : acc) d.emplace_back(s, w);
    return d;
  };
  TabularEnv::Spec s;
  for (std::size_t i = 0; i < obs; ++i) s.observations.push_back("o" + std::to_string(i));
  for (std::size_t i = 0; i < acts; ++i) s.actions.push_back("a" + std::to_string(i));
  std::uniform_int_distribution<SymbolId> po(0, static_cast<SymbolId>(obs - 1));
  for (std::size_t i = 0; i < states; ++i) {
    s.states.push_back("s" + std::to_string(i));
    s.observation_of.push_back(po(rng));
    std::vector<Dist<StateId>> row;
    for (std::size_t a = 0; a < acts; ++a) row.push_back(dist(states));
    s.transition.push_back(row);
  }
  s.initial = dist(states);
  return std::make_unique<TabularEnv>(std::move(s));
}

inline std::unique_ptr<TabularPolicy> random_policy(std::mt19937_64& rng, const TabularEnv& env) {
  const std::size_t acts = env.alphabet().actions().size();
  std::uniform_int_distribution<SymbolId> pick(0, static_cast<SymbolId>(acts - 1));
  std::vector<Dist<SymbolId>> table;
  for (std::size_t s = 0; s < env.state_count(); ++s) {
    std::map<SymbolId, Rational> acc;
    acc[pick(rng)] += Rational(1, 2);
    acc[pick(rng)] += Rational(1, 2);
    Dist<SymbolId> d(acc.begin(), acc.end());
    table.push_back(d);
  }
  return std::make_unique<TabularPolicy>(TabularPolicy::Key::State, std::move(table));
}

inline RewardSpec random_env_spec(std::mt19937_64& rng, const Alphabet& alphabet) {
  std::uniform_real_distribution<double> r(-2.0, 2.0), g(0.1, 1.0);
  std::map<Transition, RewardEntry> e;
  for (const auto& t : alphabet.transitions()) {
    const double rv = r(rng);
    const double gv = g(rng);
    e[t] = {rv, gv, true};
  }
  return RewardSpec(alphabet, e);
}

}  // namespace rewardkit::testing
