#include "rewardkit/sim/rollout.hpp"

#include <cmath>
#include <random>

namespace rewardkit::sim {

RolloutEnumerator::RolloutEnumerator(const Environment& env, const Policy& policy, std::size_t budget)
    : env_(env), policy_(policy), budget_(budget) {
  for (const auto& [s, w] : env_.initial())
    if (!w.is_zero()) branches_[{History{}, s}] += w;
}

std::size_t RolloutEnumerator::step() {
  std::map<std::pair<History, StateId>, Rational> next;
  for (const auto& [key, w] : branches_) {
    const auto& [h, s] = key;
    for (const auto& [o, po] : env_.observe(s, h)) {
      if (po.is_zero()) continue;
      for (const auto& [a, pa] : policy_.act(h, o, s)) {
        if (pa.is_zero()) continue;
        const Transition t{o, a};
        env_.alphabet().require(t);
        const History h2 = h.appended(t);
        const Rational wa = w * po * pa;
        for (const auto& [s2, ps] : env_.next(s, o, a)) {
          if (ps.is_zero()) continue;
          next[{h2, s2}] += wa * ps;
          if (next.size() > budget_)
            throw EnumerationBudgetExceeded("rollout enumeration exceeds " + std::to_string(budget_) +
                                            " branches at n = " + std::to_string(horizon_ + 1) +
                                            "; use the Monte Carlo estimate instead");
        }
      }
    }
  }
  branches_ = std::move(next);
  return ++horizon_;
}

Lottery RolloutEnumerator::distribution() const {
  std::vector<std::pair<History, Rational>> ws;
  ws.reserve(branches_.size());
  for (const auto& [key, w] : branches_) ws.emplace_back(key.first, w);
  return Lottery::from_weights(ws);
}

Lottery rollout_distribution(const Environment& env, const Policy& policy, std::size_t n, std::size_t budget) {
  if (n == 0) throw std::invalid_argument("rollout horizon must be at least 1");
  RolloutEnumerator e(env, policy, budget);
  while (e.horizon() < n) e.step();
  return e.distribution();
}

double n_step_value(const Environment& env, const Policy& policy, const RewardSpec& spec, std::size_t n,
                    std::size_t budget) {
  const auto d = rollout_distribution(env, policy, n, budget);
  return d.expectation([&](const History& h) { return markov_utility(h, spec); });
}

std::vector<double> n_step_values_dp(const TabularEnv& env, const TabularPolicy& policy, const RewardSpec& spec,
                                     std::size_t n) {
  const std::size_t S = env.state_count();
  std::vector<double> w(S, 0.0), next(S);
  std::vector<double> values;
  for (std::size_t k = 1; k <= n; ++k) {
    // w holds W_{k-1}: expected discounted return over k-1 remaining steps from each state.
    for (StateId s = 0; s < S; ++s) {
      const SymbolId o = env.spec().observation_of[s];
      double acc = 0;
      for (const auto& [a, pa] : policy.act(History{}, o, s)) {
        const Transition t{o, a};
        double cont = 0;
        for (const auto& [s2, ps] : env.next(s, o, a)) cont += ps.to_double() * w[s2];
        acc += pa.to_double() * (spec.reward(t) + spec.discount(t) * cont);
      }
      next[s] = acc;
    }
    std::swap(w, next);
    double v = 0;
    for (const auto& [s, p] : env.initial()) v += p.to_double() * w[s];
    values.push_back(v);
  }
  return values;
}

double n_step_value_dp(const TabularEnv& env, const TabularPolicy& policy, const RewardSpec& spec, std::size_t n) {
  if (n == 0) throw std::invalid_argument("horizon must be at least 1");
  return n_step_values_dp(env, policy, spec, n).back();
}

namespace {

template <class T>
T sample(const Dist<T>& d, std::mt19937_64& rng) {
  std::vector<double> ws;
  for (const auto& [x, w] : d) ws.push_back(w.to_double());
  std::discrete_distribution<std::size_t> pick(ws.begin(), ws.end());
  return d[pick(rng)].first;
}

}  // namespace

MonteCarloEstimate monte_carlo_value(const Environment& env, const Policy& policy, const RewardSpec& spec,
                                     std::size_t n, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");
  std::mt19937_64 rng(seed);
  double sum = 0, sum_sq = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    History h;
    StateId s = sample(env.initial(), rng);
    double ret = 0, disc = 1;
    for (std::size_t k = 0; k < n; ++k) {
      const SymbolId o = sample(env.observe(s, h), rng);
      const SymbolId a = sample(policy.act(h, o, s), rng);
      const Transition t{o, a};
      ret += disc * spec.reward(t);
      disc *= spec.discount(t);
      h = h.appended(t);
      s = sample(env.next(s, o, a), rng);
    }
    sum += ret;
    sum_sq += ret * ret;
  }
  const double m = sum / static_cast<double>(samples);
  const double var = std::max(0.0, (sum_sq - samples * m * m) / static_cast<double>(samples - 1));
  return {m, std::sqrt(var / static_cast<double>(samples)), samples};
}

std::vector<double> prediscounted_stream(const History& h, const RewardSpec& spec) {
  std::vector<double> out;
  double disc = 1;
  for (const auto& t : h.steps()) {
    if (!spec.alphabet().contains(t)) throw std::invalid_argument("transition not covered by the reward spec");
    out.push_back(disc * spec.reward(t));
    disc *= spec.discount(t);
  }
  return out;
}

}  // namespace rewardkit::sim
