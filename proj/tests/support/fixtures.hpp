#pragma once

// Shared test fixtures: named-history helpers, the two-symbol reference spec
// "G1" (r(a)=1, gamma(a)=1/2, r(b)=0, gamma(b)=1) and seeded generators.

#include <random>
#include <string>
#include <vector>

#include "rewardkit/lottery/lottery.hpp"
#include "rewardkit/oracle/reward_spec.hpp"

namespace rewardkit::testing {

inline History H(const Alphabet& alphabet, const std::vector<std::string>& names) {
  std::vector<Transition> ts;
  for (const auto& n : names) ts.push_back(alphabet.parse_name(n));
  return History(std::move(ts));
}

inline Lottery D(const Alphabet& alphabet, const std::vector<std::string>& names) {
  return Lottery::dirac(H(alphabet, names));
}

inline Alphabet ab_alphabet() { return Alphabet::designer({"a", "b"}); }

inline RewardSpec g1_spec() {
  auto alpha = ab_alphabet();
  std::map<Transition, RewardEntry> e;
  e[alpha.parse_name("a")] = {1.0, 0.5, true};
  e[alpha.parse_name("b")] = {0.0, 1.0, true};
  return RewardSpec(alpha, e);
}

/// Random spec with r in [r_lo, r_hi], gamma in [g_lo, g_hi] over n designer symbols.
inline RewardSpec random_spec(std::mt19937_64& rng, std::size_t n, double r_lo = -2.0, double r_hi = 2.0,
                              double g_lo = 0.1, double g_hi = 1.0) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("t" + std::to_string(i));
  Alphabet alpha = Alphabet::designer(names);
  std::uniform_real_distribution<double> r(r_lo, r_hi), g(g_lo, g_hi);
  std::map<Transition, RewardEntry> e;
  for (const auto& t : alpha.transitions()) {
    double rv = r(rng);
    double gv = g(rng);
    e[t] = {rv, gv, true};
  }
  return RewardSpec(alpha, e);
}

/// Random lottery over the given histories with weights on a 1/q grid.
inline Lottery random_lottery(std::mt19937_64& rng, const std::vector<History>& base, int q) {
  std::uniform_int_distribution<std::size_t> pick(0, base.size() - 1);
  std::vector<std::pair<History, Rational>> ws;
  for (int i = 0; i < q; ++i) ws.emplace_back(base[pick(rng)], Rational(1, q));
  return Lottery::from_weights(ws);
}

}  // namespace rewardkit::testing
