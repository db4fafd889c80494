#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "rewardkit/sim/rollout.hpp"

namespace rewardkit::sim {

inline constexpr std::size_t kDefaultDistributionHorizon = 64;
inline constexpr std::size_t kDefaultChainHorizon = 200;

enum class Relation { FirstPreferred, SecondPreferred, Indifferent, Undetermined };

/// "first-preferred" | "second-preferred" | "indifferent" | "undetermined-at-horizon"
std::string_view to_string(Relation r);

/// Outcome of a sweep over n = 1..horizon. A tail relation is only certified
/// when it covers at least `window` trailing horizons.
struct DominanceVerdict {
  Relation relation = Relation::Undetermined;
  std::optional<std::size_t> n_found;  // strict (or indifferent) tail start
  std::size_t horizon = 0;
  std::size_t window = 0;
  /// Weak dominance tails (>= and <=), reported independently of `relation`.
  std::optional<std::size_t> weak_first_n;
  std::optional<std::size_t> weak_second_n;
  std::vector<int> signs;  // per n: +1 first better, -1 second better, 0 tie
};

/// max(2, ceil(horizon / 4)), capped at the horizon.
std::size_t default_window(std::size_t horizon);

/// Classifies a sign sequence (signs[k] belongs to n = k + 1).
DominanceVerdict classify(std::vector<int> signs, std::size_t window);

/// Oracle verdicts on (D_n^pi1, D_n^pi2). An unanswered verdict throws std::runtime_error.
DominanceVerdict compare_policies_by_goal(PreferenceOracle& oracle, const Environment& env, const Policy& pi1,
                                          const Policy& pi2, std::size_t n_max = kDefaultDistributionHorizon,
                                          std::size_t budget = kDefaultBranchBudget);

/// V_n^pi1 vs V_n^pi2; differences within `tolerance` count as ties.
DominanceVerdict compare_policies_by_reward(const RewardSpec& spec, const Environment& env, const Policy& pi1,
                                            const Policy& pi2, std::size_t n_max = kDefaultDistributionHorizon,
                                            double tolerance = 1e-9, std::size_t budget = kDefaultBranchBudget);

/// Deterministic reward chain: `prefix` once, then `cycle` forever.
struct RewardChain {
  std::vector<double> prefix;
  std::vector<double> cycle;

  double at(std::size_t i) const;  // 0-based step
  /// Partial sums V_1..V_n.
  std::vector<double> values(std::size_t n) const;
  /// Long-run average of the cycle.
  double average() const;
};

DominanceVerdict check_eventual_dominance(const RewardChain& a, const RewardChain& b,
                                          std::size_t n_max = kDefaultChainHorizon, double tolerance = 1e-12);

Json to_json(const DominanceVerdict& v);

}  // namespace rewardkit::sim
