#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rewardkit/oracle/oracle.hpp"
#include "rewardkit/oracle/reward_spec.hpp"
#include "rewardkit/sim/model.hpp"

namespace rewardkit::sim {

inline constexpr std::size_t kDefaultBranchBudget = 2'000'000;

class EnumerationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Forward enumeration of D_1, D_2, ... one horizon at a time. Branches are
/// (history, latent state) pairs with exact weights; zero branches are pruned.
class RolloutEnumerator {
 public:
  RolloutEnumerator(const Environment& env, const Policy& policy, std::size_t budget = kDefaultBranchBudget);

  /// Extends by one step and returns the new horizon.
  std::size_t step();
  std::size_t horizon() const { return horizon_; }
  std::size_t branches() const { return branches_.size(); }
  /// Marginal over histories at the current horizon.
  Lottery distribution() const;

 private:
  const Environment& env_;
  const Policy& policy_;
  std::size_t budget_;
  std::size_t horizon_ = 0;
  std::map<std::pair<History, StateId>, Rational> branches_;
};

/// D_n^pi. Throws EnumerationBudgetExceeded past `budget` branches (use monte_carlo_value instead).
Lottery rollout_distribution(const Environment& env, const Policy& policy, std::size_t n,
                             std::size_t budget = kDefaultBranchBudget);

/// V_n^pi = E[sum_i (prod_{j<i} gamma_j) r_i] by enumeration.
double n_step_value(const Environment& env, const Policy& policy, const RewardSpec& spec, std::size_t n,
                    std::size_t budget = kDefaultBranchBudget);

/// Same value by backward recursion over latent states. Tabular env and policy only.
double n_step_value_dp(const TabularEnv& env, const TabularPolicy& policy, const RewardSpec& spec, std::size_t n);
/// V_1..V_n in one pass.
std::vector<double> n_step_values_dp(const TabularEnv& env, const TabularPolicy& policy, const RewardSpec& spec,
                                     std::size_t n);

struct MonteCarloEstimate {
  double mean = 0;
  double standard_error = 0;
  std::size_t samples = 0;
};

/// Seeded sampling estimate of V_n; for demos, never for acceptance checks.
MonteCarloEstimate monte_carlo_value(const Environment& env, const Policy& policy, const RewardSpec& spec,
                                     std::size_t n, std::size_t samples, std::uint64_t seed);

/// r_i = (prod_{j<i} gamma(o_j)) r(o_i). Throws std::invalid_argument on a symbol the spec lacks.
std::vector<double> prediscounted_stream(const History& h, const RewardSpec& spec);

}  // namespace rewardkit::sim
