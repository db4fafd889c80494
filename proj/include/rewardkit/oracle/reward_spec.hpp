#pragma once

#include <map>
#include <optional>

#include "rewardkit/lottery/history.hpp"

namespace rewardkit {

struct RewardEntry {
  double reward = 0.0;
  double discount = 1.0;
  bool identifiable = true;

  friend bool operator==(const RewardEntry&, const RewardEntry&) = default;
};

/// Markov reward r: T -> R and transition-dependent discount gamma: T -> [0,1].
/// In relaxed mode gamma may be any non-negative real.
class RewardSpec {
 public:
  RewardSpec() = default;
  RewardSpec(Alphabet alphabet, std::map<Transition, RewardEntry> entries, bool relaxed = false);

  /// Same (r, gamma) for every transition of the alphabet.
  static RewardSpec uniform(const Alphabet& alphabet, double reward, double discount, bool relaxed = false);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::map<Transition, RewardEntry>& entries() const { return entries_; }
  bool relaxed() const { return relaxed_; }

  const RewardEntry& at(const Transition& t) const;
  double reward(const Transition& t) const { return at(t).reward; }
  double discount(const Transition& t) const { return at(t).discount; }

  std::optional<double> scale;

  /// Checks coverage of the alphabet and the discount range invariant.
  void validate() const;

  friend bool operator==(const RewardSpec&, const RewardSpec&) = default;

 private:
  Alphabet alphabet_;
  std::map<Transition, RewardEntry> entries_;
  bool relaxed_ = false;
};

/// u(epsilon) = 0, u(t.h) = r(t) + gamma(t) u(h), evaluated right to left.
double markov_utility(const History& h, const RewardSpec& spec);

}  // namespace rewardkit
