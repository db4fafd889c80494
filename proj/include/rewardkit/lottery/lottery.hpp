#pragma once

#include <functional>
#include <map>
#include <vector>

#include "rewardkit/lottery/history.hpp"
#include "rewardkit/lottery/rational.hpp"

namespace rewardkit {

/// Finite-support distribution over histories with exact rational weights.
/// Invariants: every weight is positive, weights sum to exactly 1, and the
/// support is keyed by structural history equality. Immutable once built.
class Lottery {
 public:
  using Support = std::map<History, Rational>;

  /// Dirac(epsilon).
  Lottery();

  static Lottery dirac(History h);
  /// Builds from (history, weight) pairs: duplicates are merged and zero
  /// weights dropped. Throws std::invalid_argument on negative weights or a
  /// total different from 1.
  static Lottery from_weights(const std::vector<std::pair<History, Rational>>& weights);

  const Support& support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  bool is_dirac() const { return support_.size() == 1; }
  /// Weight of h (zero if absent).
  Rational weight(const History& h) const;
  /// Total mass on histories with the given prefix.
  Rational mass_with_prefix(const History& prefix) const;

  /// Sum of weight(h) * f(h), accumulated in double at the end.
  double expectation(const std::function<double(const History&)>& f) const;

  /// Checks every history only uses transitions from the alphabet.
  void require_alphabet(const Alphabet& alphabet) const;

  friend bool operator==(const Lottery&, const Lottery&) = default;
  friend bool operator<(const Lottery& a, const Lottery& b) { return a.support_ < b.support_; }

 private:
  explicit Lottery(Support s) : support_(std::move(s)) {}
  Support support_;
};

/// p A + (1 - p) B.
Lottery mix(const Rational& p, const Lottery& a, const Lottery& b);
/// t . A: t prepended to every history in the support.
Lottery prepend(const Transition& t, const Lottery& a);
/// Same, validating t and the support against the alphabet.
Lottery prepend(const Alphabet& alphabet, const Transition& t, const Lottery& a);
/// h . A for a whole prefix history.
Lottery prepend(const History& prefix, const Lottery& a);
/// C[h -> B]: histories of C with prefix h are removed and their total mass m
/// is placed on h . B. Identity when m = 0.
Lottery redirect(const Lottery& c, const History& prefix, const Lottery& b);

/// Probability-weighted sum of u over the support.
double lottery_utility(const Lottery& a, const std::function<double(const History&)>& u);

}  // namespace rewardkit
