#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rewardkit/lottery/lottery.hpp"

namespace rewardkit {

enum class Verdict { Less, Indifferent, Greater, Unanswered };

/// "strictly-less" | "indifferent" | "strictly-greater" | "unanswered"
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view text);
/// Verdict of compare(b, a) given compare(a, b).
Verdict flip(Verdict v);
inline bool is_strict(Verdict v) { return v == Verdict::Less || v == Verdict::Greater; }
/// a weakly preferred to b.
inline bool weakly_prefers(Verdict v) { return v == Verdict::Greater || v == Verdict::Indifferent; }

/// Raised by closed-world oracles for a pair they have no entry for.
class OutOfTable : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A queryable binary preference relation over lotteries.
///
/// compare() increments the query counter exactly once per call (including
/// calls that throw) and delegates to evaluate(). Synthetic oracles are pure
/// and may be queried concurrently; impure ones (is_pure() == false) must be
/// driven from one worker at a time.
class PreferenceOracle {
 public:
  explicit PreferenceOracle(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  virtual ~PreferenceOracle() = default;
  PreferenceOracle(const PreferenceOracle&) = delete;
  PreferenceOracle& operator=(const PreferenceOracle&) = delete;

  Verdict compare(const Lottery& a, const Lottery& b) {
    queries_.fetch_add(1, std::memory_order_relaxed);
    return evaluate(a, b);
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::uint64_t queries() const { return queries_.load(std::memory_order_relaxed); }

  virtual bool is_pure() const { return true; }
  virtual std::string kind() const = 0;
  /// Expected-utility oracles expose the representing utility; others return nullopt.
  virtual std::optional<double> utility(const Lottery&) const { return std::nullopt; }

 protected:
  virtual Verdict evaluate(const Lottery& a, const Lottery& b) = 0;

 private:
  Alphabet alphabet_;
  std::atomic<std::uint64_t> queries_{0};
};

}  // namespace rewardkit
