#pragma once

#include <cstdint>
#include <vector>

#include "rewardkit/lottery/json.hpp"
#include "rewardkit/lottery/lottery.hpp"

namespace rewardkit::axiom {

/// p values used for mixture axioms, ordered by denominator then numerator:
/// 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...
std::vector<Rational> default_p_grid(int max_den = 5);

/// The search space the falsifiers range over.
///
/// `lotteries` plays the role of A, B (and of the triple members for
/// transitivity and continuity); `contexts` is the range of the mixing
/// partners C, D; `prefixes` the range of h in Additivity and Sequential
/// Consistency. Explicit families keep their given order, which is also the
/// witness order.
struct LotteryFamily {
  std::vector<Lottery> lotteries;
  std::vector<Lottery> contexts;
  std::vector<History> prefixes;
  std::vector<Rational> p_grid = default_p_grid();

  /// Every lottery over `base` with weights in {0, 1/q, ..., q/q}, sorted.
  static LotteryFamily over(const std::vector<History>& base, int q);
  /// Base histories of length <= max_len over the alphabet; prefixes of length <= 1.
  static LotteryFamily generate(const Alphabet& alphabet, std::size_t max_len = 2, int q = 4);
  /// Hand-picked lotteries; contexts default to the same list.
  static LotteryFamily of(std::vector<Lottery> lotteries, std::vector<Lottery> contexts = {},
                          std::vector<History> prefixes = {});
};

/// Family description files. Three shapes:
///   {"generate": {"max_len": 2, "q": 4}}                  needs the oracle's alphabet
///   {"over": {"base": [History...], "q": 4}, "prefixes": [History...]}
///   {"lotteries": [Lottery...], "contexts": [...], "prefixes": [...]}
/// Any shape may carry "p_grid": ["1/2", ...] (or a max denominator as a number).
LotteryFamily family_from_json(const Json& j, const Alphabet& alphabet);
Json to_json(const LotteryFamily& f);

/// Number of lotteries LotteryFamily::over(base, q) would produce: C(n+q-1, q).
/// Saturates at UINT64_MAX.
std::uint64_t family_size(std::size_t base_size, int q);

/// Refuses to materialize families beyond this many lotteries.
inline constexpr std::uint64_t kMaxFamilyLotteries = 2'000'000;

}  // namespace rewardkit::axiom
