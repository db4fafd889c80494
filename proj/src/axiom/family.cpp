#include "rewardkit/axiom/family.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rewardkit::axiom {

std::vector<Rational> default_p_grid(int max_den) {
  std::vector<Rational> grid;
  for (int q = 2; q <= max_den; ++q)
    for (int k = 1; k < q; ++k)
      if (std::gcd(k, q) == 1) grid.emplace_back(k, q);
  return grid;
}

std::uint64_t family_size(std::size_t base_size, int q) {
  if (base_size == 0 || q <= 0) return 0;
  // C(n + q - 1, q) built incrementally; each partial product is itself a binomial.
  unsigned __int128 c = 1;
  const auto n = static_cast<unsigned __int128>(base_size);
  for (int k = 1; k <= q; ++k) {
    c = c * (n - 1 + static_cast<unsigned>(k)) / static_cast<unsigned>(k);
    if (c > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(c);
}

namespace {

void compositions(const std::vector<History>& base, int q, std::size_t i, int left,
                  std::vector<std::pair<History, Rational>>& acc, std::vector<Lottery>& out) {
  if (i + 1 == base.size()) {
    if (left > 0) acc.emplace_back(base[i], Rational(left, q));
    out.push_back(Lottery::from_weights(acc));
    if (left > 0) acc.pop_back();
    return;
  }
  for (int k = left; k >= 0; --k) {
    if (k > 0) acc.emplace_back(base[i], Rational(k, q));
    compositions(base, q, i + 1, left - k, acc, out);
    if (k > 0) acc.pop_back();
  }
}

}  // namespace

LotteryFamily LotteryFamily::over(const std::vector<History>& base, int q) {
  if (q <= 0) throw std::invalid_argument("weight grid denominator must be positive");
  if (base.empty()) throw std::invalid_argument("family needs at least one base history");
  const auto size = family_size(base.size(), q);
  if (size > kMaxFamilyLotteries)
    throw std::length_error("family of " + std::to_string(size) + " lotteries exceeds the materialization limit");
  LotteryFamily f;
  f.lotteries.reserve(size);
  std::vector<std::pair<History, Rational>> acc;
  compositions(base, q, 0, q, acc, f.lotteries);
  std::sort(f.lotteries.begin(), f.lotteries.end());
  f.lotteries.erase(std::unique(f.lotteries.begin(), f.lotteries.end()), f.lotteries.end());
  f.contexts = f.lotteries;
  return f;
}

LotteryFamily LotteryFamily::generate(const Alphabet& alphabet, std::size_t max_len, int q) {
  auto f = over(histories_up_to(alphabet, max_len), q);
  f.prefixes = histories_up_to(alphabet, 1);
  return f;
}

LotteryFamily LotteryFamily::of(std::vector<Lottery> lotteries, std::vector<Lottery> contexts,
                                std::vector<History> prefixes) {
  LotteryFamily f;
  f.lotteries = std::move(lotteries);
  f.contexts = contexts.empty() ? f.lotteries : std::move(contexts);
  f.prefixes = std::move(prefixes);
  return f;
}

namespace {

std::vector<History> histories(const Json& j) {
  std::vector<History> out;
  for (const auto& h : j) out.push_back(history_from_json(h));
  return out;
}

std::vector<Lottery> lotteries(const Json& j) {
  std::vector<Lottery> out;
  for (const auto& l : j) out.push_back(lottery_from_json(l));
  return out;
}

}  // namespace

LotteryFamily family_from_json(const Json& j, const Alphabet& alphabet) {
  LotteryFamily f;
  if (j.contains("generate")) {
    const auto& g = j.at("generate");
    f = LotteryFamily::generate(alphabet, g.value("max_len", std::size_t{2}), g.value("q", 4));
  } else if (j.contains("over")) {
    const auto& o = j.at("over");
    f = LotteryFamily::over(histories(o.at("base")), o.value("q", 4));
  } else if (j.contains("lotteries")) {
    f = LotteryFamily::of(lotteries(j.at("lotteries")), j.contains("contexts") ? lotteries(j.at("contexts")) : std::vector<Lottery>{});
  } else {
    throw std::invalid_argument("family needs one of \"generate\", \"over\" or \"lotteries\"");
  }
  if (j.contains("prefixes")) f.prefixes = histories(j.at("prefixes"));
  if (j.contains("p_grid")) {
    const auto& p = j.at("p_grid");
    if (p.is_number_integer()) {
      f.p_grid = default_p_grid(p.get<int>());
    } else {
      f.p_grid.clear();
      for (const auto& x : p) f.p_grid.push_back(Rational::parse(x.get<std::string>()));
    }
  }
  return f;
}

Json to_json(const LotteryFamily& f) {
  Json j = {{"lotteries", Json::array()}, {"contexts", Json::array()}, {"prefixes", Json::array()}, {"p_grid", Json::array()}};
  for (const auto& l : f.lotteries) j["lotteries"].push_back(to_json(l));
  for (const auto& l : f.contexts) j["contexts"].push_back(to_json(l));
  for (const auto& h : f.prefixes) j["prefixes"].push_back(to_json(h));
  for (const auto& p : f.p_grid) j["p_grid"].push_back(p.str());
  return j;
}

}  // namespace rewardkit::axiom
