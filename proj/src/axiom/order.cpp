// Completeness and transitivity.

#include <array>

#include "detail.hpp"

namespace rewardkit::axiom {

AxiomReport check_completeness(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt) {
  AxiomReport report;
  report.axiom = AxiomId::Completeness;
  const auto& L = family.lotteries;
  const std::size_t n = L.size();
  // Pairs i <= j, encoded as pairs i < j' over n+1 items with j = j' - 1.
  auto kernel = [&](std::uint64_t k) {
    auto [i, jp] = decode_pair(k, n + 1);
    const auto& a = L[i];
    const auto& b = L[jp - 1];
    Verdict v;
    try {
      v = oracle.compare(a, b);
    } catch (const OutOfTable&) {
      v = Verdict::Unanswered;
    }
    if (v != Verdict::Unanswered) return InstanceOutcome::pass();
    Witness w;
    w.queries.push_back({a, b, Verdict::Unanswered});
    w.params = {{"i", i}, {"j", jp - 1}};
    w.explanation = "the oracle gives no verdict for this pair";
    return InstanceOutcome::violation(std::move(w));
  };
  detail::run_space(report, oracle, pair_count(n + 1), 1, kernel, opt);
  return report;
}

AxiomReport check_transitivity(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt) {
  AxiomReport report;
  report.axiom = AxiomId::Transitivity;

  // Pairwise verdict matrix over a (possibly sampled) subset of lotteries.
  std::vector<std::size_t> members;
  const std::size_t n_all = family.lotteries.size();
  if (pair_count(n_all) <= opt.max_instances) {
    for (std::size_t i = 0; i < n_all; ++i) members.push_back(i);
  } else {
    std::size_t m = 2;
    while (pair_count(m + 1) <= opt.max_instances) ++m;
    for (auto k : select_instances(n_all, m, opt.seed)) members.push_back(static_cast<std::size_t>(k));
    report.exhaustive = false;
  }
  const std::size_t n = members.size();
  auto lot = [&](std::size_t i) -> const Lottery& { return family.lotteries[members[i]]; };

  std::vector<Verdict> upper(pair_count(n), Verdict::Unanswered);
  const auto before = oracle.queries();
  auto kernel = [&](std::uint64_t k) {
    auto [i, j] = decode_pair(k, n);
    upper[k] = oracle.compare(lot(i), lot(j));  // distinct slots per index: no race
    return upper[k] == Verdict::Unanswered ? InstanceOutcome::skip() : InstanceOutcome::pass();
  };
  std::vector<std::uint64_t> all(pair_count(n));
  for (std::uint64_t k = 0; k < all.size(); ++k) all[k] = k;
  auto matrix = run_instances(all, kernel, detail::effective_mode(oracle, opt.mode));
  report.queries = oracle.queries() - before;
  report.query_bound = all.size();

  auto row_start = [n](std::size_t r) { return static_cast<std::uint64_t>(r) * (2 * n - r - 1) / 2; };
  // verdict(x, y) and the orientation it was asked in.
  auto verdict = [&](std::size_t x, std::size_t y) {
    if (x == y) return Verdict::Indifferent;
    if (x < y) return upper[row_start(x) + (y - x - 1)];
    return flip(upper[row_start(y) + (x - y - 1)]);
  };
  auto asked = [&](std::size_t x, std::size_t y) {
    WitnessQuery q{lot(std::min(x, y)), lot(std::max(x, y)), verdict(std::min(x, y), std::max(x, y))};
    return q;
  };

  report.instance_space = static_cast<std::uint64_t>(n) * (n > 0 ? n - 1 : 0) * (n > 1 ? n - 2 : 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (b == a) continue;
      const Verdict ab = verdict(a, b);
      for (std::size_t c = 0; c < n; ++c) {
        if (c == a || c == b) continue;
        ++report.instances;
        const Verdict bc = verdict(b, c);
        const Verdict ac = verdict(a, c);
        if (ab == Verdict::Unanswered || bc == Verdict::Unanswered || ac == Verdict::Unanswered) {
          ++report.skipped;
          continue;
        }
        if (weakly_prefers(ab) && weakly_prefers(bc) && !weakly_prefers(ac)) {
          ++report.violations;
          if (!report.witness) {
            Witness w;
            w.queries = {asked(a, b), asked(b, c), asked(a, c)};
            w.params = {{"a", members[a]}, {"b", members[b]}, {"c", members[c]}};
            w.explanation = "A >= B and B >= C but A < C";
            report.witness = std::move(w);
            report.status = Status::Violated;
          }
        }
      }
    }
  report.details["matrix_pairs"] = all.size();
  report.details["matrix_unanswered"] = matrix.skipped;
  return report;
}

}  // namespace rewardkit::axiom
