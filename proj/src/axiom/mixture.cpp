// Independence, Additivity and Sequential Consistency: each compares the
// verdict on a pair with the verdict on a transformed pair.

#include "detail.hpp"

namespace rewardkit::axiom {

AxiomReport check_independence(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt) {
  AxiomReport report;
  report.axiom = AxiomId::Independence;
  const auto& L = family.lotteries;
  const auto& C = family.contexts;
  const auto& P = family.p_grid;
  const std::vector<std::uint64_t> dims{pair_count(L.size()), C.size(), P.size()};
  auto kernel = [&](std::uint64_t k) {
    auto d = decode(k, dims);
    auto [i, j] = decode_pair(d[0], L.size());
    const auto& c = C[d[1]];
    const auto& p = P[d[2]];
    auto plain = detail::ask(oracle, L[i], L[j]);
    auto mixed = detail::ask(oracle, mix(p, L[i], c), mix(p, L[j], c));
    if (plain.observed == mixed.observed) return InstanceOutcome::pass();
    Witness w;
    w.params = {{"a", i}, {"b", j}, {"c", d[1]}, {"p", p.str()}};
    w.explanation = "A vs B is " + detail::verdict_name(plain.observed) + " but pA+(1-p)C vs pB+(1-p)C is " +
                    detail::verdict_name(mixed.observed) + " at p = " + p.str();
    w.queries = {std::move(plain), std::move(mixed)};
    return InstanceOutcome::violation(std::move(w));
  };
  detail::run_space(report, oracle, space_size(dims), 2, kernel, opt);
  return report;
}

AxiomReport check_additivity(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt) {
  AxiomReport report;
  report.axiom = AxiomId::Additivity;
  const auto& H = family.prefixes;
  const auto& L = family.lotteries;
  const auto& C = family.contexts;
  const auto& P = family.p_grid;
  const std::vector<std::uint64_t> dims{pair_count(H.size()), pair_count(L.size()), C.size(), C.size(), P.size()};
  auto kernel = [&](std::uint64_t k) {
    auto d = decode(k, dims);
    auto [h1, h2] = decode_pair(d[0], H.size());
    if (H[h1] == H[h2]) return InstanceOutcome::pass();  // both sides are the same query
    auto [i, j] = decode_pair(d[1], L.size());
    const auto& c = C[d[2]];
    const auto& dd = C[d[3]];
    const auto& p = P[d[4]];
    auto first = detail::ask(oracle, mix(p, prepend(H[h1], L[i]), c), mix(p, prepend(H[h1], L[j]), dd));
    auto second = detail::ask(oracle, mix(p, prepend(H[h2], L[i]), c), mix(p, prepend(H[h2], L[j]), dd));
    if (first.observed == second.observed) return InstanceOutcome::pass();
    Witness w;
    w.params = {{"h1", h1}, {"h2", h2}, {"a", i}, {"b", j}, {"c", d[2]}, {"d", d[3]}, {"p", p.str()}};
    w.explanation = "swapping the shared prefix h1 -> h2 changes the verdict from " +
                    detail::verdict_name(first.observed) + " to " + detail::verdict_name(second.observed);
    w.queries = {std::move(first), std::move(second)};
    return InstanceOutcome::violation(std::move(w));
  };
  detail::run_space(report, oracle, space_size(dims), 2, kernel, opt);
  return report;
}

AxiomReport check_sequential_consistency(PreferenceOracle& oracle, const LotteryFamily& family,
                                         const CheckOptions& opt) {
  AxiomReport report;
  report.axiom = AxiomId::SequentialConsistency;
  const auto& H = family.prefixes;
  const auto& L = family.lotteries;
  const auto& C = family.contexts;
  const std::vector<std::uint64_t> dims{H.size(), pair_count(L.size()), C.size()};
  auto kernel = [&](std::uint64_t k) {
    auto d = decode(k, dims);
    const auto& h = H[d[0]];
    auto [i, j] = decode_pair(d[1], L.size());
    const auto& c = C[d[2]];
    if (c.mass_with_prefix(h).is_zero()) return InstanceOutcome::skip();  // redirect is the identity
    auto certain = detail::ask(oracle, prepend(h, L[i]), prepend(h, L[j]));
    auto hypothetical = detail::ask(oracle, redirect(c, h, L[i]), redirect(c, h, L[j]));
    if (certain.observed == hypothetical.observed) return InstanceOutcome::pass();
    Witness w;
    w.params = {{"h", d[0]}, {"a", i}, {"b", j}, {"c", d[2]}};
    w.explanation = "h.A vs h.B is " + detail::verdict_name(certain.observed) + " but C[h->A] vs C[h->B] is " +
                    detail::verdict_name(hypothetical.observed);
    w.queries = {std::move(certain), std::move(hypothetical)};
    return InstanceOutcome::violation(std::move(w));
  };
  detail::run_space(report, oracle, space_size(dims), 2, kernel, opt);
  return report;
}

}  // namespace rewardkit::axiom
