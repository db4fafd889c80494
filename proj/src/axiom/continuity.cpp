// Continuity: search for the mixture weight at which the mixture is
// indifferent to the target lottery.

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "detail.hpp"

namespace rewardkit::axiom {

namespace {

struct ContinuityResult {
  InstanceOutcome outcome;
  Json details = Json::object();
};

/// `top >= mid >= bottom` has already been established.
ContinuityResult search(PreferenceOracle& oracle, const Lottery& top, const Lottery& mid, const Lottery& bottom,
                        const ContinuityOptions& copt, std::vector<WitnessQuery> preconditions) {
  const bool axiom_role = copt.role == ContinuityRole::Axiom;
  const Lottery& hi = axiom_role ? top : mid;
  const Lottery& target = axiom_role ? mid : top;
  const Lottery& lo = bottom;

  std::vector<WitnessQuery> log;
  auto at = [&](const Rational& p) {
    log.push_back(detail::ask(oracle, mix(p, hi, lo), target));
    return log.back().observed;
  };

  ContinuityResult res;
  res.details["role"] = axiom_role ? "axiom" : "target-top";
  res.details["epsilon_p"] = copt.epsilon_p;
  auto found = [&](const Rational& p) {
    res.details["p"] = p.str();
    res.details["p_value"] = p.to_double();
    res.outcome = InstanceOutcome::pass();
    return res;
  };

  const Verdict v1 = at(Rational(1));
  if (v1 == Verdict::Indifferent) return found(Rational(1));
  const Verdict v0 = at(Rational(0));
  if (v0 == Verdict::Indifferent) return found(Rational(0));

  auto bisect = [&](Rational a, Rational b, Verdict va) {
    const Rational width(1, 1 << 30);
    int iterations = 0;
    while ((b - a).to_double() > copt.epsilon_p && b - a > width) {
      const Rational m = (a + b) * Rational(1, 2);
      const Verdict vm = at(m);
      ++iterations;
      if (vm == Verdict::Indifferent) return found(m);
      if (vm == va) a = m;
      else b = m;
    }
    res.details["bracket"] = {a.str(), b.str()};
    res.details["p_value"] = ((a + b) * Rational(1, 2)).to_double();
    res.details["iterations"] = iterations;
    res.details["bracketed"] = true;
    res.outcome = InstanceOutcome::pass();
    return res;
  };

  if (v1 != v0) return bisect(Rational(0), Rational(1), v0);

  // Same strict verdict at both ends: scan the interior at resolution epsilon_p.
  const auto steps = static_cast<std::int64_t>(std::ceil(1.0 / copt.epsilon_p));
  for (std::int64_t k = 1; k < steps; ++k) {
    const Rational p(k, steps);
    const Verdict v = at(p);
    if (v == Verdict::Indifferent) return found(p);
    if (v != v0) return bisect(Rational(k - 1, steps), p, v0);
  }

  Witness w;
  w.queries = std::move(preconditions);
  w.queries.push_back(log[0]);  // p = 1
  w.queries.push_back(log[1]);  // p = 0
  for (std::int64_t k : {steps / 4, steps / 2, 3 * steps / 4})
    if (k > 0 && static_cast<std::size_t>(k + 1) < log.size()) w.queries.push_back(log[static_cast<std::size_t>(k + 1)]);
  w.params = {{"role", res.details["role"]}, {"grid_steps", steps}};
  w.explanation = std::string("the mixture is ") + detail::verdict_name(v0) +
                  " than the target at every grid point of [0,1] (step " + std::to_string(copt.epsilon_p) +
                  "); no break-even point at this resolution";
  res.details["grid_steps"] = steps;
  res.outcome = InstanceOutcome::violation(std::move(w));
  return res;
}

std::uint64_t per_triple_bound(const ContinuityOptions& copt) {
  const auto steps = static_cast<std::uint64_t>(std::ceil(1.0 / copt.epsilon_p));
  return 2 + steps + static_cast<std::uint64_t>(std::ceil(std::log2(1.0 / copt.epsilon_p))) + 31;
}

void add_closed_form(PreferenceOracle& oracle, const Lottery& top, const Lottery& mid, const Lottery& bottom,
                     const ContinuityOptions& copt, Json& details) {
  auto ua = oracle.utility(top), ub = oracle.utility(mid), uc = oracle.utility(bottom);
  if (!ua || !ub || !uc || copt.role != ContinuityRole::Axiom || std::fabs(*ua - *uc) <= 0) return;
  const double p_star = (*ub - *uc) / (*ua - *uc);
  details["closed_form_p"] = p_star;
  if (details.contains("p_value"))
    details["closed_form_agrees"] = std::fabs(p_star - details["p_value"].get<double>()) <= copt.epsilon_p;
}

}  // namespace

AxiomReport check_continuity(PreferenceOracle& oracle, const Lottery& a, const Lottery& b, const Lottery& c,
                             const ContinuityOptions& copt) {
  if (!(copt.epsilon_p > 0 && copt.epsilon_p < 1)) throw std::invalid_argument("epsilon_p must lie in (0,1)");
  AxiomReport report;
  report.axiom = AxiomId::Continuity;
  const auto before = oracle.queries();
  auto ab = detail::ask(oracle, a, b);
  auto bc = detail::ask(oracle, b, c);
  if (!weakly_prefers(ab.observed) || !weakly_prefers(bc.observed))
    throw std::invalid_argument("continuity precondition A >= B >= C does not hold (A vs B: " +
                                detail::verdict_name(ab.observed) + ", B vs C: " + detail::verdict_name(bc.observed) +
                                ")");
  auto res = search(oracle, a, b, c, copt, {ab, bc});
  add_closed_form(oracle, a, b, c, copt, res.details);
  report.queries = oracle.queries() - before;
  report.query_bound = per_triple_bound(copt);
  report.instance_space = report.instances = 1;
  report.details = std::move(res.details);
  if (res.outcome.kind == InstanceOutcome::Violation) {
    report.status = Status::Violated;
    report.qualifier = Qualifier::ResolutionLimited;
    report.violations = 1;
    report.witness = std::move(res.outcome.witness);
  }
  return report;
}

AxiomReport check_continuity_family(PreferenceOracle& oracle, const LotteryFamily& family,
                                    const ContinuityOptions& copt, const CheckOptions& opt) {
  if (!(copt.epsilon_p > 0 && copt.epsilon_p < 1)) throw std::invalid_argument("epsilon_p must lie in (0,1)");
  AxiomReport report;
  report.axiom = AxiomId::Continuity;
  const auto& L = family.lotteries;
  const std::size_t n = L.size();

  // Triples i<j<k enumerated through the (i,j,k) -> mixed radix trick would
  // waste most of the space, so decode lexicographically instead.
  std::vector<std::uint64_t> row;  // number of triples starting with i
  for (std::size_t i = 0; i < n; ++i) row.push_back(pair_count(n - i - 1));
  auto decode_triple = [&](std::uint64_t t) {
    std::size_t i = 0;
    while (t >= row[i]) t -= row[i++];
    auto [j, k] = decode_pair(t, n - i - 1);
    return std::array<std::size_t, 3>{i, i + 1 + j, i + 1 + k};
  };

  std::uint64_t closed_form_checked = 0, closed_form_failed = 0;
  std::mutex stats_mutex;
  auto kernel = [&](std::uint64_t t) {
    auto idx = decode_triple(t);
    std::array<std::array<Verdict, 3>, 3> v{};
    std::vector<WitnessQuery> asked;
    for (int x = 0; x < 3; ++x)
      for (int y = x + 1; y < 3; ++y) {
        asked.push_back(detail::ask(oracle, L[idx[x]], L[idx[y]]));
        v[x][y] = asked.back().observed;
        v[y][x] = flip(v[x][y]);
        if (v[x][y] == Verdict::Unanswered) return InstanceOutcome::skip();
      }
    std::array<int, 3> order{0, 1, 2};
    bool ordered = false;
    do {
      if (weakly_prefers(v[order[0]][order[1]]) && weakly_prefers(v[order[1]][order[2]])) {
        ordered = true;
        break;
      }
    } while (std::next_permutation(order.begin(), order.end()));
    if (!ordered) return InstanceOutcome::skip();  // intransitive triple: not this checker's business
    const Lottery& top = L[idx[order[0]]];
    const Lottery& mid = L[idx[order[1]]];
    const Lottery& bottom = L[idx[order[2]]];
    auto res = search(oracle, top, mid, bottom, copt, asked);
    add_closed_form(oracle, top, mid, bottom, copt, res.details);
    if (res.details.contains("closed_form_agrees")) {
      std::lock_guard lock(stats_mutex);
      ++closed_form_checked;
      if (!res.details["closed_form_agrees"].get<bool>()) ++closed_form_failed;
    }
    if (res.outcome.witness) {
      res.outcome.witness->params["triple"] = {idx[order[0]], idx[order[1]], idx[order[2]]};
    }
    return std::move(res.outcome);
  };
  CheckOptions capped = opt;
  capped.max_instances = std::min(opt.max_instances, copt.max_triples);
  detail::run_space(report, oracle, triple_count(n), 3 + per_triple_bound(copt), kernel, capped);
  if (report.witness) report.qualifier = Qualifier::ResolutionLimited;
  report.details = {{"role", copt.role == ContinuityRole::Axiom ? "axiom" : "target-top"},
                    {"epsilon_p", copt.epsilon_p},
                    {"closed_form_checked", closed_form_checked},
                    {"closed_form_failed", closed_form_failed}};
  return report;
}

}  // namespace rewardkit::axiom
