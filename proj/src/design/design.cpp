#include "rewardkit/design/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rewardkit/oracle/json.hpp"

namespace rewardkit::design {

IncompleteOracle::IncompleteOracle(Lottery l, Lottery r)
    : std::runtime_error("oracle gave no verdict for a required comparison"), lhs(std::move(l)), rhs(std::move(r)) {}

ContinuityFailure::ContinuityFailure(const std::string& what, axiom::Witness w)
    : std::runtime_error(what), witness(std::move(w)) {}

DiscountOutOfRange::DiscountOutOfRange(const std::string& what, Transition t, double g)
    : std::runtime_error(what), transition(t), gamma(g) {}

namespace {

/// Every oracle call of a design run goes through here: counts against the
/// budget and turns missing verdicts into IncompleteOracle.
class Asker {
 public:
  Asker(PreferenceOracle& oracle, std::optional<std::uint64_t> budget)
      : oracle_(oracle), start_(oracle.queries()), budget_(budget) {}

  Verdict operator()(const Lottery& a, const Lottery& b) {
    if (budget_ && used() >= *budget_)
      throw QueryBudgetExceeded("query budget of " + std::to_string(*budget_) + " exhausted");
    Verdict v;
    try {
      v = oracle_.compare(a, b);
    } catch (const OutOfTable&) {
      throw IncompleteOracle(a, b);
    }
    if (v == Verdict::Unanswered) throw IncompleteOracle(a, b);
    return v;
  }

  axiom::WitnessQuery logged(const Lottery& a, const Lottery& b) { return {a, b, (*this)(a, b)}; }

  std::uint64_t used() const { return oracle_.queries() - start_; }
  PreferenceOracle& oracle() { return oracle_; }

 private:
  PreferenceOracle& oracle_;
  std::uint64_t start_;
  std::optional<std::uint64_t> budget_;
};

void merge_sort(Asker& ask, const std::vector<Lottery>& items, std::vector<std::size_t>& idx, std::size_t lo,
                std::size_t hi, std::vector<std::size_t>& scratch) {
  if (hi - lo <= 1) return;
  const std::size_t mid = lo + (hi - lo) / 2;
  merge_sort(ask, items, idx, lo, mid, scratch);
  merge_sort(ask, items, idx, mid, hi, scratch);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    // Left element first unless it is strictly preferred: keeps the sort stable.
    if (ask(items[idx[i]], items[idx[j]]) != Verdict::Greater) scratch[k++] = idx[i++];
    else scratch[k++] = idx[j++];
  }
  while (i < mid) scratch[k++] = idx[i++];
  while (j < hi) scratch[k++] = idx[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            idx.begin() + static_cast<std::ptrdiff_t>(lo));
}

std::vector<std::size_t> sort_order(Asker& ask, const std::vector<Lottery>& items) {
  std::vector<std::size_t> idx(items.size()), scratch(items.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  merge_sort(ask, items, idx, 0, idx.size(), scratch);
  return idx;
}

/// Bisection for target ~ mix(p, top, bottom) given bottom < target < top
/// (both strict, already established). `raise` is the verdict of
/// compare(target, mixture) that means p must grow.
IndifferencePoint bisect(Asker& ask, const Lottery& target, const Lottery& top, const Lottery& bottom,
                         double epsilon, bool target_on_left = true) {
  IndifferencePoint res;
  Rational lo(0), hi(1);
  const Rational floor_width(1, std::int64_t{1} << 52);
  while ((hi - lo).to_double() > epsilon && hi - lo > floor_width) {
    const Rational mid = (lo + hi) * Rational(1, 2);
    const Lottery m = mix(mid, top, bottom);
    const Verdict v = target_on_left ? ask(target, m) : flip(ask(m, target));
    ++res.iterations;
    if (v == Verdict::Indifferent) {
      res.lo = res.hi = mid;
      res.p = mid.to_double();
      res.exact = true;
      return res;
    }
    if (v == Verdict::Greater) lo = mid;
    else hi = mid;
  }
  // The final bracket must still be ordered: mix(hi) > mix(lo).
  auto check = ask.logged(mix(hi, top, bottom), mix(lo, top, bottom));
  if (check.observed != Verdict::Greater) {
    axiom::Witness w;
    w.queries = {check};
    w.params = {{"lo", lo.str()}, {"hi", hi.str()}};
    w.explanation = "mixture with more weight on the better lottery is not preferred";
    throw ContinuityFailure("non-monotone responses in the mixture weight", std::move(w));
  }
  res.lo = lo;
  res.hi = hi;
  res.p = ((lo + hi) * Rational(1, 2)).to_double();
  return res;
}

IndifferencePoint indifference(Asker& ask, const Lottery& x, const Lottery& best, const Lottery& worst,
                               double epsilon) {
  const Verdict vb = ask(x, best);
  if (vb == Verdict::Indifferent) return {1.0, Rational(1), Rational(1), 0, true};
  const Verdict vw = ask(x, worst);
  if (vw == Verdict::Indifferent) return {0.0, Rational(0), Rational(0), 0, true};
  if (vb == Verdict::Greater || vw == Verdict::Less)
    throw std::invalid_argument("indifference_point requires worst <= X <= best");
  return bisect(ask, x, best, worst, epsilon);
}

/// Utility of x in units where worst = 0 and best = 1; extrapolates outside [0,1]
/// by solving for the mixture that makes best (or worst) the middle element.
std::pair<double, int> normalized_utility(Asker& ask, const Lottery& x, const Lottery& best, const Lottery& worst,
                                          double epsilon) {
  const Verdict vb = ask(x, best);
  if (vb == Verdict::Indifferent) return {1.0, 0};
  if (vb == Verdict::Greater) {
    // best ~ mix(p, x, worst)  =>  1 = p u(x)
    auto r = bisect(ask, best, x, worst, epsilon);
    return {1.0 / r.p, r.iterations};
  }
  const Verdict vw = ask(x, worst);
  if (vw == Verdict::Indifferent) return {0.0, 0};
  if (vw == Verdict::Less) {
    // worst ~ mix(p, best, x)  =>  0 = p + (1-p) u(x)
    auto r = bisect(ask, worst, best, x, epsilon);
    return {-r.p / (1.0 - r.p), r.iterations};
  }
  auto r = bisect(ask, x, best, worst, epsilon);
  return {r.p, r.iterations};
}

ScaleFactors scale(Asker& ask, const std::vector<Lottery>& sorted, double epsilon) {
  if (!(epsilon > 0 && epsilon <= 1)) throw std::invalid_argument("epsilon must lie in (0,1]");
  ScaleFactors sf;
  const std::size_t n = sorted.size();
  sf.p.assign(n, 0.0);
  sf.iterations.assign(n, 0);
  if (n == 0) return sf;
  sf.worst = 0;
  sf.best = n - 1;
  const Lottery& worst = sorted.front();
  const Lottery& best = sorted.back();
  if (n == 1 || ask(best, worst) == Verdict::Indifferent) {
    sf.degenerate = true;
    return sf;
  }

  // Scale monotonicity probe: worst < mix(1/4) < mix(1/2) < mix(3/4) < best.
  std::vector<Lottery> ladder{worst};
  for (int k = 1; k <= 3; ++k) ladder.push_back(mix(Rational(k, 4), best, worst));
  ladder.push_back(best);
  for (std::size_t k = 1; k < ladder.size(); ++k) {
    auto q = ask.logged(ladder[k], ladder[k - 1]);
    if (q.observed != Verdict::Greater) {
      axiom::Witness w;
      w.queries = {q};
      w.params = {{"rung", k}};
      w.explanation = "mixtures of the best and worst probe are not ordered by their weight on the best probe";
      throw ContinuityFailure("preference is not monotone in the mixture weight", std::move(w));
    }
  }

  sf.p[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    auto r = indifference(ask, sorted[i], best, worst, epsilon);
    sf.p[i] = r.p;
    sf.iterations[i] = r.iterations;
    if (sf.p[i] + 2 * epsilon < sf.p[i - 1]) {
      axiom::Witness w;
      w.params = {{"position", i}, {"p", sf.p[i]}, {"previous_p", sf.p[i - 1]}};
      w.explanation = "scale factors decrease along the preference order";
      throw ContinuityFailure("scale factors are not monotone in the sorted order", std::move(w));
    }
  }
  return sf;
}

}  // namespace

std::vector<std::size_t> pref_sort_order(PreferenceOracle& oracle, const std::vector<Lottery>& items) {
  Asker ask(oracle, std::nullopt);
  return sort_order(ask, items);
}

std::vector<Lottery> pref_sort(PreferenceOracle& oracle, std::vector<Lottery> items) {
  auto order = pref_sort_order(oracle, items);
  std::vector<Lottery> out;
  out.reserve(items.size());
  for (auto i : order) out.push_back(std::move(items[i]));
  return out;
}

IndifferencePoint indifference_point(PreferenceOracle& oracle, const Lottery& x, const Lottery& best,
                                     const Lottery& worst, double epsilon) {
  if (!(epsilon > 0 && epsilon <= 1)) throw std::invalid_argument("epsilon must lie in (0,1]");
  Asker ask(oracle, std::nullopt);
  return indifference(ask, x, best, worst, epsilon);
}

ScaleFactors pref_scale(PreferenceOracle& oracle, const std::vector<Lottery>& sorted, double epsilon) {
  Asker ask(oracle, std::nullopt);
  return scale(ask, sorted, epsilon);
}

DesignResult design_reward(PreferenceOracle& oracle, const DesignOptions& options) {
  const double eps = options.epsilon;
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("epsilon must lie in (0,1]");
  if (options.query_budget && *options.query_budget == 0) throw QueryBudgetExceeded("query budget of 0");
  const Alphabet& alpha = oracle.alphabet();
  if (alpha.empty()) throw std::invalid_argument("design needs a non-empty alphabet");
  const auto& T = alpha.transitions();

  Asker ask(oracle, options.query_budget);
  DesignDiagnostics diag;
  diag.epsilon = eps;

  // T1 = {eps} u T, T2 = {t.t}.
  std::vector<History> probes{History{}};
  for (const auto& t : T) probes.push_back(History{t});
  for (const auto& t : T) probes.push_back(History{t, t});
  std::vector<Lottery> items;
  for (const auto& h : probes) items.push_back(Lottery::dirac(h));
  diag.probes = probes.size();

  const auto order = sort_order(ask, items);
  diag.sort_comparisons = ask.used();
  std::vector<Lottery> sorted;
  for (auto i : order) {
    sorted.push_back(items[i]);
    diag.sorted_probes.push_back(probes[i]);
  }

  const auto sf = scale(ask, sorted, eps);
  diag.scale_comparisons = ask.used() - diag.sort_comparisons;
  diag.probe_p = sf.p;
  diag.probe_iterations = sf.iterations;

  std::map<History, double> p_of;
  for (std::size_t k = 0; k < sorted.size(); ++k) p_of[diag.sorted_probes[k]] = sf.p[k];
  const double p_eps = p_of.at(History{});
  auto u = [&](const History& h) { return p_of.at(h) - p_eps; };

  std::map<Transition, RewardEntry> entries;
  const double eps_deg = 10 * eps;
  if (sf.degenerate) {
    diag.constant_relation = true;
    for (const auto& t : T) {
      entries[t] = {0.0, 1.0, false};
      TransitionDiagnostics td;
      td.transition = t;
      td.identifiable = false;
      diag.transitions.push_back(td);
    }
  } else {
    const Transition* star = nullptr;
    for (const auto& t : T)
      if (!star || std::fabs(u(History{t})) > std::fabs(u(History{*star}))) star = &t;
    const double u_star = u(History{*star});
    if (std::fabs(u_star) <= eps_deg)
      throw std::domain_error("every single transition is indifferent to the empty history while two-step probes "
                              "are not: the relation has no Markov reward representation");
    diag.reference_transition = History{*star};

    const Lottery& best = sorted.back();
    const Lottery& worst = sorted.front();
    for (const auto& t : T) {
      TransitionDiagnostics td;
      td.transition = t;
      td.u_single = u(History{t});
      td.u_double = u(History{t, t});
      double gamma;
      if (std::fabs(td.u_single) > eps_deg && std::fabs(td.u_single) >= 1e-3 * std::fabs(u_star)) {
        gamma = *td.u_double / td.u_single - 1.0;
      } else {
        // u(t.t*) = r(t) + gamma(t) u(t*)
        const auto before = ask.used();
        auto [v, iters] = normalized_utility(ask, Lottery::dirac(History{t, *star}), best, worst, eps);
        (void)iters;
        diag.auxiliary_comparisons += ask.used() - before;
        td.auxiliary = true;
        td.u_auxiliary = v - p_eps;
        gamma = (*td.u_auxiliary - td.u_single) / u_star;
      }
      const double upper = options.relaxed ? std::numeric_limits<double>::infinity() : 1.0;
      if (gamma < -options.gamma_clamp_tolerance || gamma > upper + options.gamma_clamp_tolerance)
        throw DiscountOutOfRange("recovered gamma(" + alpha.name(t) + ") = " + std::to_string(gamma) +
                                     " lies outside the admissible range; the oracle violates temporal "
                                     "gamma-indifference",
                                 t, gamma);
      if (gamma < 0 || gamma > upper) {
        gamma = std::clamp(gamma, 0.0, upper);
        td.clamped = true;
      }
      entries[t] = {td.u_single, gamma, true};
      diag.transitions.push_back(td);
    }
  }
  diag.comparisons = ask.used();

  bool relaxed = false;
  for (const auto& [t, e] : entries) relaxed = relaxed || e.discount > 1.0;
  RewardSpec spec(alpha, entries, relaxed);

  // Recovered-vs-reference scale when the oracle exposes its utility.
  double sxy = 0, sxx = 0;
  std::vector<std::pair<double, double>> pairs;
  bool have_reference = options.reference_scale;
  const auto ref_eps = have_reference ? oracle.utility(Lottery()) : std::nullopt;
  for (const auto& h : probes) {
    if (!have_reference) break;
    auto ref = ref_eps ? oracle.utility(Lottery::dirac(h)) : std::nullopt;
    if (!ref) {
      have_reference = false;
      break;
    }
    pairs.emplace_back(*ref - *ref_eps, u(h));
  }
  if (have_reference) {
    for (auto [x, y] : pairs) {
      sxy += x * y;
      sxx += x * x;
    }
    if (sxx > 0) {
      const double c = sxy / sxx;
      double resid = 0;
      for (auto [x, y] : pairs) resid = std::max(resid, std::fabs(y - c * x));
      diag.scale = c;
      diag.scale_residual = resid;
      spec.scale = c;
    }
  }
  return {std::move(spec), std::move(diag)};
}

Json to_json(const DesignDiagnostics& d, const Alphabet& alphabet) {
  Json probes = Json::array();
  for (std::size_t k = 0; k < d.sorted_probes.size(); ++k)
    probes.push_back({{"history", to_json(d.sorted_probes[k])},
                      {"name", to_string(d.sorted_probes[k], alphabet)},
                      {"p", d.probe_p[k]},
                      {"iterations", d.probe_iterations[k]}});
  Json ts = Json::array();
  for (const auto& t : d.transitions) {
    Json e = {{"transition", to_json(t.transition)},
              {"name", alphabet.name(t.transition)},
              {"u_single", t.u_single},
              {"auxiliary", t.auxiliary},
              {"clamped", t.clamped},
              {"identifiable", t.identifiable}};
    e["u_double"] = t.u_double ? Json(*t.u_double) : Json(nullptr);
    e["u_auxiliary"] = t.u_auxiliary ? Json(*t.u_auxiliary) : Json(nullptr);
    ts.push_back(e);
  }
  Json j = {{"comparisons", d.comparisons},
            {"sort_comparisons", d.sort_comparisons},
            {"scale_comparisons", d.scale_comparisons},
            {"auxiliary_comparisons", d.auxiliary_comparisons},
            {"probe_count", d.probes},
            {"epsilon", d.epsilon},
            {"constant_relation", d.constant_relation},
            {"probes", probes},
            {"transitions", ts}};
  j["reference_transition"] = d.reference_transition ? to_json(*d.reference_transition) : Json(nullptr);
  j["scale"] = d.scale ? Json(*d.scale) : Json(nullptr);
  j["scale_residual"] = d.scale_residual ? Json(*d.scale_residual) : Json(nullptr);
  return j;
}

Json to_json(const DesignResult& r) {
  return {{"spec", to_json(r.spec)}, {"diagnostics", to_json(r.diagnostics, r.spec.alphabet())}};
}

}  // namespace rewardkit::design
