// Memoryless and Temporal gamma-Indifference.

#include <cmath>
#include <stdexcept>

#include "detail.hpp"

namespace rewardkit::axiom {

AxiomReport check_memoryless(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt) {
  AxiomReport report;
  report.axiom = AxiomId::Memoryless;
  const auto& L = family.lotteries;
  const auto& T = oracle.alphabet().transitions();
  const std::vector<std::uint64_t> dims{pair_count(L.size()), T.size()};
  auto kernel = [&](std::uint64_t k) {
    auto d = decode(k, dims);
    auto [i, j] = decode_pair(d[0], L.size());
    const auto& t = T[d[1]];
    auto plain = detail::ask(oracle, L[i], L[j]);
    auto prefixed = detail::ask(oracle, prepend(t, L[i]), prepend(t, L[j]));
    if (plain.observed == prefixed.observed) return InstanceOutcome::pass();
    Witness w;
    w.params = {{"a", i}, {"b", j}, {"t", oracle.alphabet().name(t)}};
    w.explanation = "A vs B is " + detail::verdict_name(plain.observed) + " but t.A vs t.B is " +
                    detail::verdict_name(prefixed.observed) + " for t = " + oracle.alphabet().name(t);
    w.queries = {std::move(plain), std::move(prefixed)};
    return InstanceOutcome::violation(std::move(w));
  };
  detail::run_space(report, oracle, space_size(dims), 2, kernel, opt);
  return report;
}

namespace {

Rational indifference_weight(const Rational& gamma) { return Rational(1) / (gamma + Rational(1)); }

/// The two sides of the Axiom-5 comparison at mixture weight w.
WitnessQuery gamma_query(PreferenceOracle& oracle, const Transition& t, const Lottery& a, const Lottery& b,
                         const Rational& w) {
  return detail::ask(oracle, mix(w, prepend(t, a), b), mix(w, prepend(t, b), a));
}

/// Candidate validation over pairs x transitions; transitions without a gamma are skipped.
void validate(AxiomReport& report, PreferenceOracle& oracle, const LotteryFamily& family,
              const std::map<Transition, Rational>& gamma, const CheckOptions& opt,
              const std::map<Transition, WitnessQuery>* anchors = nullptr) {
  const auto& L = family.lotteries;
  const auto& T = oracle.alphabet().transitions();
  const std::vector<std::uint64_t> dims{pair_count(L.size()), T.size()};
  auto kernel = [&](std::uint64_t k) {
    auto d = decode(k, dims);
    auto [i, j] = decode_pair(d[0], L.size());
    const auto& t = T[d[1]];
    auto it = gamma.find(t);
    if (it == gamma.end()) return InstanceOutcome::skip();
    auto q = gamma_query(oracle, t, L[i], L[j], indifference_weight(it->second));
    if (q.observed == Verdict::Indifferent) return InstanceOutcome::pass();
    Witness w;
    if (anchors) {
      if (auto a = anchors->find(t); a != anchors->end()) w.queries.push_back(a->second);
    }
    w.queries.push_back(std::move(q));
    w.params = {{"a", i}, {"b", j}, {"t", oracle.alphabet().name(t)}, {"gamma", it->second.str()}};
    w.explanation = "mix(w, t.A, B) vs mix(w, t.B, A) is " + detail::verdict_name(w.queries.back().observed) +
                    " at w = 1/(gamma+1) with gamma(" + oracle.alphabet().name(t) + ") = " + it->second.str();
    if (anchors && w.queries.size() == 2) w.explanation += "; the first query is the instance gamma was solved on";
    return InstanceOutcome::violation(std::move(w));
  };
  detail::run_space(report, oracle, space_size(dims), 1, kernel, opt);
}

// Solve-mode sign record for one (pair, transition) instance.
struct SignRecord {
  Verdict plain = Verdict::Unanswered;
  Verdict prefixed = Verdict::Unanswered;
};

struct Solved {
  double raw = 0;
  Rational value;
  std::string method;
  Json source = Json::object();
};

}  // namespace

AxiomReport check_temporal_gamma_indifference(PreferenceOracle& oracle, const LotteryFamily& family,
                                              const GammaOptions& gopt, const CheckOptions& opt) {
  AxiomReport report;
  report.axiom = AxiomId::TemporalGammaIndifference;
  const auto& alpha = oracle.alphabet();
  const auto& T = alpha.transitions();
  const auto& L = family.lotteries;

  if (gopt.candidate) {
    for (const auto& t : T) {
      auto it = gopt.candidate->find(t);
      if (it == gopt.candidate->end()) throw std::invalid_argument("candidate gamma misses " + alpha.name(t));
      if (it->second.is_negative()) throw std::invalid_argument("candidate gamma(" + alpha.name(t) + ") < 0");
    }
    report.details["mode"] = "candidate";
    Json g = Json::object();
    for (const auto& [t, v] : *gopt.candidate) g[alpha.name(t)] = v.str();
    report.details["candidate"] = g;
    validate(report, oracle, family, *gopt.candidate, opt);
    return report;
  }

  report.details["mode"] = "solve";
  report.details["range"] = gopt.range == GammaRange::Unit ? "unit" : "nonnegative";

  // Phase 1: verdict signs on A vs B and t.A vs t.B.
  const std::vector<std::uint64_t> dims{pair_count(L.size()), T.size()};
  const auto space = space_size(dims);
  const auto indices = select_instances(space, opt.max_instances, opt.seed);
  std::vector<SignRecord> records(indices.size());
  std::vector<std::uint64_t> positions(indices.size());
  for (std::uint64_t p = 0; p < positions.size(); ++p) positions[p] = p;
  const auto before = oracle.queries();
  auto sign_kernel = [&](std::uint64_t pos) {
    auto d = decode(indices[pos], dims);
    auto [i, j] = decode_pair(d[0], L.size());
    const auto& t = T[d[1]];
    auto& r = records[pos];
    try {
      r.plain = oracle.compare(L[i], L[j]);
    } catch (const OutOfTable&) {
    }
    try {
      r.prefixed = oracle.compare(prepend(t, L[i]), prepend(t, L[j]));
    } catch (const OutOfTable&) {
    }
    return InstanceOutcome::pass();
  };
  run_instances(positions, sign_kernel, detail::effective_mode(oracle, opt.mode));
  report.instance_space = space;
  report.instances = indices.size();
  report.exhaustive = indices.size() == space;
  report.query_bound = 2 * indices.size();

  auto instance_at = [&](std::size_t pos) {
    auto d = decode(indices[pos], dims);
    auto [i, j] = decode_pair(d[0], L.size());
    return std::tuple{i, j, static_cast<std::size_t>(d[1])};
  };
  auto unsatisfiable = [&](Witness w) {
    report.status = Status::Violated;
    report.qualifier = Qualifier::Unsatisfiable;
    report.violations = 1;
    report.witness = std::move(w);
    report.queries = oracle.queries() - before;
  };

  // Phase 2a: two transitions demanding opposite signs of u(A) - u(B).
  // With gamma >= 0, a strict t.A vs t.B verdict forces gamma(t) > 0 and
  // sign(u(A) - u(B)) = sign of that verdict.
  for (std::size_t pos = 0; pos < records.size();) {
    std::size_t end = pos;
    while (end < records.size() && indices[end] / T.size() == indices[pos] / T.size()) ++end;
    std::optional<std::size_t> first_strict;
    for (std::size_t q = pos; q < end; ++q) {
      if (!is_strict(records[q].prefixed)) continue;
      if (!first_strict) {
        first_strict = q;
      } else if (records[q].prefixed != records[*first_strict].prefixed) {
        auto [i, j, t1] = instance_at(*first_strict);
        auto t2 = std::get<2>(instance_at(q));
        Witness w;
        w.queries = {{prepend(T[t1], L[i]), prepend(T[t1], L[j]), records[*first_strict].prefixed},
                     {prepend(T[t2], L[i]), prepend(T[t2], L[j]), records[q].prefixed}};
        w.params = {{"a", i}, {"b", j}, {"t1", alpha.name(T[t1])}, {"t2", alpha.name(T[t2])}};
        w.explanation = "contexts " + alpha.name(T[t1]) + " and " + alpha.name(T[t2]) +
                        " demand opposite signs for A vs B; no gamma >= 0 satisfies both";
        unsatisfiable(std::move(w));
        return report;
      }
    }
    pos = end;
  }

  // Phase 2b: a single instance whose prefixed verdict no gamma >= 0 allows.
  for (std::size_t pos = 0; pos < records.size(); ++pos) {
    const auto& r = records[pos];
    if (r.plain == Verdict::Unanswered || !is_strict(r.prefixed)) continue;
    const bool indifferent_base = r.plain == Verdict::Indifferent;
    const bool reversed = is_strict(r.plain) && r.prefixed != r.plain;
    if (!indifferent_base && !reversed) continue;
    auto [i, j, ti] = instance_at(pos);
    Witness w;
    w.queries = {{L[i], L[j], r.plain}, {prepend(T[ti], L[i]), prepend(T[ti], L[j]), r.prefixed}};
    w.params = {{"a", i}, {"b", j}, {"t", alpha.name(T[ti])}};
    w.explanation = indifferent_base ? "A ~ B but t.A and t.B are strictly ordered; gamma(t) would have to be infinite"
                                     : "prefixing t reverses a strict preference; gamma(t) would have to be negative";
    unsatisfiable(std::move(w));
    return report;
  }

  // Phase 3: magnitude per transition.
  std::vector<std::optional<double>> utils(L.size());
  bool have_utility = !L.empty();
  for (std::size_t k = 0; k < L.size() && have_utility; ++k) {
    try {
      utils[k] = oracle.utility(L[k]);
    } catch (const std::out_of_range&) {
      utils[k].reset();
    }
    have_utility = utils[k].has_value();
  }

  std::map<Transition, Rational> gamma;
  std::map<Transition, WitnessQuery> anchors;
  Json gamma_json = Json::array();
  for (std::size_t ti = 0; ti < T.size(); ++ti) {
    const auto& t = T[ti];
    std::optional<Solved> solved;
    std::size_t ai = 0, bi = 0;
    if (have_utility) {
      for (std::size_t k = 0; k < L.size(); ++k) {
        if (*utils[k] > *utils[ai]) ai = k;
        if (*utils[k] < *utils[bi]) bi = k;
      }
      const double du = *utils[ai] - *utils[bi];
      std::optional<double> ua, ub;
      try {
        ua = oracle.utility(prepend(t, L[ai]));
        ub = oracle.utility(prepend(t, L[bi]));
      } catch (const std::out_of_range&) {
      }
      if (du > 0 && ua && ub) solved = Solved{(*ua - *ub) / du, {}, "closed-form", {{"a", ai}, {"b", bi}}};
    } else {
      // First instance for t with a strict base verdict and a known prefixed verdict.
      for (std::size_t pos = 0; pos < records.size() && !solved; ++pos) {
        auto [i, j, tk] = instance_at(pos);
        if (tk != ti || !is_strict(records[pos].plain) || records[pos].prefixed == Verdict::Unanswered) continue;
        ai = records[pos].plain == Verdict::Greater ? i : j;
        bi = records[pos].plain == Verdict::Greater ? j : i;
        if (records[pos].prefixed == Verdict::Indifferent) {
          solved = Solved{0.0, {}, "sign", {{"a", ai}, {"b", bi}}};
          break;
        }
        // f(w) = verdict(mix(w, t.A, B), mix(w, t.B, A)) runs from Less at w=0 to Greater at w=1.
        try {
          Rational lo(0), hi(1);
          std::optional<Rational> exact;
          int iterations = 0;
          while ((hi - lo).to_double() > gopt.weight_epsilon && iterations < 60) {
            const Rational mid = (lo + hi) * Rational(1, 2);
            const Verdict v = gamma_query(oracle, t, L[ai], L[bi], mid).observed;
            ++iterations;
            if (v == Verdict::Indifferent) {
              exact = mid;
              break;
            }
            if (v == Verdict::Less) lo = mid;
            else hi = mid;
          }
          const double w = exact ? exact->to_double() : ((lo + hi) * Rational(1, 2)).to_double();
          solved = Solved{1.0 / w - 1.0, {}, "bisection", {{"a", ai}, {"b", bi}, {"iterations", iterations}}};
          report.query_bound += static_cast<std::uint64_t>(iterations);
        } catch (const OutOfTable&) {
          break;
        }
      }
    }

    Json entry = {{"transition", to_json(t)}, {"name", alpha.name(t)}};
    if (!solved) {
      entry["status"] = "unresolved";
      gamma_json.push_back(entry);
      continue;
    }
    solved->value = Rational::approximate(std::max(0.0, solved->raw), gopt.max_denominator);
    entry["raw"] = solved->raw;
    entry["rounding_error"] = std::fabs(solved->raw - solved->value.to_double());
    entry["method"] = solved->method;
    entry["source"] = solved->source;

    if (gopt.range == GammaRange::Unit && solved->raw > 1.0 + gopt.range_tolerance) {
      // No w in [1/2, 1] (gamma in [0,1]) makes the two sides indifferent.
      auto at_one = gamma_query(oracle, t, L[ai], L[bi], Rational(1, 2));
      auto at_zero = gamma_query(oracle, t, L[ai], L[bi], Rational(1));
      report.query_bound += 2;
      if (at_one.observed != Verdict::Indifferent) {
        Witness w;
        w.params = {{"a", ai}, {"b", bi}, {"t", alpha.name(t)}, {"solved_gamma", solved->raw}};
        w.explanation = "indifference needs gamma(" + alpha.name(t) + ") = " + std::to_string(solved->raw) +
                        " > 1: the sides are " + detail::verdict_name(at_one.observed) + " at gamma = 1 and " +
                        detail::verdict_name(at_zero.observed) + " at gamma = 0";
        w.queries = {std::move(at_one), std::move(at_zero)};
        entry["status"] = "out-of-range";
        gamma_json.push_back(entry);
        report.details["gamma"] = gamma_json;
        unsatisfiable(std::move(w));
        return report;
      }
      solved->value = Rational(1);
      entry["clamped"] = true;
    }
    entry["status"] = "solved";
    entry["value"] = solved->value.to_double();
    entry["rational"] = solved->value.str();
    gamma[t] = solved->value;
    anchors.emplace(t, gamma_query(oracle, t, L[ai], L[bi], indifference_weight(solved->value)));
    report.query_bound += 1;
    gamma_json.push_back(entry);
  }
  report.details["gamma"] = gamma_json;

  // Phase 4: one gamma per transition must work on every instance.
  const auto first_phase_instances = report.instances;
  const auto first_phase_space = report.instance_space;
  validate(report, oracle, family, gamma, opt, &anchors);
  report.instance_space = first_phase_space;
  report.details["sign_instances"] = first_phase_instances;
  if (report.witness) report.qualifier = Qualifier::Unsatisfiable;
  report.queries = oracle.queries() - before;
  return report;
}

std::map<Transition, double> solved_gamma(const AxiomReport& report) {
  std::map<Transition, double> out;
  if (!report.details.contains("gamma")) return out;
  for (const auto& e : report.details["gamma"])
    if (e.value("status", "") == "solved") out[transition_from_json(e.at("transition"))] = e.at("value").get<double>();
  return out;
}

}  // namespace rewardkit::axiom
