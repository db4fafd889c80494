#include <doctest.h>

#include <cmath>

#include "rewardkit/design/design.hpp"
#include "rewardkit/oracle/table_oracle.hpp"
#include "rewardkit/oracle/utility_oracle.hpp"
#include "support/fixtures.hpp"

using namespace rewardkit;
using namespace rewardkit::design;
using rewardkit::testing::D;
using rewardkit::testing::H;

namespace {

int ceil_log2(std::size_t n) {
  int k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

struct Fit {
  double c = 0;
  double r_residual = 0;
  double gamma_error = 0;
};

/// Single positive scale c fitted by least squares on r, plus the worst gamma
/// error over identifiable transitions.
Fit compare_specs(const RewardSpec& recovered, const RewardSpec& truth) {
  double sxy = 0, sxx = 0;
  for (const auto& [t, e] : truth.entries()) {
    sxy += e.reward * recovered.reward(t);
    sxx += e.reward * e.reward;
  }
  Fit f;
  f.c = sxx > 0 ? sxy / sxx : 0;
  for (const auto& [t, e] : truth.entries()) {
    f.r_residual = std::max(f.r_residual, std::fabs(recovered.reward(t) - f.c * e.reward));
    if (recovered.at(t).identifiable)
      f.gamma_error = std::max(f.gamma_error, std::fabs(recovered.discount(t) - e.discount));
  }
  return f;
}

}  // namespace

TEST_CASE("pref_sort") {
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);
  const auto& alpha = spec.alphabet();

  SUBCASE("single item") {
    auto out = pref_sort(*oracle, {D(alpha, {"a"})});
    REQUIRE(out.size() == 1);
    CHECK(out[0] == D(alpha, {"a"}));
    CHECK(oracle->queries() == 0);
  }

  SUBCASE("reversed list sorts ascending by utility") {
    std::vector<Lottery> items;
    for (const auto& h : histories_up_to(alpha, 2)) items.push_back(Lottery::dirac(h));
    items.push_back(mix(Rational(1, 3), D(alpha, {"a", "a"}), D(alpha, {})));
    std::sort(items.begin(), items.end(), [&](const Lottery& x, const Lottery& y) {
      return *oracle->utility(x) > *oracle->utility(y);
    });
    const auto before = oracle->queries();
    auto out = pref_sort(*oracle, items);
    const auto used = oracle->queries() - before;
    REQUIRE(out.size() == items.size());
    CHECK(std::is_permutation(out.begin(), out.end(), items.begin()));
    for (std::size_t i = 1; i < out.size(); ++i) {
      CHECK(*oracle->utility(out[i - 1]) <= *oracle->utility(out[i]) + 1e-12);
      CHECK(oracle->compare(out[i - 1], out[i]) != Verdict::Greater);
    }
    CHECK(used <= items.size() * static_cast<std::size_t>(ceil_log2(items.size())));
  }

  SUBCASE("indifference class stays contiguous") {
    std::vector<Lottery> items{D(alpha, {"a"}), D(alpha, {"b"}), D(alpha, {"a", "a"}), D(alpha, {}),
                               D(alpha, {"b", "b"})};
    auto out = pref_sort(*oracle, items);
    std::vector<double> us;
    for (const auto& l : out) us.push_back(*oracle->utility(l));
    CHECK(us == std::vector<double>{0, 0, 0, 1, 1.5});
  }

  SUBCASE("incomplete oracle reports the pair") {
    TableOracle table(alpha, {{D(alpha, {"a"}), D(alpha, {"b"}), Verdict::Greater}});
    try {
      pref_sort(table, {D(alpha, {"a"}), D(alpha, {"b"}), D(alpha, {})});
      FAIL("expected IncompleteOracle");
    } catch (const IncompleteOracle& e) {
      CHECK((e.lhs == D(alpha, {}) || e.rhs == D(alpha, {})));
    }
  }
}

TEST_CASE("indifference_point") {
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);
  const auto& alpha = spec.alphabet();
  const auto best = D(alpha, {"a", "a"});
  const auto worst = D(alpha, {});

  auto at_best = indifference_point(*oracle, best, best, worst, 1e-6);
  CHECK(at_best.p == 1.0);
  CHECK(at_best.exact);
  auto at_worst = indifference_point(*oracle, worst, best, worst, 1e-6);
  CHECK(at_worst.p == 0.0);

  for (double eps : {1e-2, 1e-6, 1e-9}) {
    auto r = indifference_point(*oracle, D(alpha, {"a"}), best, worst, eps);
    CHECK(std::fabs(r.p - 2.0 / 3.0) <= eps);
    CHECK((r.hi - r.lo).to_double() <= eps);
    CHECK(r.iterations <= static_cast<int>(std::ceil(std::log2(1.0 / eps))) + 1);
  }
  // Dyadic target is hit exactly.
  auto half = indifference_point(*oracle, mix(Rational(1, 2), best, worst), best, worst, 1e-6);
  CHECK(half.exact);
  CHECK(half.p == 0.5);

  CHECK_THROWS_AS(indifference_point(*oracle, best, D(alpha, {"a"}), worst, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(indifference_point(*oracle, D(alpha, {"a"}), best, worst, 0.0), std::invalid_argument);
}

TEST_CASE("pref_scale") {
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);
  const auto& alpha = spec.alphabet();

  SUBCASE("G1 probe set") {
    std::vector<Lottery> probes{D(alpha, {}),         D(alpha, {"b"}),      D(alpha, {"b", "b"}), D(alpha, {"a"}),
                                D(alpha, {"b", "a"}), D(alpha, {"a", "b"}), D(alpha, {"a", "a"})};
    auto sf = pref_scale(*oracle, probes, 1e-6);
    std::vector<double> want{0, 0, 0, 2.0 / 3, 2.0 / 3, 2.0 / 3, 1};
    REQUIRE(sf.p.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::fabs(sf.p[i] - want[i]) <= 1e-6);
    CHECK_FALSE(sf.degenerate);
  }

  SUBCASE("all indifferent") {
    auto flat = UtilityOracle::markov(RewardSpec::uniform(alpha, 0.0, 1.0));
    auto sf = pref_scale(*flat, {D(alpha, {}), D(alpha, {"a"}), D(alpha, {"b"})}, 1e-6);
    CHECK(sf.degenerate);
    CHECK(sf.p == std::vector<double>{0, 0, 0});
  }

  SUBCASE("two classes are anchors only") {
    auto sf = pref_scale(*oracle, {D(alpha, {}), D(alpha, {"b"}), D(alpha, {"a"})}, 1e-6);
    CHECK(sf.p == std::vector<double>{0, 0, 1});
  }
}

TEST_CASE("design_reward on G1") {
  auto spec = testing::g1_spec();
  auto oracle = UtilityOracle::markov(spec);
  const auto& alpha = spec.alphabet();
  const auto a = alpha.parse_name("a");
  const auto b = alpha.parse_name("b");

  const auto before = oracle->queries();
  auto res = design_reward(*oracle);
  const auto& out = res.spec;
  CHECK(std::fabs(out.reward(a) - 2.0 / 3) <= 1e-5);
  CHECK(std::fabs(out.reward(b)) <= 1e-5);
  CHECK(std::fabs(out.discount(a) - 0.5) <= 1e-4);
  CHECK(std::fabs(out.discount(b) - 1.0) <= 1e-4);
  CHECK(out.at(a).identifiable);
  CHECK(out.at(b).identifiable);
  REQUIRE(res.diagnostics.scale.has_value());
  CHECK(std::fabs(*res.diagnostics.scale - 2.0 / 3) <= 1e-5);
  CHECK(res.diagnostics.comparisons == oracle->queries() - before);
  CHECK(res.diagnostics.probes == 5);
  REQUIRE(res.diagnostics.reference_transition.has_value());
  CHECK(*res.diagnostics.reference_transition == History{a});

  bool b_aux = false;
  for (const auto& t : res.diagnostics.transitions)
    if (t.transition == b) b_aux = t.auxiliary;
  CHECK(b_aux);
  CHECK(res.diagnostics.auxiliary_comparisons > 0);

  auto j = to_json(res);
  CHECK(j["spec"]["transitions"].size() == 2);
  CHECK(j["diagnostics"]["comparisons"] == res.diagnostics.comparisons);
}

TEST_CASE("design_reward on a constant relation") {
  auto alpha = testing::ab_alphabet();
  auto oracle = UtilityOracle::markov(RewardSpec::uniform(alpha, 0.0, 0.7));
  auto res = design_reward(*oracle);
  CHECK(res.diagnostics.constant_relation);
  for (const auto& [t, e] : res.spec.entries()) {
    CHECK(e.reward == 0.0);
    CHECK(e.discount == 1.0);
    CHECK_FALSE(e.identifiable);
  }
}

TEST_CASE("design_reward round trip on random specs") {
  std::mt19937_64 rng(20240611);
  DesignOptions opt;
  opt.epsilon = 1e-12;
  for (int k = 0; k < 25; ++k) {
    const std::size_t n = 1 + k % 6;
    auto truth = testing::random_spec(rng, n);
    auto oracle = UtilityOracle::markov(truth, 1e-13);
    auto res = design_reward(*oracle, opt);
    auto fit = compare_specs(res.spec, truth);
    CAPTURE(k);
    CHECK(fit.c > 0);
    CHECK(fit.r_residual < 1e-6);
    CHECK(fit.gamma_error < 1e-6);

    // Order preservation on lotteries over the probe histories.
    auto base = histories_up_to(truth.alphabet(), 2);
    std::uniform_int_distribution<int> qd(1, 4);
    for (int s = 0; s < 100; ++s) {
      auto x = testing::random_lottery(rng, base, qd(rng));
      auto y = testing::random_lottery(rng, base, qd(rng));
      auto ux = x.expectation([&](const History& h) { return markov_utility(h, res.spec); });
      auto uy = y.expectation([&](const History& h) { return markov_utility(h, res.spec); });
      if (std::fabs(ux - uy) <= 1e-9) continue;
      CHECK(oracle->compare(x, y) == (ux > uy ? Verdict::Greater : Verdict::Less));
    }
  }
}

TEST_CASE("design_reward aborts on a non-monotone relation") {
  auto alpha = testing::ab_alphabet();
  RiskKind risk;
  risk.rewards = {{alpha.parse_name("a"), 1.0}, {alpha.parse_name("b"), 0.0}};
  risk.lambda = 3.0;
  UtilityOracle oracle(alpha, UtilityOracleConfig{risk, 1e-9});
  try {
    design_reward(oracle);
    FAIL("expected ContinuityFailure");
  } catch (const ContinuityFailure& e) {
    REQUIRE(e.witness.queries.size() == 1);
    const auto& q = e.witness.queries[0];
    CHECK(q.observed != Verdict::Greater);
    CHECK(oracle.compare(q.lhs, q.rhs) == q.observed);
  }

  risk.lambda = 0.0;
  UtilityOracle neutral(alpha, UtilityOracleConfig{risk, 1e-9});
  auto res = design_reward(neutral);
  CHECK(std::fabs(res.spec.discount(alpha.parse_name("a")) - 1.0) <= 1e-4);
}

TEST_CASE("design_reward errors") {
  auto spec = testing::g1_spec();
  const auto& alpha = spec.alphabet();

  auto oracle = UtilityOracle::markov(spec);
  DesignOptions tight;
  tight.query_budget = 5;
  CHECK_THROWS_AS(design_reward(*oracle, tight), QueryBudgetExceeded);

  DesignOptions bad;
  bad.epsilon = 0;
  CHECK_THROWS_AS(design_reward(*oracle, bad), std::invalid_argument);

  TableOracle table(alpha, {{D(alpha, {"a"}), D(alpha, {"b"}), Verdict::Greater}});
  CHECK_THROWS_AS(design_reward(table), IncompleteOracle);

  // gamma(a) = 1.3 is out of range unless relaxed.
  std::map<Transition, RewardEntry> e;
  e[alpha.parse_name("a")] = {1.0, 1.3, true};
  e[alpha.parse_name("b")] = {0.5, 0.8, true};
  auto relaxed = UtilityOracle::markov(RewardSpec(alpha, e, true));
  CHECK_THROWS_AS(design_reward(*relaxed), DiscountOutOfRange);
  DesignOptions ropt;
  ropt.relaxed = true;
  auto res = design_reward(*relaxed, ropt);
  CHECK(std::fabs(res.spec.discount(alpha.parse_name("a")) - 1.3) <= 1e-4);
  CHECK(res.spec.relaxed());
}

TEST_CASE("design comparison counts grow n log n") {
  std::mt19937_64 rng(7);
  DesignOptions opt;
  opt.epsilon = 1e-6;
  const int bis = static_cast<int>(std::ceil(std::log2(1.0 / opt.epsilon)));
  for (std::size_t n : {2u, 4u, 8u}) {
    auto truth = testing::random_spec(rng, n, 0.5, 2.0);
    auto oracle = UtilityOracle::markov(truth);
    auto res = design_reward(*oracle, opt);
    const std::size_t probes = 2 * n + 1;
    CHECK(res.diagnostics.sort_comparisons <= probes * ceil_log2(probes));
    // Per interior probe: two boundary queries, bisection, and the bracket check.
    CHECK(res.diagnostics.scale_comparisons <= 5 + (probes - 2) * (bis + 4));
  }
}
