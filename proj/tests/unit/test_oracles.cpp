#include <doctest.h>

#include <cmath>
#include <random>

#include "rewardkit/oracle/json.hpp"
#include "support/fixtures.hpp"

using namespace rewardkit;
using rewardkit::testing::D;
using rewardkit::testing::H;

TEST_CASE("markov utility recursion") {
  auto spec = testing::g1_spec();
  const auto& alpha = spec.alphabet();
  CHECK(markov_utility(History{}, spec) == 0.0);
  CHECK(markov_utility(H(alpha, {"a", "a"}), spec) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(markov_utility(H(alpha, {"b", "a"}), spec) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(markov_utility(History{Transition{5, kNoAction}}, spec), AlphabetMismatch);
}

TEST_CASE("markov utility satisfies u(t.h) - gamma(t) u(h) = r(t)") {
  std::mt19937_64 rng(3);
  for (int s = 0; s < 20; ++s) {
    auto spec = testing::random_spec(rng, 4);
    auto hs = histories_up_to(spec.alphabet(), 3);
    for (const auto& t : spec.alphabet().transitions())
      for (const auto& h : hs) {
        double lhs = markov_utility(h.prepended(t), spec) - spec.discount(t) * markov_utility(h, spec);
        CHECK(std::fabs(lhs - spec.reward(t)) <= 1e-12);
      }
  }
}

TEST_CASE("reward spec invariants") {
  auto alpha = testing::ab_alphabet();
  std::map<Transition, RewardEntry> e;
  e[alpha.parse_name("a")] = {1.0, 1.3, true};
  e[alpha.parse_name("b")] = {0.0, 1.0, true};
  CHECK_THROWS_AS(RewardSpec(alpha, e), std::invalid_argument);
  CHECK_NOTHROW(RewardSpec(alpha, e, /*relaxed=*/true));
  e[alpha.parse_name("a")] = {1.0, 0.5, false};
  CHECK_THROWS_AS(RewardSpec(alpha, e), std::invalid_argument);
  e.erase(alpha.parse_name("a"));
  CHECK_THROWS_AS(RewardSpec(alpha, e), std::invalid_argument);
}

TEST_CASE("lottery utility is linear") {
  auto spec = testing::g1_spec();
  const auto& alpha = spec.alphabet();
  auto u = [&](const History& h) { return markov_utility(h, spec); };
  auto h1 = H(alpha, {"a"});
  CHECK(lottery_utility(Lottery::dirac(h1), u) == u(h1));
  auto half = Lottery::from_weights({{h1, Rational(1, 2)}, {H(alpha, {"b"}), Rational(1, 2)}});
  CHECK(lottery_utility(half, u) == doctest::Approx(0.5));
  std::mt19937_64 rng(5);
  auto base = histories_up_to(alpha, 2);
  for (int i = 0; i < 100; ++i) {
    auto A = testing::random_lottery(rng, base, 4);
    auto B = testing::random_lottery(rng, base, 3);
    Rational p(i % 7, 6 + (i % 7 == 0));
    if (p > Rational(1)) p = Rational(1);
    double lhs = lottery_utility(mix(p, A, B), u);
    double rhs = p.to_double() * lottery_utility(A, u) + (1 - p.to_double()) * lottery_utility(B, u);
    CHECK(std::fabs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("markov oracle is reflexive and counts queries") {
  auto oracle = UtilityOracle::markov(testing::g1_spec());
  const auto& alpha = oracle->alphabet();
  auto A = D(alpha, {"a", "b"});
  CHECK(oracle->compare(A, A) == Verdict::Indifferent);
  CHECK(oracle->compare(D(alpha, {"a"}), Lottery()) == Verdict::Greater);
  CHECK(oracle->compare(Lottery(), D(alpha, {"a"})) == Verdict::Less);
  CHECK(oracle->queries() == 3);
  CHECK(oracle->utility(D(alpha, {"a", "a"})).value() == doctest::Approx(1.5));
}

TEST_CASE("compare_by_utility is a total preorder on small families") {
  std::mt19937_64 rng(9);
  auto spec = testing::random_spec(rng, 3);
  auto oracle = UtilityOracle::markov(spec);
  auto base = histories_up_to(spec.alphabet(), 2);
  std::vector<Lottery> fam;
  for (int i = 0; i < 8; ++i) fam.push_back(testing::random_lottery(rng, base, 3));
  std::vector<std::vector<Verdict>> v(8, std::vector<Verdict>(8));
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      v[i][j] = oracle->compare(fam[i], fam[j]);
      CHECK(v[i][j] != Verdict::Unanswered);
    }
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      CHECK(v[i][j] == flip(v[j][i]));
      for (int k = 0; k < 8; ++k)
        if (weakly_prefers(v[i][j]) && weakly_prefers(v[j][k])) CHECK(weakly_prefers(v[i][k]));
    }
}

TEST_CASE("swap indifference under gamma = 1") {
  std::mt19937_64 rng(13);
  auto spec = testing::random_spec(rng, 3, -2.0, 2.0, 1.0, 1.0);
  auto oracle = UtilityOracle::markov(spec);
  auto base = histories_up_to(spec.alphabet(), 2);
  const auto& ts = spec.alphabet().transitions();
  for (int i = 0; i < 200; ++i) {
    auto t = ts[rng() % ts.size()];
    auto t2 = ts[rng() % ts.size()];
    auto A = testing::random_lottery(rng, base, 2);
    auto X = testing::random_lottery(rng, base, 3);
    auto lhs = mix(Rational(1, 2), prepend(t, A), prepend(t2, X));
    auto rhs = mix(Rational(1, 2), prepend(t2, A), prepend(t, X));
    CHECK(oracle->compare(lhs, rhs) == Verdict::Indifferent);
  }
}

TEST_CASE("positive affine transforms are strategically equivalent") {
  std::mt19937_64 rng(17);
  auto alpha = Alphabet::designer({"x", "y"});
  auto base = histories_up_to(alpha, 2);
  HistoryUtilityKind k1, k2;
  std::uniform_real_distribution<double> u(-3, 3);
  for (const auto& h : base) {
    double v = std::round(u(rng) * 8) / 8;  // dyadic values keep the affine image exact
    k1.utilities[h] = v;
    k2.utilities[h] = 0.75 + 4.0 * v;
  }
  UtilityOracle o1(alpha, {k1, 1e-9});
  UtilityOracle o2(alpha, {k2, 1e-9});
  for (int i = 0; i < 500; ++i) {
    auto A = testing::random_lottery(rng, base, 4);
    auto B = testing::random_lottery(rng, base, 4);
    CHECK(o1.compare(A, B) == o2.compare(A, B));
  }
}

namespace {

CmdpKind independence_table(const Alphabet& lr) {
  CmdpKind k;
  k.outcomes[H(lr, {"L", "L"})] = {3, -1};
  k.outcomes[H(lr, {"L", "R"})] = {1, -2};
  k.outcomes[H(lr, {"R", "L"})] = {2, -1};
  k.outcomes[H(lr, {"R", "R"})] = {0, 2};
  return k;
}

}  // namespace

TEST_CASE("cmdp oracle: feasible beats infeasible, then base reward") {
  auto lr = Alphabet::designer({"L", "R"});
  UtilityOracle oracle(lr, {independence_table(lr), 1e-9});
  auto A = mix(Rational(1, 2), D(lr, {"R", "L"}), D(lr, {"R", "R"}));
  auto B = D(lr, {"L", "L"});
  auto C = D(lr, {"R", "R"});
  CHECK(oracle.compare(A, B) == Verdict::Greater);
  CHECK(oracle.compare(mix(Rational(1, 2), A, C), mix(Rational(1, 2), B, C)) == Verdict::Less);
  CHECK_FALSE(oracle.utility(A).has_value());
  CHECK_THROWS_AS(oracle.compare(D(lr, {"L"}), B), OutOfTable);
}

TEST_CASE("risk oracle mean-variance") {
  // Nature pays 0/1 (observations n0/n1 with the single action "go"),
  // then the agent takes low (0) or high (1) at observation "c".
  Alphabet alpha({"n0", "n1", "c"}, {"go", "low", "high"},
                 {{0, 0}, {1, 0}, {2, 1}, {2, 2}});
  RiskKind k;
  k.lambda = 3;
  k.rewards = {{{0, 0}, 0.0}, {{1, 0}, 1.0}, {{2, 1}, 0.0}, {{2, 2}, 1.0}};
  UtilityOracle oracle(alpha, {k, 1e-9});
  auto opposite = Lottery::from_weights({{H(alpha, {"n0/go", "c/high"}), Rational(1, 2)},
                                         {H(alpha, {"n1/go", "c/low"}), Rational(1, 2)}});
  auto always_high = Lottery::from_weights({{H(alpha, {"n0/go", "c/high"}), Rational(1, 2)},
                                            {H(alpha, {"n1/go", "c/high"}), Rational(1, 2)}});
  CHECK(risk_objective(opposite, k) == doctest::Approx(1.0));
  CHECK(risk_objective(always_high, k) == doctest::Approx(0.75));
  CHECK(oracle.compare(opposite, always_high) == Verdict::Greater);
  k.lambda = 2;
  CHECK(risk_objective(always_high, k) == doctest::Approx(1.0));
  UtilityOracleConfig bad{RiskKind{{}, -1.0}, 1e-9};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("table oracle is closed-world") {
  auto alpha = testing::ab_alphabet();
  auto A = D(alpha, {"a"}), B = D(alpha, {"b"}), C = D(alpha, {"a", "b"});
  TableOracle oracle(alpha, {{A, B, Verdict::Greater}});
  CHECK(oracle.compare(A, B) == Verdict::Greater);
  CHECK(oracle.compare(B, A) == Verdict::Less);
  CHECK(oracle.compare(C, C) == Verdict::Indifferent);
  CHECK_THROWS_AS(oracle.compare(A, C), OutOfTable);
  CHECK(oracle.queries() == 4);
  CHECK_THROWS_AS(TableOracle(alpha, {{A, B, Verdict::Greater}, {B, A, Verdict::Greater}}), std::invalid_argument);
}

TEST_CASE("replay oracle answers from the log then blocks") {
  auto alpha = testing::ab_alphabet();
  auto A = D(alpha, {"a"}), B = D(alpha, {"b"});
  ReplayOracle oracle(alpha, {{A, B, Verdict::Greater}});
  CHECK_FALSE(oracle.is_pure());
  CHECK(oracle.compare(A, B) == Verdict::Greater);
  CHECK(oracle.compare(B, A) == Verdict::Unanswered);
  REQUIRE(oracle.pending().has_value());
  CHECK(oracle.pending()->first == B);
  CHECK(oracle.compare(A, A) == Verdict::Unanswered);
  ReplayOracle diverging(alpha, {{A, B, Verdict::Greater}});
  CHECK_THROWS_AS(diverging.compare(B, A), ReplayDivergence);
}

TEST_CASE("oracle config json round trip") {
  auto spec = testing::g1_spec();
  UtilityOracleConfig cfg{MarkovKind{spec}, 1e-10};
  auto j = to_json(cfg, spec.alphabet());
  auto oracle = oracle_from_json(j);
  CHECK(oracle->kind() == "markov");
  auto back = reward_spec_from_json(to_json(spec));
  CHECK(back == spec);
  CHECK(to_json(back).dump() == to_json(spec).dump());
  auto A = D(spec.alphabet(), {"a"});
  auto tj = table_oracle_json(spec.alphabet(), {{A, Lottery(), Verdict::Greater}});
  auto table = oracle_from_json(tj);
  CHECK(table->compare(Lottery(), A) == Verdict::Less);
  CHECK_THROWS(oracle_from_json(Json{{"kind", "bogus"}, {"alphabet", to_json(spec.alphabet())}}));
}
