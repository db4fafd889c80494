#include <doctest.h>

#include <limits>
#include <random>

#include "rewardkit/lottery/json.hpp"
#include "support/fixtures.hpp"

using namespace rewardkit;
using rewardkit::testing::D;
using rewardkit::testing::H;

namespace {

Rational total_weight(const Lottery& l) {
  Rational s;
  for (const auto& [h, w] : l.support()) s += w;
  return s;
}

}  // namespace

TEST_CASE("rational arithmetic stays in lowest terms") {
  Rational a(2, 4);
  CHECK(a.num() == 1);
  CHECK(a.den() == 2);
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational::parse("6/8").str() == "3/4");
  CHECK(Rational::parse("5").str() == "5/1");
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("1/x"), std::invalid_argument);
}

TEST_CASE("rational overflow fails loudly") {
  const auto big = std::numeric_limits<std::int64_t>::max();
  CHECK_THROWS_AS(Rational(big) + Rational(1), RationalOverflow);
  CHECK_THROWS_AS(Rational(1, big) * Rational(1, big - 1), RationalOverflow);
}

TEST_CASE("best rational approximation") {
  CHECK(Rational::approximate(0.49999999999, 1000000) == Rational(1, 2));
  CHECK(Rational::approximate(1.3, 1000000) == Rational(13, 10));
  CHECK(Rational::approximate(-0.25, 10) == Rational(-1, 4));
  auto pi = Rational::approximate(3.14159265358979, 1000);
  CHECK(pi == Rational(355, 113));
}

TEST_CASE("lottery construction enforces normalization") {
  auto alpha = testing::ab_alphabet();
  auto h1 = H(alpha, {"a"});
  auto h2 = H(alpha, {"b"});
  CHECK_THROWS_AS(Lottery::from_weights({{h1, Rational(1, 2)}}), std::invalid_argument);
  CHECK_THROWS_AS(Lottery::from_weights({{h1, Rational(3, 2)}, {h2, Rational(-1, 2)}}), std::invalid_argument);
  auto merged = Lottery::from_weights({{h1, Rational(1, 4)}, {h1, Rational(1, 4)}, {h2, Rational(1, 2)}, {h2, 0}});
  CHECK(merged.size() == 2);
  CHECK(merged.weight(h1) == Rational(1, 2));
  CHECK(Lottery() == Lottery::dirac(History{}));
}

TEST_CASE("mix") {
  auto alpha = testing::ab_alphabet();
  auto h1 = H(alpha, {"a"});
  auto h2 = H(alpha, {"b"});
  auto A = Lottery::from_weights({{h1, Rational(1, 2)}, {h2, Rational(1, 2)}});
  auto B = Lottery::dirac(h1);
  CHECK(mix(1, A, B) == A);
  CHECK(mix(0, A, B) == B);
  auto m = mix(Rational(1, 2), A, B);
  CHECK(m.weight(h1) == Rational(3, 4));
  CHECK(m.weight(h2) == Rational(1, 4));
  CHECK_THROWS_AS(mix(Rational(3, 2), A, B), std::invalid_argument);
  CHECK_THROWS_AS(mix(Rational(-1, 2), A, B), std::invalid_argument);
}

TEST_CASE("prepend") {
  auto alpha = testing::ab_alphabet();
  auto a = alpha.parse_name("a");
  auto b = alpha.parse_name("b");
  CHECK(prepend(a, Lottery()) == Lottery::dirac(History{a}));
  auto A = Lottery::from_weights({{History{b}, Rational(1, 2)}, {History{a, a}, Rational(1, 2)}});
  auto pA = prepend(a, A);
  CHECK(pA.weight(History{a, b}) == Rational(1, 2));
  CHECK(pA.weight(History{a, a, a}) == Rational(1, 2));
  CHECK(prepend(a, prepend(b, Lottery())) == Lottery::dirac(History{a, b}));
  CHECK_THROWS_AS(prepend(alpha, Transition{7, kNoAction}, A), AlphabetMismatch);
}

TEST_CASE("redirect") {
  auto alpha = testing::ab_alphabet();
  auto h = H(alpha, {"a"});
  auto x = H(alpha, {"b"});
  SUBCASE("full mass") {
    auto C = Lottery::dirac(concat(h, x));
    auto B = D(alpha, {"b", "b"});
    CHECK(redirect(C, h, B) == Lottery::dirac(concat(h, H(alpha, {"b", "b"}))));
  }
  SUBCASE("no prefix match is identity") {
    auto C = D(alpha, {"b", "a"});
    CHECK(redirect(C, h, D(alpha, {"a"})) == C);
  }
  SUBCASE("partial mass is spread over h.B") {
    auto y = H(alpha, {"b", "b"});
    auto C = Lottery::from_weights({{concat(h, x), Rational(1, 2)}, {y, Rational(1, 2)}});
    auto B = Lottery::from_weights({{H(alpha, {"a"}), Rational(1, 2)}, {H(alpha, {"b"}), Rational(1, 2)}});
    auto out = redirect(C, h, B);
    CHECK(out.weight(H(alpha, {"a", "a"})) == Rational(1, 4));
    CHECK(out.weight(H(alpha, {"a", "b"})) == Rational(1, 4));
    CHECK(out.weight(y) == Rational(1, 2));
    CHECK(out.size() == 3);
  }
}

TEST_CASE("lottery algebra laws on random lotteries") {
  auto alpha = testing::ab_alphabet();
  auto base = histories_up_to(alpha, 2);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pk(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    auto A = testing::random_lottery(rng, base, 4);
    auto B = testing::random_lottery(rng, base, 3);
    auto C = testing::random_lottery(rng, base, 5);
    Rational p(pk(rng), 6);
    auto t = alpha.transitions()[static_cast<std::size_t>(trial) % alpha.size()];
    auto m = mix(p, A, B);
    CHECK(total_weight(m) == Rational(1));
    CHECK(m == mix(Rational(1) - p, B, A));
    CHECK(prepend(t, m) == mix(p, prepend(t, A), prepend(t, B)));
    auto h = base[static_cast<std::size_t>(trial) % base.size()];
    auto r = redirect(C, h, A);
    CHECK(total_weight(r) == Rational(1));
    for (const auto& [hist, w] : r.support()) CHECK(w > Rational(0));
    CHECK(r.mass_with_prefix(h) == C.mass_with_prefix(h));
  }
}

TEST_CASE("json round trip is bit-exact") {
  Alphabet alpha({"s1", "s2"}, {"a1", "a2"});
  auto base = histories_up_to(alpha, 2);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto l = testing::random_lottery(rng, base, 7);
    auto text = to_json(l).dump();
    auto back = lottery_from_json(Json::parse(text));
    CHECK(back == l);
    CHECK(to_json(back).dump() == text);
  }
  CHECK(to_json(Lottery()).dump() == R"({"support":[{"history":[],"weight":"1/1"}]})");
  auto designer = Alphabet::designer({"x"});
  CHECK(to_json(History{Transition{0, kNoAction}}).dump() == "[[0,null]]");
  CHECK(alphabet_from_json(to_json(alpha)) == alpha);
  CHECK(alphabet_from_json(to_json(designer)) == designer);
}
