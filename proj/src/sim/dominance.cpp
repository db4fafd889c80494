#include "rewardkit/sim/dominance.hpp"

#include <cmath>
#include <functional>

namespace rewardkit::sim {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::FirstPreferred: return "first-preferred";
    case Relation::SecondPreferred: return "second-preferred";
    case Relation::Indifferent: return "indifferent";
    case Relation::Undetermined: return "undetermined-at-horizon";
  }
  return "undetermined-at-horizon";
}

std::size_t default_window(std::size_t horizon) {
  return std::min(horizon, std::max<std::size_t>(2, (horizon + 3) / 4));
}

DominanceVerdict classify(std::vector<int> signs, std::size_t window) {
  DominanceVerdict v;
  v.horizon = signs.size();
  v.window = window;
  // First n of the longest tail on which pred holds, if that tail spans the window.
  auto tail = [&](const std::function<bool(int)>& pred) -> std::optional<std::size_t> {
    std::size_t k = signs.size();
    while (k > 0 && pred(signs[k - 1])) --k;
    const std::size_t len = signs.size() - k;
    if (len == 0 || len < window) return std::nullopt;
    return k + 1;
  };
  v.weak_first_n = tail([](int s) { return s >= 0; });
  v.weak_second_n = tail([](int s) { return s <= 0; });
  if (auto n = tail([](int s) { return s > 0; })) {
    v.relation = Relation::FirstPreferred;
    v.n_found = n;
  } else if (auto n2 = tail([](int s) { return s < 0; })) {
    v.relation = Relation::SecondPreferred;
    v.n_found = n2;
  } else if (auto n0 = tail([](int s) { return s == 0; })) {
    v.relation = Relation::Indifferent;
    v.n_found = n0;
  }
  v.signs = std::move(signs);
  return v;
}

DominanceVerdict compare_policies_by_goal(PreferenceOracle& oracle, const Environment& env, const Policy& pi1,
                                          const Policy& pi2, std::size_t n_max, std::size_t budget) {
  if (n_max == 0) throw std::invalid_argument("horizon must be at least 1");
  RolloutEnumerator e1(env, pi1, budget), e2(env, pi2, budget);
  std::vector<int> signs;
  for (std::size_t n = 1; n <= n_max; ++n) {
    e1.step();
    e2.step();
    const Verdict v = oracle.compare(e1.distribution(), e2.distribution());
    if (v == Verdict::Unanswered)
      throw std::runtime_error("oracle left D_" + std::to_string(n) + " comparison unanswered");
    signs.push_back(v == Verdict::Greater ? 1 : v == Verdict::Less ? -1 : 0);
  }
  return classify(std::move(signs), default_window(n_max));
}

DominanceVerdict compare_policies_by_reward(const RewardSpec& spec, const Environment& env, const Policy& pi1,
                                            const Policy& pi2, std::size_t n_max, double tolerance,
                                            std::size_t budget) {
  if (n_max == 0) throw std::invalid_argument("horizon must be at least 1");
  RolloutEnumerator e1(env, pi1, budget), e2(env, pi2, budget);
  auto u = [&](const History& h) { return markov_utility(h, spec); };
  std::vector<int> signs;
  for (std::size_t n = 1; n <= n_max; ++n) {
    e1.step();
    e2.step();
    const double d = e1.distribution().expectation(u) - e2.distribution().expectation(u);
    signs.push_back(std::fabs(d) <= tolerance ? 0 : d > 0 ? 1 : -1);
  }
  return classify(std::move(signs), default_window(n_max));
}

double RewardChain::at(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  if (cycle.empty()) throw std::invalid_argument("reward chain needs a non-empty cycle");
  return cycle[(i - prefix.size()) % cycle.size()];
}

std::vector<double> RewardChain::values(std::size_t n) const {
  std::vector<double> out;
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) out.push_back(acc += at(i));
  return out;
}

double RewardChain::average() const {
  if (cycle.empty()) throw std::invalid_argument("reward chain needs a non-empty cycle");
  double s = 0;
  for (double r : cycle) s += r;
  return s / static_cast<double>(cycle.size());
}

DominanceVerdict check_eventual_dominance(const RewardChain& a, const RewardChain& b, std::size_t n_max,
                                          double tolerance) {
  if (n_max == 0) throw std::invalid_argument("horizon must be at least 1");
  const auto va = a.values(n_max), vb = b.values(n_max);
  std::vector<int> signs;
  for (std::size_t i = 0; i < n_max; ++i) {
    const double d = va[i] - vb[i];
    signs.push_back(std::fabs(d) <= tolerance ? 0 : d > 0 ? 1 : -1);
  }
  return classify(std::move(signs), default_window(n_max));
}

Json to_json(const DominanceVerdict& v) {
  Json j = {{"relation", std::string(to_string(v.relation))},
            {"horizon", v.horizon},
            {"window", v.window},
            {"signs", v.signs}};
  j["n_found"] = v.n_found ? Json(*v.n_found) : Json(nullptr);
  j["weak_first_n"] = v.weak_first_n ? Json(*v.weak_first_n) : Json(nullptr);
  j["weak_second_n"] = v.weak_second_n ? Json(*v.weak_second_n) : Json(nullptr);
  return j;
}

}  // namespace rewardkit::sim
