#include "rewardkit/oracle/utility_oracle.hpp"

#include <cmath>

namespace rewardkit {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Verdict sign_with_band(double diff, double eps) {
  if (std::fabs(diff) <= eps) return Verdict::Indifferent;
  return diff > 0 ? Verdict::Greater : Verdict::Less;
}

const CmdpOutcome& cmdp_lookup(const CmdpKind& kind, const History& h) {
  auto it = kind.outcomes.find(h);
  if (it == kind.outcomes.end()) throw OutOfTable("cmdp table has no outcome for this history");
  return it->second;
}

double total_return(const History& h, const RiskKind& kind) {
  double g = 0.0;
  for (const auto& t : h.steps()) {
    auto it = kind.rewards.find(t);
    if (it == kind.rewards.end()) throw AlphabetMismatch("risk oracle has no reward for a transition");
    g += it->second;
  }
  return g;
}

double linear_utility(const Lottery& l, const UtilityOracleConfig& config) {
  return std::visit(overloaded{[&](const MarkovKind& k) {
                                 return l.expectation([&](const History& h) { return markov_utility(h, k.spec); });
                               },
                               [&](const HistoryUtilityKind& k) {
                                 return l.expectation([&](const History& h) {
                                   auto it = k.utilities.find(h);
                                   if (it == k.utilities.end()) throw OutOfTable("history utility table miss");
                                   return it->second;
                                 });
                               },
                               [](const auto&) -> double { throw std::logic_error("not an expected-utility kind"); }},
                    config.kind);
}

}  // namespace

void UtilityOracleConfig::validate() const {
  if (!(epsilon_u > 0.0)) throw std::invalid_argument("indifference tolerance must be positive");
  if (const auto* r = std::get_if<RiskKind>(&kind); r && r->lambda < 0.0)
    throw std::invalid_argument("risk lambda must be non-negative");
  if (const auto* m = std::get_if<MarkovKind>(&kind)) m->spec.validate();
}

double cmdp_expected_constraint(const Lottery& l, const CmdpKind& kind) {
  return l.expectation([&](const History& h) { return cmdp_lookup(kind, h).constraint; });
}

double cmdp_expected_base(const Lottery& l, const CmdpKind& kind) {
  return l.expectation([&](const History& h) { return cmdp_lookup(kind, h).base; });
}

double risk_objective(const Lottery& l, const RiskKind& kind) {
  double mean = l.expectation([&](const History& h) { return total_return(h, kind); });
  double var = l.expectation([&](const History& h) {
    double d = total_return(h, kind) - mean;
    return d * d;
  });
  return mean - kind.lambda * var;
}

Verdict compare_by_utility(const Lottery& a, const Lottery& b, const UtilityOracleConfig& config) {
  const double eps = config.epsilon_u;
  return std::visit(
      overloaded{[&](const CmdpKind& k) {
                   // Feasibility is decided on exact weights against the threshold band.
                   const bool fa = cmdp_expected_constraint(a, k) >= k.threshold - eps;
                   const bool fb = cmdp_expected_constraint(b, k) >= k.threshold - eps;
                   if (fa != fb) return fa ? Verdict::Greater : Verdict::Less;
                   return sign_with_band(cmdp_expected_base(a, k) - cmdp_expected_base(b, k), eps);
                 },
                 [&](const RiskKind& k) { return sign_with_band(risk_objective(a, k) - risk_objective(b, k), eps); },
                 [&](const auto&) {
                   if (a == b) return Verdict::Indifferent;
                   return sign_with_band(linear_utility(a, config) - linear_utility(b, config), eps);
                 }},
      config.kind);
}

UtilityOracle::UtilityOracle(Alphabet alphabet, UtilityOracleConfig config)
    : PreferenceOracle(std::move(alphabet)), config_(std::move(config)) {
  config_.validate();
}

std::unique_ptr<UtilityOracle> UtilityOracle::markov(RewardSpec spec, double epsilon_u) {
  Alphabet alphabet = spec.alphabet();
  return std::make_unique<UtilityOracle>(std::move(alphabet), UtilityOracleConfig{MarkovKind{std::move(spec)}, epsilon_u});
}

std::string UtilityOracle::kind() const {
  return std::visit(overloaded{[](const MarkovKind&) { return std::string("markov"); },
                               [](const HistoryUtilityKind&) { return std::string("history-utility"); },
                               [](const CmdpKind&) { return std::string("cmdp"); },
                               [](const RiskKind&) { return std::string("risk"); }},
                    config_.kind);
}

std::optional<double> UtilityOracle::utility(const Lottery& l) const {
  if (std::holds_alternative<MarkovKind>(config_.kind) || std::holds_alternative<HistoryUtilityKind>(config_.kind))
    return linear_utility(l, config_);
  return std::nullopt;
}

Verdict UtilityOracle::evaluate(const Lottery& a, const Lottery& b) { return compare_by_utility(a, b, config_); }

}  // namespace rewardkit
