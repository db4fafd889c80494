#pragma once

#include <map>
#include <memory>
#include <variant>

#include "rewardkit/oracle/oracle.hpp"
#include "rewardkit/oracle/reward_spec.hpp"

namespace rewardkit {

inline constexpr double kDefaultIndifferenceTolerance = 1e-9;

struct MarkovKind {
  RewardSpec spec;
};

/// Arbitrary utility per history (closed world: unknown histories throw OutOfTable).
struct HistoryUtilityKind {
  std::map<History, double> utilities;
};

struct CmdpOutcome {
  double base = 0.0;        // cumulative r1
  double constraint = 0.0;  // cumulative r2
};

/// Maximize expected r1 subject to expected r2 >= threshold. Feasible lotteries
/// beat infeasible ones; within one feasibility class expected r1 decides
/// (the infeasible-vs-infeasible rule is our completion).
struct CmdpKind {
  std::map<History, CmdpOutcome> outcomes;
  double threshold = 0.0;
};

/// J(D) = E[G] - lambda Var[G] with G the undiscounted sum of per-transition rewards.
struct RiskKind {
  std::map<Transition, double> rewards;
  double lambda = 0.0;
};

struct UtilityOracleConfig {
  std::variant<MarkovKind, HistoryUtilityKind, CmdpKind, RiskKind> kind;
  double epsilon_u = kDefaultIndifferenceTolerance;

  void validate() const;
};

/// Expected-utility style comparison per the configured kind.
Verdict compare_by_utility(const Lottery& a, const Lottery& b, const UtilityOracleConfig& config);

/// Expected r2 of a cmdp lottery; used by analytic feasibility certificates.
double cmdp_expected_constraint(const Lottery& l, const CmdpKind& kind);
double cmdp_expected_base(const Lottery& l, const CmdpKind& kind);
/// J of a lottery under the risk kind.
double risk_objective(const Lottery& l, const RiskKind& kind);

class UtilityOracle final : public PreferenceOracle {
 public:
  UtilityOracle(Alphabet alphabet, UtilityOracleConfig config);

  static std::unique_ptr<UtilityOracle> markov(RewardSpec spec, double epsilon_u = kDefaultIndifferenceTolerance);

  const UtilityOracleConfig& config() const { return config_; }
  std::string kind() const override;
  /// Defined for the markov and history-utility kinds only.
  std::optional<double> utility(const Lottery& l) const override;

 protected:
  Verdict evaluate(const Lottery& a, const Lottery& b) override;

 private:
  UtilityOracleConfig config_;
};

}  // namespace rewardkit
