#pragma once

// Counterexample gallery. Each case bundles its environment or oracle with the
// verdicts it claims; run_case() re-derives every verdict and compares.
//
// The cmdp tables are constructed to satisfy the prose properties of each
// instance. No single table can serve both (independence needs r2(RR) > 0,
// continuity needs r2(RR) < 0), so there are two.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rewardkit/axiom/checks.hpp"
#include "rewardkit/oracle/table_oracle.hpp"
#include "rewardkit/oracle/utility_oracle.hpp"
#include "rewardkit/sim/model.hpp"

namespace rewardkit::gallery {

struct Claim {
  std::string checker;
  std::string expected;
  std::string observed;
  bool ok = false;
  Json detail;
};

struct CaseResult {
  std::string name;
  std::string summary;
  std::vector<Claim> claims;
  bool passed() const;
};

Json to_json(const CaseResult& r);

// Steady state: two states, s1 unreachable once the agent plays a2 in s0.
struct SteadyState {
  std::unique_ptr<sim::TabularEnv> env;
  std::unique_ptr<sim::TabularPolicy> pi21;  // s0 -> a2, s1 -> a1 (the declared favourite)
  std::unique_ptr<sim::TabularPolicy> pi22;  // s0 -> a2, s1 -> a2
};
SteadyState steady_state();

// Entailment: opposite actions across the two states are preferred.
struct Entailment {
  Alphabet alphabet;
  Lottery a;  // Dirac(s2,a2)
  Lottery b;  // Dirac(s2,a1)
  Transition t;  // (s1,a1)
  std::unique_ptr<TableOracle> oracle;
};
Entailment entailment();

struct CmdpInstance {
  Lottery a, b, c;
  CmdpKind kind;
  std::unique_ptr<UtilityOracle> oracle;
};
/// LL:(3,-1) LR:(1,-2) RL:(2,-1) RR:(0,2); A = RL/2 + RR/2, B = LL, C = RR.
CmdpInstance cmdp_independence();
/// RR:(0,-1) LR:(1,1) RL:(4,3) LL:(0,-2); A = RL/2 + RR/2, B = LR/2 + RR/2, C = RR.
CmdpInstance cmdp_continuity();

/// Analytic proof that mix(p, B, C) is infeasible for every p in [0,1): expected r2
/// is affine in p with value r2(C) < 0 at p = 0 and r2(B) = 0 at p = 1.
struct InfeasibilityCertificate {
  Rational constraint_b;
  Rational constraint_c;
  std::vector<std::pair<Rational, Rational>> samples;  // (p, E[r2]) at 1/4, 1/2, 3/4
  bool holds = false;
};
InfeasibilityCertificate cmdp_continuity_certificate(const CmdpInstance& inst);

// Risk: nature emits n0 or n1 (reward 0/1), then the agent plays low or high (0/1).
struct Risk {
  Alphabet alphabet;
  RiskKind kind;
  std::unique_ptr<UtilityOracle> oracle;
  Lottery opposite;     // G = 1 always
  Lottery always_high;  // G in {1, 2}
  /// Context for the independence witness: Dirac(n1/go . c/high).
  Lottery context;
  axiom::LotteryFamily family;  // all q=4 lotteries over the 4 valid two-step histories
};
Risk risk(double lambda);

/// Registers the scripted env/policies of the risk case ("risk-nature",
/// "risk-opposite", "risk-always-high"). Idempotent.
void register_scripts();

std::vector<std::string> case_names();
/// Throws std::invalid_argument for an unknown name. Risk cases are "risk" (lambda = 3) and "risk-neutral".
CaseResult run_case(const std::string& name, const axiom::CheckOptions& opt = {});
std::vector<CaseResult> run_all(const axiom::CheckOptions& opt = {});

}  // namespace rewardkit::gallery
