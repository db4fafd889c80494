#pragma once

// Falsifiers for the rationality axioms. Each check enumerates (or samples) a
// finite instance space built from a LotteryFamily and reports the first
// violating instance in index order. "passed-on-family" only means no
// violation was found on that family.
//
// Closed-world oracles: an out-of-table query skips the instance (counted in
// `skipped`), except for completeness where a missing answer is the violation.
// Impure oracles (human sessions) always run serially.

#include <map>
#include <optional>

#include "rewardkit/axiom/family.hpp"
#include "rewardkit/axiom/report.hpp"
#include "rewardkit/axiom/runner.hpp"

namespace rewardkit::axiom {

struct CheckOptions {
  std::uint64_t max_instances = 200'000;
  std::uint64_t seed = 0x5eed;
  ExecutionMode mode = ExecutionMode::Parallel;
};

AxiomReport check_completeness(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt = {});
AxiomReport check_transitivity(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt = {});
AxiomReport check_independence(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt = {});

/// Which lottery the mixture is compared against.
///   Axiom:     mix(p, A, C) vs B   (the axiom as stated)
///   TargetTop: mix(p, B, C) vs A   (the reading used for the CMDP argument)
enum class ContinuityRole { Axiom, TargetTop };

struct ContinuityOptions {
  double epsilon_p = 1e-4;
  ContinuityRole role = ContinuityRole::Axiom;
  /// Triples drawn from a family by check_continuity_family.
  std::uint64_t max_triples = 2'000;
};

/// Single triple with A >= B >= C; throws std::invalid_argument otherwise.
AxiomReport check_continuity(PreferenceOracle& oracle, const Lottery& a, const Lottery& b, const Lottery& c,
                             const ContinuityOptions& copt = {});
/// Triples i<j<k from family.lotteries, ordered by the oracle before checking.
/// Triples the oracle cannot order (out of table) are skipped.
AxiomReport check_continuity_family(PreferenceOracle& oracle, const LotteryFamily& family,
                                    const ContinuityOptions& copt = {}, const CheckOptions& opt = {});

enum class GammaRange { Unit, NonNegative };

struct GammaOptions {
  /// Candidate mode when set (every transition must be present); solve mode otherwise.
  std::optional<std::map<Transition, Rational>> candidate;
  GammaRange range = GammaRange::Unit;
  /// Solved gamma is rounded to a rational with at most this denominator.
  std::int64_t max_denominator = 1'000'000;
  /// Slack when testing solved gamma against the range bounds.
  double range_tolerance = 1e-9;
  /// Resolution of the mixture-weight bisection used when the oracle exposes no utility.
  double weight_epsilon = 1e-9;
};

/// Temporal gamma-Indifference: mix(w, t.A, B) ~ mix(w, t.B, A) with w = 1/(gamma(t)+1).
/// Solve mode reports the solved gamma per transition under details.gamma.
AxiomReport check_temporal_gamma_indifference(PreferenceOracle& oracle, const LotteryFamily& family,
                                              const GammaOptions& gopt = {}, const CheckOptions& opt = {});

/// Solved gamma per transition from a solve-mode report (transitions whose
/// gamma could not be determined are absent).
std::map<Transition, double> solved_gamma(const AxiomReport& report);

AxiomReport check_memoryless(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt = {});
AxiomReport check_additivity(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt = {});
AxiomReport check_sequential_consistency(PreferenceOracle& oracle, const LotteryFamily& family,
                                         const CheckOptions& opt = {});

/// Everything above with default per-axiom options (continuity over family triples,
/// temporal gamma-indifference in solve mode with the given range).
std::vector<AxiomReport> check_all(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt = {},
                                   GammaRange range = GammaRange::Unit);

AxiomReport check_axiom(AxiomId id, PreferenceOracle& oracle, const LotteryFamily& family,
                        const CheckOptions& opt = {}, GammaRange range = GammaRange::Unit);

}  // namespace rewardkit::axiom
