#pragma once

// Reward and discount design from a preference oracle: sort the probe
// histories, scale each against the best/worst probe by bisection on the
// mixture weight, and read r and gamma off the recovered utilities.

#include <optional>
#include <stdexcept>
#include <vector>

#include "rewardkit/axiom/report.hpp"
#include "rewardkit/oracle/oracle.hpp"
#include "rewardkit/oracle/reward_spec.hpp"

namespace rewardkit::design {

/// The oracle had no verdict (unanswered or out of table) for this pair.
class IncompleteOracle : public std::runtime_error {
 public:
  IncompleteOracle(Lottery lhs, Lottery rhs);
  Lottery lhs;
  Lottery rhs;
};

/// The oracle's answers are not monotone in the mixture weight, so no
/// indifference point can be trusted (a continuity/independence failure).
class ContinuityFailure : public std::runtime_error {
 public:
  ContinuityFailure(const std::string& what, axiom::Witness witness);
  axiom::Witness witness;
};

/// Recovered gamma outside [0,1] by more than the clamp tolerance.
class DiscountOutOfRange : public std::runtime_error {
 public:
  DiscountOutOfRange(const std::string& what, Transition t, double gamma);
  Transition transition;
  double gamma;
};

class QueryBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stable merge sort, ascending by preference. Comparisons <= n ceil(log2 n).
std::vector<Lottery> pref_sort(PreferenceOracle& oracle, std::vector<Lottery> items);
/// Same, returning the permutation (sorted position -> input index).
std::vector<std::size_t> pref_sort_order(PreferenceOracle& oracle, const std::vector<Lottery>& items);

struct IndifferencePoint {
  double p = 0;          // weight on `best`
  Rational lo, hi;       // final bracket (lo == hi when an exact indifference was hit)
  int iterations = 0;    // bisection steps, excluding the two boundary queries
  bool exact = false;
};

/// p with X ~ mix(p, best, worst), by bisection on dyadic p until the bracket
/// is at most epsilon wide. Requires worst <= X <= best.
IndifferencePoint indifference_point(PreferenceOracle& oracle, const Lottery& x, const Lottery& best,
                                     const Lottery& worst, double epsilon);

struct ScaleFactors {
  std::vector<double> p;  // per probe, in the sorted order given
  std::vector<int> iterations;
  std::size_t worst = 0;
  std::size_t best = 0;
  bool degenerate = false;  // best ~ worst: every p is 0
};

/// Probes must be sorted ascending. Anchors get p = 0 / 1 without search.
ScaleFactors pref_scale(PreferenceOracle& oracle, const std::vector<Lottery>& sorted, double epsilon);

struct DesignOptions {
  double epsilon = 1e-6;
  /// gamma outside [0,1] by at most this much is clamped and flagged; beyond it design fails.
  double gamma_clamp_tolerance = 1e-4;
  /// Accept any gamma >= 0 (relaxed specs).
  bool relaxed = false;
  std::optional<std::uint64_t> query_budget;
  /// Fit the recovered-vs-reference scale when the oracle exposes a utility.
  bool reference_scale = true;
};

struct TransitionDiagnostics {
  Transition transition;
  double u_single = 0;             // u(t)
  std::optional<double> u_double;  // u(t.t)
  bool auxiliary = false;          // gamma from u(t.t*) instead of u(t.t)
  std::optional<double> u_auxiliary;
  bool clamped = false;
  bool identifiable = true;
};

struct DesignDiagnostics {
  std::uint64_t comparisons = 0;  // oracle counter delta over the whole run
  std::uint64_t sort_comparisons = 0;
  std::uint64_t scale_comparisons = 0;
  std::uint64_t auxiliary_comparisons = 0;
  std::size_t probes = 0;  // |T1 u T2|
  std::vector<History> sorted_probes;
  std::vector<double> probe_p;  // aligned with sorted_probes
  std::vector<int> probe_iterations;
  std::optional<History> reference_transition;  // t* for auxiliary probes
  std::vector<TransitionDiagnostics> transitions;
  bool constant_relation = false;
  /// Least-squares c with u_recovered ~ c (u_ref - u_ref(eps)) on the probes, when
  /// the oracle exposes a utility.
  std::optional<double> scale;
  std::optional<double> scale_residual;
  double epsilon = 0;
};

struct DesignResult {
  RewardSpec spec;
  DesignDiagnostics diagnostics;
};

DesignResult design_reward(PreferenceOracle& oracle, const DesignOptions& options = {});

Json to_json(const DesignDiagnostics& d, const Alphabet& alphabet);
/// {"spec": RewardSpec, "diagnostics": ...}
Json to_json(const DesignResult& r);

}  // namespace rewardkit::design
