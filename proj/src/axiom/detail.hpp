#pragma once

#include "rewardkit/axiom/checks.hpp"

namespace rewardkit::axiom::detail {

inline ExecutionMode effective_mode(const PreferenceOracle& oracle, ExecutionMode requested) {
  return oracle.is_pure() ? requested : ExecutionMode::Serial;
}

inline WitnessQuery ask(PreferenceOracle& oracle, const Lottery& a, const Lottery& b) {
  return {a, b, oracle.compare(a, b)};
}

inline std::string verdict_name(Verdict v) { return std::string(rewardkit::to_string(v)); }

/// Runs `kernel` over the selected part of a space of `space` instances and
/// fills the bookkeeping fields of `report`.
inline RunSummary run_space(AxiomReport& report, PreferenceOracle& oracle, std::uint64_t space,
                            std::uint64_t per_instance_queries, const Kernel& kernel, const CheckOptions& opt) {
  const auto indices = select_instances(space, opt.max_instances, opt.seed);
  const auto before = oracle.queries();
  auto summary = run_instances(indices, kernel, effective_mode(oracle, opt.mode));
  report.queries += oracle.queries() - before;
  report.query_bound += per_instance_queries * indices.size();
  report.instance_space += space;
  report.instances += summary.evaluated;
  report.skipped += summary.skipped;
  report.violations += summary.violations;
  report.exhaustive = report.exhaustive && indices.size() == space;
  if (summary.witness && !report.witness) {
    report.status = Status::Violated;
    report.witness = summary.witness;
    report.witness->params["instance_index"] = *summary.witness_index;
  }
  return summary;
}

}  // namespace rewardkit::axiom::detail
