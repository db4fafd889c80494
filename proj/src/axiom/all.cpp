#include "rewardkit/axiom/checks.hpp"

namespace rewardkit::axiom {

AxiomReport check_axiom(AxiomId id, PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt,
                        GammaRange range) {
  switch (id) {
    case AxiomId::Completeness: return check_completeness(oracle, family, opt);
    case AxiomId::Transitivity: return check_transitivity(oracle, family, opt);
    case AxiomId::Independence: return check_independence(oracle, family, opt);
    case AxiomId::Continuity: return check_continuity_family(oracle, family, {}, opt);
    case AxiomId::TemporalGammaIndifference: {
      GammaOptions g;
      g.range = range;
      return check_temporal_gamma_indifference(oracle, family, g, opt);
    }
    case AxiomId::Memoryless: return check_memoryless(oracle, family, opt);
    case AxiomId::Additivity: return check_additivity(oracle, family, opt);
    case AxiomId::SequentialConsistency: return check_sequential_consistency(oracle, family, opt);
  }
  throw std::logic_error("unhandled axiom id");
}

std::vector<AxiomReport> check_all(PreferenceOracle& oracle, const LotteryFamily& family, const CheckOptions& opt,
                                   GammaRange range) {
  std::vector<AxiomReport> out;
  for (auto id : all_axioms()) out.push_back(check_axiom(id, oracle, family, opt, range));
  return out;
}

}  // namespace rewardkit::axiom
