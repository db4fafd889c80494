#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rewardkit/lottery/json.hpp"
#include "rewardkit/oracle/oracle.hpp"

namespace rewardkit::axiom {

enum class AxiomId {
  Completeness,
  Transitivity,
  Independence,
  Continuity,
  TemporalGammaIndifference,
  Memoryless,
  Additivity,
  SequentialConsistency,
};

/// Stable identifiers used on the command line and in reports.
std::string_view to_string(AxiomId id);
/// Accepts the identifiers above plus "axiom1".."axiom5".
AxiomId parse_axiom(std::string_view text);
const std::vector<AxiomId>& all_axioms();

enum class Status { PassedOnFamily, Violated };
std::string_view to_string(Status s);

/// Extra colour on a violation. Unsatisfiable: no parameter value can repair
/// the instance (temporal gamma-indifference solve mode). ResolutionLimited: the verdict is the
/// best a black-box search at the configured resolution can say.
enum class Qualifier { None, Unsatisfiable, ResolutionLimited };
std::string_view to_string(Qualifier q);

/// One compare call and what the oracle said.
struct WitnessQuery {
  Lottery lhs;
  Lottery rhs;
  Verdict observed = Verdict::Indifferent;
};

struct Witness {
  std::vector<WitnessQuery> queries;
  Json params = Json::object();
  std::string explanation;
};

struct AxiomReport {
  AxiomId axiom = AxiomId::Completeness;
  Status status = Status::PassedOnFamily;
  Qualifier qualifier = Qualifier::None;
  std::optional<Witness> witness;

  std::uint64_t queries = 0;        // oracle counter delta over the whole check
  std::uint64_t query_bound = 0;    // declared upper bound for `queries`
  std::uint64_t instance_space = 0; // size of the full instance space
  std::uint64_t instances = 0;      // instances evaluated
  std::uint64_t skipped = 0;        // out-of-table or vacuous instances
  std::uint64_t violations = 0;
  bool exhaustive = true;
  Json details = Json::object();

  bool passed() const { return status == Status::PassedOnFamily; }
};

Json to_json(const AxiomReport& r, const Alphabet& alphabet);
Json to_json(const Witness& w, const Alphabet& alphabet);
Witness witness_from_json(const Json& j);

/// Re-issue the witness's compare calls; true iff every verdict repeats.
bool replay(PreferenceOracle& oracle, const Witness& witness);

/// One-line human summary ("violated (unsatisfiable): ...").
std::string summary(const AxiomReport& r);

}  // namespace rewardkit::axiom
