#include "rewardkit/axiom/report.hpp"

#include <stdexcept>

namespace rewardkit::axiom {

namespace {

struct AxiomName {
  AxiomId id;
  std::string_view name;
  std::string_view alias;
};

constexpr AxiomName kNames[] = {
    {AxiomId::Completeness, "completeness", "axiom1"},
    {AxiomId::Transitivity, "transitivity", "axiom2"},
    {AxiomId::Independence, "independence", "axiom3"},
    {AxiomId::Continuity, "continuity", "axiom4"},
    {AxiomId::TemporalGammaIndifference, "temporal-gamma-indifference", "axiom5"},
    {AxiomId::Memoryless, "memoryless", "memoryless"},
    {AxiomId::Additivity, "additivity", "additivity"},
    {AxiomId::SequentialConsistency, "sequential-consistency", "sequential-consistency"},
};

std::string render(const Lottery& l, const Alphabet& alphabet) {
  if (l.is_dirac()) return "[" + to_string(l.support().begin()->first, alphabet) + "]";
  std::string out;
  for (const auto& [h, w] : l.support()) {
    if (!out.empty()) out += " + ";
    out += w.str() + " [" + to_string(h, alphabet) + "]";
  }
  return out;
}

}  // namespace

std::string_view to_string(AxiomId id) {
  for (const auto& n : kNames)
    if (n.id == id) return n.name;
  return "?";
}

AxiomId parse_axiom(std::string_view text) {
  for (const auto& n : kNames)
    if (n.name == text || n.alias == text) return n.id;
  throw std::invalid_argument("unknown axiom '" + std::string(text) + "'");
}

const std::vector<AxiomId>& all_axioms() {
  static const std::vector<AxiomId> ids = [] {
    std::vector<AxiomId> v;
    for (const auto& n : kNames) v.push_back(n.id);
    return v;
  }();
  return ids;
}

std::string_view to_string(Status s) {
  return s == Status::PassedOnFamily ? "passed-on-family" : "violated";
}

std::string_view to_string(Qualifier q) {
  switch (q) {
    case Qualifier::None: return "none";
    case Qualifier::Unsatisfiable: return "unsatisfiable";
    case Qualifier::ResolutionLimited: return "resolution-limited";
  }
  return "none";
}

Json to_json(const Witness& w, const Alphabet& alphabet) {
  Json qs = Json::array();
  for (const auto& q : w.queries)
    qs.push_back({{"lhs", to_json(q.lhs)},
                  {"rhs", to_json(q.rhs)},
                  {"observed", std::string(rewardkit::to_string(q.observed))},
                  {"rendered", render(q.lhs, alphabet) + "  vs  " + render(q.rhs, alphabet)}});
  return {{"queries", qs}, {"params", w.params}, {"explanation", w.explanation}};
}

Witness witness_from_json(const Json& j) {
  Witness w;
  for (const auto& q : j.at("queries"))
    w.queries.push_back({lottery_from_json(q.at("lhs")), lottery_from_json(q.at("rhs")),
                         parse_verdict(q.at("observed").get<std::string>())});
  w.params = j.value("params", Json::object());
  w.explanation = j.value("explanation", std::string());
  return w;
}

Json to_json(const AxiomReport& r, const Alphabet& alphabet) {
  Json j = {{"axiom", std::string(to_string(r.axiom))},
            {"status", std::string(to_string(r.status))},
            {"qualifier", std::string(to_string(r.qualifier))},
            {"queries", r.queries},
            {"query_bound", r.query_bound},
            {"instance_space", r.instance_space},
            {"instances", r.instances},
            {"skipped", r.skipped},
            {"violations", r.violations},
            {"exhaustive", r.exhaustive},
            {"details", r.details}};
  j["witness"] = r.witness ? to_json(*r.witness, alphabet) : Json(nullptr);
  if (r.passed())
    j["note"] = "no violation found on this family; this is not a proof that the axiom holds";
  return j;
}

bool replay(PreferenceOracle& oracle, const Witness& witness) {
  for (const auto& q : witness.queries) {
    Verdict v;
    try {
      v = oracle.compare(q.lhs, q.rhs);
    } catch (const OutOfTable&) {
      v = Verdict::Unanswered;  // completeness witnesses record a missing entry this way
    }
    if (v != q.observed) return false;
  }
  return true;
}

std::string summary(const AxiomReport& r) {
  std::string s = std::string(to_string(r.axiom)) + ": " + std::string(to_string(r.status));
  if (r.qualifier != Qualifier::None) s += " (" + std::string(to_string(r.qualifier)) + ")";
  s += ", " + std::to_string(r.instances) + " instances";
  if (r.skipped) s += " (" + std::to_string(r.skipped) + " skipped)";
  if (!r.exhaustive) s += " sampled from " + std::to_string(r.instance_space);
  s += ", " + std::to_string(r.queries) + " queries";
  if (r.witness && !r.witness->explanation.empty()) s += "; " + r.witness->explanation;
  return s;
}

}  // namespace rewardkit::axiom
