#include "rewardkit/gallery/gallery.hpp"

#include <cmath>

#include "rewardkit/design/design.hpp"
#include "rewardkit/sim/dominance.hpp"

namespace rewardkit::gallery {

bool CaseResult::passed() const {
  if (claims.empty()) return false;
  for (const auto& c : claims)
    if (!c.ok) return false;
  return true;
}

Json to_json(const CaseResult& r) {
  Json cs = Json::array();
  for (const auto& c : r.claims)
    cs.push_back({{"checker", c.checker},
                  {"expected", c.expected},
                  {"observed", c.observed},
                  {"ok", c.ok},
                  {"detail", c.detail}});
  return {{"case", r.name}, {"summary", r.summary}, {"passed", r.passed()}, {"claims", cs}};
}

namespace {

Claim claim(std::string checker, std::string expected, std::string observed, Json detail = nullptr) {
  Claim c{std::move(checker), std::move(expected), std::move(observed), false, std::move(detail)};
  c.ok = c.expected == c.observed;
  return c;
}

std::string status_of(const axiom::AxiomReport& r) {
  if (r.qualifier == axiom::Qualifier::Unsatisfiable) return "unsatisfiable";
  return r.passed() ? "passed-on-family" : "violated";
}

Lottery half(const Lottery& x, const Lottery& y) { return mix(Rational(1, 2), x, y); }

History path(const Alphabet& alpha, const std::vector<std::string>& names) {
  std::vector<Transition> ts;
  for (const auto& n : names) ts.push_back(alpha.parse_name(n));
  return History(std::move(ts));
}

}  // namespace

SteadyState steady_state() {
  sim::TabularEnv::Spec s;
  s.observations = {"s0", "s1"};
  s.actions = {"a1", "a2"};
  s.states = {"s0", "s1"};
  s.observation_of = {0, 1};
  s.initial = {{0, 1}};
  // a1 in s0 moves right, a2 stays; s1 is absorbing.
  s.transition = {{{{1, 1}}, {{0, 1}}}, {{{1, 1}}, {{1, 1}}}};
  using Key = sim::TabularPolicy::Key;
  const std::vector<std::string> acts{"a1", "a2"}, states{"s0", "s1"};
  SteadyState out;
  out.env = std::make_unique<sim::TabularEnv>(std::move(s));
  out.pi21 = std::make_unique<sim::TabularPolicy>(Key::State, std::vector<sim::Dist<SymbolId>>{{{1, 1}}, {{0, 1}}},
                                                  acts, states);
  out.pi22 = std::make_unique<sim::TabularPolicy>(Key::State, std::vector<sim::Dist<SymbolId>>{{{1, 1}}, {{1, 1}}},
                                                  acts, states);
  return out;
}

Entailment entailment() {
  Entailment e;
  e.alphabet = Alphabet({"s1", "s2"}, {"a1", "a2"});
  const auto& al = e.alphabet;
  e.a = Lottery::dirac(path(al, {"s2/a2"}));
  e.b = Lottery::dirac(path(al, {"s2/a1"}));
  e.t = al.parse_name("s1/a1");
  const Lottery t1a = Lottery::dirac(path(al, {"s1/a1", "s2/a2"}));
  const Lottery t1b = Lottery::dirac(path(al, {"s1/a1", "s2/a1"}));
  const Lottery t2a = Lottery::dirac(path(al, {"s1/a2", "s2/a2"}));
  const Lottery t2b = Lottery::dirac(path(al, {"s1/a2", "s2/a1"}));
  e.oracle = std::make_unique<TableOracle>(al, std::vector<PreferenceEntry>{
                                                   {e.a, e.b, Verdict::Indifferent},
                                                   {t1a, t1b, Verdict::Greater},
                                                   {t2b, t2a, Verdict::Greater},
                                               });
  return e;
}

namespace {

/// Histories are two-letter strings over {L, R}.
CmdpInstance cmdp(const std::map<std::string, CmdpOutcome>& table, const std::string& b1, const std::string& b2) {
  const Alphabet alpha = Alphabet::designer({"L", "R"});
  auto h = [&](const std::string& n) { return path(alpha, {n.substr(0, 1), n.substr(1, 1)}); };
  auto d = [&](const std::string& n) { return Lottery::dirac(h(n)); };
  CmdpInstance inst;
  for (const auto& [name, out] : table) inst.kind.outcomes[h(name)] = out;
  inst.kind.threshold = 0;
  inst.a = half(d("RL"), d("RR"));
  inst.b = b2.empty() ? d(b1) : half(d(b1), d(b2));
  inst.c = d("RR");
  inst.oracle = std::make_unique<UtilityOracle>(alpha, UtilityOracleConfig{inst.kind, kDefaultIndifferenceTolerance});
  return inst;
}

}  // namespace

CmdpInstance cmdp_independence() {
  return cmdp({{"LL", {3, -1}}, {"LR", {1, -2}}, {"RL", {2, -1}}, {"RR", {0, 2}}}, "LL", "");
}

CmdpInstance cmdp_continuity() {
  return cmdp({{"LL", {0, -2}}, {"LR", {1, 1}}, {"RL", {4, 3}}, {"RR", {0, -1}}}, "LR", "RR");
}

InfeasibilityCertificate cmdp_continuity_certificate(const CmdpInstance& inst) {
  // Table entries are small integers, so the doubles convert exactly.
  auto exact = [&](const Lottery& l) {
    Rational acc(0);
    for (const auto& [h, w] : l.support())
      acc += w * Rational(static_cast<std::int64_t>(inst.kind.outcomes.at(h).constraint));
    return acc;
  };
  InfeasibilityCertificate c;
  c.constraint_b = exact(inst.b);
  c.constraint_c = exact(inst.c);
  for (int k = 1; k <= 3; ++k) {
    const Rational p(k, 4);
    c.samples.emplace_back(p, exact(mix(p, inst.b, inst.c)));
  }
  // Affine in p: negative at p = 0 and non-positive at p = 1 means negative on [0,1).
  c.holds = c.constraint_c.is_negative() && !(Rational(0) < c.constraint_b) &&
            exact(inst.a) >= Rational(static_cast<std::int64_t>(inst.kind.threshold));
  for (const auto& [p, v] : c.samples) c.holds = c.holds && v == c.constraint_b * p + c.constraint_c * (Rational(1) - p);
  return c;
}

namespace {

/// Valid transitions only: n0/go, n1/go, c/low, c/high.
Alphabet risk_alphabet() { return Alphabet({"n0", "n1", "c"}, {"go", "low", "high"}, {{0, 0}, {1, 0}, {2, 1}, {2, 2}}); }

}  // namespace

Risk risk(double lambda) {
  Risk r;
  r.alphabet = risk_alphabet();
  const auto& al = r.alphabet;
  r.kind.rewards = {{al.parse_name("n0/go"), 0.0},
                    {al.parse_name("n1/go"), 1.0},
                    {al.parse_name("c/low"), 0.0},
                    {al.parse_name("c/high"), 1.0}};
  r.kind.lambda = lambda;
  r.oracle = std::make_unique<UtilityOracle>(al, UtilityOracleConfig{r.kind, kDefaultIndifferenceTolerance});
  auto d = [&](const std::string& first, const std::string& second) { return Lottery::dirac(path(al, {first, second})); };
  r.opposite = half(d("n0/go", "c/high"), d("n1/go", "c/low"));
  r.always_high = half(d("n0/go", "c/high"), d("n1/go", "c/high"));
  r.context = d("n1/go", "c/high");
  std::vector<History> base;
  for (const std::string f : {"n0/go", "n1/go"})
    for (const std::string s : {"c/low", "c/high"}) base.push_back(path(al, {f, s}));
  r.family = axiom::LotteryFamily::over(base, 4);
  r.family.prefixes = histories_up_to(al, 1);
  return r;
}

void register_scripts() {
  auto& reg = sim::ScriptRegistry::instance();
  const Alphabet al = risk_alphabet();
  reg.add_env("risk-nature", [al] {
    return std::make_unique<sim::ScriptedEnv>("risk-nature", al, [](const History& h) -> sim::Dist<SymbolId> {
      if (h.is_empty()) return {{0, Rational(1, 2)}, {1, Rational(1, 2)}};
      return {{2, 1}};
    });
  });
  // Action ids: go = 0, low = 1, high = 2.
  reg.add_policy("risk-opposite", [] {
    return std::make_unique<sim::ScriptedPolicy>("risk-opposite", [](const History& h, SymbolId o) -> sim::Dist<SymbolId> {
      if (o != 2) return {{0, 1}};
      return {{h.steps().front().observation == 0 ? SymbolId{2} : SymbolId{1}, 1}};
    });
  });
  reg.add_policy("risk-always-high", [] {
    return std::make_unique<sim::ScriptedPolicy>("risk-always-high", [](const History&, SymbolId o) -> sim::Dist<SymbolId> {
      return {{o == 2 ? SymbolId{2} : SymbolId{0}, 1}};
    });
  });
}

namespace {

CaseResult run_steady_state() {
  CaseResult res{"steady_state", "policies differing only in an unreachable state induce identical outcomes", {}};
  auto ss = steady_state();
  constexpr std::size_t kN = 8;
  bool identical = true;
  Json sizes = Json::array();
  for (std::size_t n = 1; n <= kN; ++n) {
    auto d21 = sim::rollout_distribution(*ss.env, *ss.pi21, n);
    auto d22 = sim::rollout_distribution(*ss.env, *ss.pi22, n);
    identical = identical && d21 == d22;
    sizes.push_back(d21.size());
  }
  res.claims.push_back(claim("rollout-equality", "identical", identical ? "identical" : "different",
                             {{"horizons", kN}, {"support_sizes", sizes}}));

  // Any complete oracle; a markov one rewarding the unreachable branch makes the point.
  std::map<Transition, RewardEntry> e;
  for (const auto& t : ss.env->alphabet().transitions()) e[t] = {t.observation == 1 ? 1.0 : 0.0, 0.9, true};
  auto oracle = UtilityOracle::markov(RewardSpec(ss.env->alphabet(), e));
  auto v = sim::compare_policies_by_goal(*oracle, *ss.env, *ss.pi21, *ss.pi22, kN);
  res.claims.push_back(claim("compare-policies-by-goal", "indifferent", std::string(sim::to_string(v.relation)),
                             sim::to_json(v)));
  res.claims.push_back(claim("goal-dominance-start", "1", v.n_found ? std::to_string(*v.n_found) : "none"));

  // Declared: pi21 strictly preferred. Strict preference between outcome-identical policies.
  const bool violated = identical;
  res.claims.push_back(claim("outcome-determinism", "violated", violated ? "violated" : "holds",
                             {{"declared", "pi21 > pi22"},
                              {"reason", "strict preference between policies with identical D_n for every n"}}));
  return res;
}

CaseResult run_entailment(const axiom::CheckOptions& opt) {
  CaseResult res{"entailment", "preferring opposite actions across states cannot be expressed with any discount", {}};
  auto en = entailment();
  const auto& al = en.alphabet;
  std::vector<Lottery> ls{en.a, en.b};
  std::sort(ls.begin(), ls.end());
  auto fam = axiom::LotteryFamily::of(ls);

  auto mem = axiom::check_memoryless(*en.oracle, fam, opt);
  res.claims.push_back(claim("memoryless", "violated", status_of(mem), axiom::to_json(mem, al)));
  std::string shape = "none";
  if (mem.witness) {
    const auto& p = mem.witness->params;
    const auto a = ls.at(p.at("a").get<std::size_t>()), b = ls.at(p.at("b").get<std::size_t>());
    const bool pair_ok = (a == en.a && b == en.b) || (a == en.b && b == en.a);
    shape = pair_ok && p.at("t") == al.name(en.t) ? "t=s1/a1, {A,B}={s2/a2,s2/a1}" : p.dump();
  }
  res.claims.push_back(claim("memoryless-witness", "t=s1/a1, {A,B}={s2/a2,s2/a1}", shape));

  for (auto range : {axiom::GammaRange::NonNegative, axiom::GammaRange::Unit}) {
    axiom::GammaOptions g;
    g.range = range;
    auto solve = axiom::check_temporal_gamma_indifference(*en.oracle, fam, g, opt);
    res.claims.push_back(claim(std::string("temporal-gamma-indifference/solve/") +
                                   (range == axiom::GammaRange::Unit ? "unit" : "nonnegative"),
                               "unsatisfiable", status_of(solve), axiom::to_json(solve, al)));
  }

  axiom::GammaOptions zero;
  zero.candidate = std::map<Transition, Rational>{};
  for (const auto& t : al.transitions()) (*zero.candidate)[t] = Rational(0);
  auto z = axiom::check_temporal_gamma_indifference(*en.oracle, fam, zero, opt);
  res.claims.push_back(claim("temporal-gamma-indifference/candidate-zero", "violated", z.passed() ? "passed-on-family" : "violated",
                             axiom::to_json(z, al)));
  return res;
}

CaseResult run_cmdp_independence(const axiom::CheckOptions& opt) {
  CaseResult res{"cmdp_independence", "a feasibility constraint reverses a preference under mixing", {}};
  auto inst = cmdp_independence();
  const auto& al = inst.oracle->alphabet();
  const double ra = cmdp_expected_constraint(inst.a, inst.kind);
  const double rb = cmdp_expected_constraint(inst.b, inst.kind);
  const double mixed_a = cmdp_expected_base(half(inst.a, inst.c), inst.kind);
  const double mixed_b = cmdp_expected_base(half(inst.b, inst.c), inst.kind);
  res.claims.push_back(claim("feasibility", "A feasible (1/2), B infeasible (-1)",
                             std::string(ra >= 0 ? "A feasible" : "A infeasible") + " (" +
                                 (ra == 0.5 ? "1/2" : std::to_string(ra)) + "), " +
                                 (rb >= 0 ? "B feasible" : "B infeasible") + " (" +
                                 (rb == -1 ? "-1" : std::to_string(rb)) + ")"));
  res.claims.push_back(claim("reversal-base", "0.5 < 1.5",
                             (mixed_a == 0.5 && mixed_b == 1.5) ? "0.5 < 1.5"
                                                                 : std::to_string(mixed_a) + " vs " + std::to_string(mixed_b)));

  auto fam = axiom::LotteryFamily::of({inst.a, inst.b}, {inst.c});
  auto rep = axiom::check_independence(*inst.oracle, fam, opt);
  res.claims.push_back(claim("independence", "violated", status_of(rep), axiom::to_json(rep, al)));
  std::string shape = "none";
  if (rep.witness) {
    const auto& p = rep.witness->params;
    shape = (p.at("a") == 0 && p.at("b") == 1 && p.at("c") == 0 && p.at("p") == "1/2") ? "(A,B,C=RR,p=1/2)" : p.dump();
  }
  res.claims.push_back(claim("independence-witness", "(A,B,C=RR,p=1/2)", shape));
  return res;
}

CaseResult run_cmdp_continuity(const axiom::CheckOptions&) {
  CaseResult res{"cmdp_continuity", "no mixture of B and an infeasible C breaks even with A", {}};
  auto inst = cmdp_continuity();
  const auto& al = inst.oracle->alphabet();
  auto& o = *inst.oracle;
  const bool ordered = weakly_prefers(o.compare(inst.a, inst.b)) && weakly_prefers(o.compare(inst.b, inst.c));
  res.claims.push_back(claim("ordering", "A >= B >= C", ordered ? "A >= B >= C" : "not ordered"));

  axiom::ContinuityOptions copt;
  copt.epsilon_p = 1e-4;
  copt.role = axiom::ContinuityRole::TargetTop;
  auto rep = axiom::check_continuity(o, inst.a, inst.b, inst.c, copt);
  res.claims.push_back(claim("continuity", "violated", status_of(rep), axiom::to_json(rep, al)));

  auto cert = cmdp_continuity_certificate(inst);
  Json samples = Json::array();
  for (const auto& [p, v] : cert.samples) samples.push_back({{"p", p.str()}, {"expected_r2", v.str()}});
  std::string sample_text;
  for (const auto& [p, v] : cert.samples) sample_text += (sample_text.empty() ? "" : ", ") + v.str();
  res.claims.push_back(claim("infeasibility-certificate", "holds", cert.holds ? "holds" : "fails",
                             {{"r2_B", cert.constraint_b.str()}, {"r2_C", cert.constraint_c.str()}, {"samples", samples}}));
  res.claims.push_back(claim("mixture-constraint", "-3/4, -1/2, -1/4", sample_text));
  return res;
}

CaseResult run_risk(double lambda, const axiom::CheckOptions& opt) {
  const bool averse = lambda > 2;
  CaseResult res{averse ? "risk" : "risk-neutral",
                 "mean-variance objective with lambda = " + std::to_string(lambda), {}};
  auto r = risk(lambda);
  auto& o = *r.oracle;
  const auto& al = r.alphabet;
  const double j_opp = risk_objective(r.opposite, r.kind);
  res.claims.push_back(claim("J(opposite)", "1", std::fabs(j_opp - 1.0) <= 1e-12 ? "1" : std::to_string(j_opp)));

  register_scripts();
  auto env = sim::ScriptRegistry::instance().env("risk-nature");
  auto opp = sim::ScriptRegistry::instance().policy("risk-opposite");
  const bool realized = sim::rollout_distribution(*env, *opp, 2) == r.opposite;
  res.claims.push_back(claim("opposite-policy-outcome", "history-dependent policy realizes the opposite lottery",
                             realized ? "history-dependent policy realizes the opposite lottery" : "mismatch"));

  if (averse) {
    const Verdict pref = o.compare(r.opposite, r.always_high);
    const Verdict mixed = o.compare(half(r.opposite, r.context), half(r.always_high, r.context));
    res.claims.push_back(claim("stated-witness", "opposite > always-high, reversed under mixing with C",
                               pref == Verdict::Greater && mixed == Verdict::Less
                                   ? "opposite > always-high, reversed under mixing with C"
                                   : std::string(to_string(pref)) + " / " + std::string(to_string(mixed))));
    auto rep = axiom::check_independence(o, r.family, opt);
    res.claims.push_back(claim("independence", "violated", status_of(rep), axiom::to_json(rep, al)));
    std::string outcome;
    Json detail;
    try {
      auto d = design::design_reward(o);
      outcome = "completed";
      detail = design::to_json(d);
    } catch (const design::ContinuityFailure& e) {
      outcome = "aborted";
      detail = {{"error", e.what()}, {"witness", axiom::to_json(e.witness, al)}, {"reported_as", "temporal-gamma-indifference"}};
    } catch (const design::DiscountOutOfRange& e) {
      outcome = "aborted";
      detail = {{"error", e.what()}, {"gamma", e.gamma}, {"reported_as", "temporal-gamma-indifference"}};
    }
    res.claims.push_back(claim("design", "aborted", outcome, detail));
  } else {
    auto reports = axiom::check_all(o, r.family, opt, axiom::GammaRange::Unit);
    for (const auto& rep : reports)
      res.claims.push_back(claim(std::string(axiom::to_string(rep.axiom)), "passed-on-family", status_of(rep),
                                 {{"summary", axiom::summary(rep)}}));
  }
  return res;
}

}  // namespace

std::vector<std::string> case_names() {
  return {"steady_state", "entailment", "cmdp_independence", "cmdp_continuity", "risk", "risk-neutral"};
}

CaseResult run_case(const std::string& name, const axiom::CheckOptions& opt) {
  if (name == "steady_state") return run_steady_state();
  if (name == "entailment") return run_entailment(opt);
  if (name == "cmdp_independence") return run_cmdp_independence(opt);
  if (name == "cmdp_continuity") return run_cmdp_continuity(opt);
  if (name == "risk") return run_risk(3.0, opt);
  if (name == "risk-neutral") return run_risk(0.0, opt);
  throw std::invalid_argument("unknown gallery case '" + name + "'");
}

std::vector<CaseResult> run_all(const axiom::CheckOptions& opt) {
  std::vector<CaseResult> out;
  for (const auto& n : case_names()) out.push_back(run_case(n, opt));
  return out;
}

}  // namespace rewardkit::gallery
