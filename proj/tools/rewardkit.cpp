// rewardkit command-line entry point: design, check, simulate, gallery, serve.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "rewardkit/axiom/checks.hpp"
#include "rewardkit/design/design.hpp"
#include "rewardkit/gallery/gallery.hpp"
#include "rewardkit/oracle/json.hpp"
#include "rewardkit/service/http.hpp"
#include "rewardkit/sim/dominance.hpp"
#include "rewardkit/sim/rollout.hpp"

using namespace rewardkit;

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return Json::parse(in);
}

void emit(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("cannot write " + out);
}

/// "--family" accepts a JSON file or an inline "max_len:q" generator (default 2:4).
axiom::LotteryFamily load_family(const std::string& text, const Alphabet& alphabet) {
  if (std::filesystem::exists(text)) return axiom::family_from_json(read_json(text), alphabet);
  std::size_t max_len = 2;
  int q = 4;
  if (!text.empty()) {
    const auto colon = text.find(':');
    max_len = std::stoul(text.substr(0, colon));
    if (colon != std::string::npos) q = std::stoi(text.substr(colon + 1));
  }
  return axiom::LotteryFamily::generate(alphabet, max_len, q);
}

struct DesignArgs {
  std::string oracle, out;
  double epsilon = 1e-6;
  std::uint64_t budget = 0;
  bool relaxed = false;
};

int run_design(const DesignArgs& a) {
  auto oracle = oracle_from_json(read_json(a.oracle));
  design::DesignOptions opt;
  opt.epsilon = a.epsilon;
  opt.relaxed = a.relaxed;
  if (a.budget) opt.query_budget = a.budget;
  try {
    emit(design::to_json(design::design_reward(*oracle, opt)), a.out);
    return 0;
  } catch (const design::ContinuityFailure& e) {
    emit({{"error", "continuity"}, {"message", e.what()}, {"witness", axiom::to_json(e.witness, oracle->alphabet())}},
         a.out);
  } catch (const design::DiscountOutOfRange& e) {
    emit({{"error", "discount-range"}, {"message", e.what()}}, a.out);
  } catch (const std::domain_error& e) {
    emit({{"error", "not-markov"}, {"message", e.what()}}, a.out);
  }
  return 2;
}

struct CheckArgs {
  std::string axiom = "all", oracle, family, out, gamma_range = "unit";
  std::uint64_t max_instances = 200'000;
  bool serial = false;
};

int run_check(const CheckArgs& a) {
  auto oracle = oracle_from_json(read_json(a.oracle));
  const auto family = load_family(a.family, oracle->alphabet());
  axiom::CheckOptions opt;
  opt.max_instances = a.max_instances;
  opt.mode = a.serial ? axiom::ExecutionMode::Serial : axiom::ExecutionMode::Parallel;
  const auto range = a.gamma_range == "nonneg" ? axiom::GammaRange::NonNegative : axiom::GammaRange::Unit;
  std::vector<axiom::AxiomReport> reports;
  if (a.axiom == "all")
    reports = axiom::check_all(*oracle, family, opt, range);
  else
    reports.push_back(axiom::check_axiom(axiom::parse_axiom(a.axiom), *oracle, family, opt, range));
  Json j = Json::array();
  bool all_passed = true;
  for (const auto& r : reports) {
    j.push_back(axiom::to_json(r, oracle->alphabet()));
    all_passed = all_passed && r.passed();
    std::cerr << axiom::summary(r) << '\n';
  }
  emit(j, a.out);
  return all_passed ? 0 : 1;
}

struct SimulateArgs {
  std::string env, policy, policy2, spec, oracle, out;
  std::size_t nmax = 16;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
};

int run_simulate(const SimulateArgs& a) {
  gallery::register_scripts();
  auto env = sim::env_from_json(read_json(a.env));
  auto pi = sim::policy_from_json(read_json(a.policy), *env);
  Json j;
  std::optional<RewardSpec> spec;
  if (!a.spec.empty()) spec = reward_spec_from_json(read_json(a.spec));
  if (spec) {
    const auto* tenv = dynamic_cast<const sim::TabularEnv*>(env.get());
    const auto* tpol = dynamic_cast<const sim::TabularPolicy*>(pi.get());
    std::vector<double> values;
    if (tenv && tpol) {
      values = sim::n_step_values_dp(*tenv, *tpol, *spec, a.nmax);
      j["method"] = "dynamic-programming";
    } else {
      for (std::size_t n = 1; n <= a.nmax; ++n) values.push_back(sim::n_step_value(*env, *pi, *spec, n));
      j["method"] = "enumeration";
    }
    j["values"] = values;
    if (a.samples) {
      auto mc = sim::monte_carlo_value(*env, *pi, *spec, a.nmax, a.samples, a.seed);
      j["monte_carlo"] = {{"n", a.nmax}, {"mean", mc.mean}, {"standard_error", mc.standard_error}, {"samples", mc.samples}};
    }
  } else {
    j["distribution"] = to_json(sim::rollout_distribution(*env, *pi, a.nmax));
  }
  if (!a.policy2.empty()) {
    auto pi2 = sim::policy_from_json(read_json(a.policy2), *env);
    if (spec) j["dominance_by_reward"] = sim::to_json(sim::compare_policies_by_reward(*spec, *env, *pi, *pi2, a.nmax));
    if (!a.oracle.empty()) {
      auto oracle = oracle_from_json(read_json(a.oracle));
      j["dominance_by_goal"] = sim::to_json(sim::compare_policies_by_goal(*oracle, *env, *pi, *pi2, a.nmax));
    }
  }
  emit(j, a.out);
  return 0;
}

int run_gallery(const std::string& name, const std::string& out) {
  gallery::register_scripts();
  std::vector<gallery::CaseResult> results;
  if (name == "all")
    results = gallery::run_all();
  else
    results.push_back(gallery::run_case(name));
  Json j = Json::array();
  bool ok = true;
  for (const auto& r : results) {
    j.push_back(gallery::to_json(r));
    ok = ok && r.passed();
    std::cerr << (r.passed() ? "ok   " : "FAIL ") << r.name << '\n';
  }
  emit(j, out);
  return ok ? 0 : 1;
}

int run_serve(const std::string& host, int port, const std::string& data_dir) {
  gallery::register_scripts();
  service::SessionStore store(data_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(data_dir));
  const auto restored = store.load();
  service::Service svc(store);
  std::cerr << "restored " << restored << " session(s); listening on " << host << ':' << port << '\n';
  service::serve(svc, host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reward design from preferences over lotteries of histories"};
  app.require_subcommand(1);

  DesignArgs design_args;
  auto* design = app.add_subcommand("design", "Elicit a Markov reward and discount from an oracle");
  design->add_option("--oracle", design_args.oracle, "Oracle config (JSON)")->required()->check(CLI::ExistingFile);
  design->add_option("--epsilon", design_args.epsilon, "Indifference-point resolution")->check(CLI::Range(1e-15, 1.0));
  design->add_option("--out", design_args.out, "Output file (default stdout)");
  design->add_option("--budget", design_args.budget, "Maximum number of comparisons");
  design->add_flag("--relaxed", design_args.relaxed, "Accept discounts above 1");

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Run axiom falsifiers against an oracle");
  check->add_option("--axiom", check_args.axiom, "Axiom id or 'all'");
  check->add_option("--oracle", check_args.oracle, "Oracle config (JSON)")->required()->check(CLI::ExistingFile);
  check->add_option("--family", check_args.family, "Family file (JSON) or max_len:q");
  check->add_option("--max-instances", check_args.max_instances, "Instance budget per axiom");
  check->add_option("--gamma-range", check_args.gamma_range, "Discount range for the temporal axiom")
      ->check(CLI::IsMember({"unit", "nonneg"}));
  check->add_flag("--serial", check_args.serial, "Use the serial reference runner");
  check->add_option("--out", check_args.out, "Output file (default stdout)");

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Roll out a policy; values, distributions, dominance");
  simulate->add_option("--env", sim_args.env, "Environment (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--policy", sim_args.policy, "Policy (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--policy2", sim_args.policy2, "Second policy for dominance")->check(CLI::ExistingFile);
  simulate->add_option("--spec", sim_args.spec, "Reward spec (JSON)")->check(CLI::ExistingFile);
  simulate->add_option("--oracle", sim_args.oracle, "Oracle for goal dominance")->check(CLI::ExistingFile);
  simulate->add_option("--nmax", sim_args.nmax, "Horizon")->check(CLI::PositiveNumber);
  simulate->add_option("--samples", sim_args.samples, "Monte Carlo samples at the horizon");
  simulate->add_option("--seed", sim_args.seed, "Monte Carlo seed");
  simulate->add_option("--out", sim_args.out, "Output file (default stdout)");

  std::string case_name = "all", gallery_out;
  auto* gal = app.add_subcommand("gallery", "Reproduce the counterexample gallery");
  gal->add_option("case", case_name, "Case name or 'all'");
  gal->add_option("--out", gallery_out, "Output file (default stdout)");

  std::string host = "127.0.0.1", data_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the elicitation session service");
  serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--data-dir", data_dir, "Session log directory (in-memory if omitted)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*design) return run_design(design_args);
    if (*check) return run_check(check_args);
    if (*simulate) return run_simulate(sim_args);
    if (*gal) return run_gallery(case_name, gallery_out);
    if (*serve) return run_serve(host, port, data_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
