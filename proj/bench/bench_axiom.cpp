// Serial reference vs OpenMP runner on the heaviest axiom falsifiers.
// Both runners must agree on the report; the benchmark aborts if they do not.

#include <benchmark/benchmark.h>

#include <random>

#include "rewardkit/axiom/checks.hpp"
#include "rewardkit/oracle/utility_oracle.hpp"

using namespace rewardkit;

namespace {

RewardSpec bench_spec(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("t" + std::to_string(i));
  Alphabet alpha = Alphabet::designer(names);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> r(-1, 1), g(0.2, 1.0);
  std::map<Transition, RewardEntry> e;
  for (const auto& t : alpha.transitions()) e[t] = {r(rng), g(rng), true};
  return RewardSpec(alpha, e);
}

using CheckFn = axiom::AxiomReport (*)(PreferenceOracle&, const axiom::LotteryFamily&, const axiom::CheckOptions&);

template <CheckFn Check>
void run(benchmark::State& state, axiom::ExecutionMode mode) {
  auto spec = bench_spec(3);
  auto oracle = UtilityOracle::markov(spec);
  auto family = axiom::LotteryFamily::generate(spec.alphabet(), 1, static_cast<int>(state.range(0)));
  axiom::CheckOptions opt;
  opt.mode = mode;
  opt.max_instances = 400'000;

  axiom::CheckOptions ref = opt;
  ref.mode = axiom::ExecutionMode::Serial;
  const auto expected = Check(*oracle, family, ref);
  std::uint64_t instances = 0;
  for (auto _ : state) {
    auto report = Check(*oracle, family, opt);
    if (report.status != expected.status || report.instances != expected.instances ||
        report.violations != expected.violations) {
      state.SkipWithError("parallel report differs from the serial reference");
      return;
    }
    instances += report.instances;
    benchmark::DoNotOptimize(report);
  }
  state.counters["lotteries"] = static_cast<double>(family.lotteries.size());
  state.counters["instances/s"] = benchmark::Counter(static_cast<double>(instances), benchmark::Counter::kIsRate);
  state.counters["threads"] = mode == axiom::ExecutionMode::Parallel ? axiom::parallel_threads() : 1;
}

void BM_Independence_Serial(benchmark::State& s) { run<axiom::check_independence>(s, axiom::ExecutionMode::Serial); }
void BM_Independence_Parallel(benchmark::State& s) { run<axiom::check_independence>(s, axiom::ExecutionMode::Parallel); }
void BM_Transitivity_Serial(benchmark::State& s) { run<axiom::check_transitivity>(s, axiom::ExecutionMode::Serial); }
void BM_Transitivity_Parallel(benchmark::State& s) { run<axiom::check_transitivity>(s, axiom::ExecutionMode::Parallel); }
void BM_Memoryless_Serial(benchmark::State& s) { run<axiom::check_memoryless>(s, axiom::ExecutionMode::Serial); }
void BM_Memoryless_Parallel(benchmark::State& s) { run<axiom::check_memoryless>(s, axiom::ExecutionMode::Parallel); }

}  // namespace

BENCHMARK(BM_Independence_Serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Independence_Parallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Transitivity_Serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Transitivity_Parallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Memoryless_Serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Memoryless_Parallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
