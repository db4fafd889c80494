#include "rewardkit/axiom/runner.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_set>

#if REWARDKIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace rewardkit::axiom {

std::vector<std::uint64_t> select_instances(std::uint64_t space, std::uint64_t budget, std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  if (space <= budget) {
    out.resize(space);
    for (std::uint64_t i = 0; i < space; ++i) out[i] = i;
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, space - 1);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(budget * 2);
  out.reserve(budget);
  while (out.size() < budget) {
    auto k = pick(rng);
    if (seen.insert(k).second) out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

/// Per-worker accumulator; merged by summing counts and keeping the lowest witness.
struct Partial {
  RunSummary summary;
  std::optional<std::uint64_t> error_index;
  std::exception_ptr error;

  void take(std::uint64_t index, InstanceOutcome&& o) {
    ++summary.evaluated;
    if (o.kind == InstanceOutcome::Skip) {
      ++summary.skipped;
    } else if (o.kind == InstanceOutcome::Violation) {
      ++summary.violations;
      if (!summary.witness_index || index < *summary.witness_index) {
        summary.witness_index = index;
        summary.witness = std::move(o.witness);
      }
    }
  }

  void fail(std::uint64_t index, std::exception_ptr e) {
    if (!error_index || index < *error_index) {
      error_index = index;
      error = std::move(e);
    }
  }

  void evaluate(std::uint64_t index, const Kernel& kernel) {
    try {
      take(index, kernel(index));
    } catch (const OutOfTable&) {
      take(index, InstanceOutcome::skip());
    } catch (...) {
      fail(index, std::current_exception());
    }
  }

  void merge(Partial&& o) {
    summary.evaluated += o.summary.evaluated;
    summary.skipped += o.summary.skipped;
    summary.violations += o.summary.violations;
    if (o.summary.witness_index && (!summary.witness_index || *o.summary.witness_index < *summary.witness_index)) {
      summary.witness_index = o.summary.witness_index;
      summary.witness = std::move(o.summary.witness);
    }
    if (o.error_index) fail(*o.error_index, std::move(o.error));
  }

  RunSummary finish() {
    if (error) std::rethrow_exception(error);
    return std::move(summary);
  }
};

}  // namespace

RunSummary run_serial(const std::vector<std::uint64_t>& indices, const Kernel& kernel) {
  Partial acc;
  for (auto index : indices) acc.evaluate(index, kernel);
  return acc.finish();
}

RunSummary run_parallel(const std::vector<std::uint64_t>& indices, const Kernel& kernel) {
#if REWARDKIT_HAVE_OPENMP
  const int threads = parallel_threads();
  std::vector<Partial> partials(static_cast<std::size_t>(threads));
  const auto n = static_cast<std::int64_t>(indices.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i)
    partials[static_cast<std::size_t>(omp_get_thread_num())].evaluate(indices[static_cast<std::size_t>(i)], kernel);
  Partial acc;
  for (auto& p : partials) acc.merge(std::move(p));
  return acc.finish();
#else
  return run_serial(indices, kernel);
#endif
}

RunSummary run_instances(const std::vector<std::uint64_t>& indices, const Kernel& kernel, ExecutionMode mode) {
  return mode == ExecutionMode::Parallel ? run_parallel(indices, kernel) : run_serial(indices, kernel);
}

int parallel_threads() {
#if REWARDKIT_HAVE_OPENMP
  return std::max(1, omp_get_max_threads());
#else
  return 1;
#endif
}

std::uint64_t pair_count(std::size_t n) {
  return n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

PairIndex decode_pair(std::uint64_t k, std::size_t n) {
  // Row i holds n-1-i pairs; find the row by solving the quadratic, then fix up.
  const double nn = static_cast<double>(n);
  auto i = static_cast<std::size_t>(std::floor(((2 * nn - 1) - std::sqrt((2 * nn - 1) * (2 * nn - 1) - 8.0 * static_cast<double>(k))) / 2));
  auto row_start = [n](std::size_t r) { return static_cast<std::uint64_t>(r) * (2 * n - r - 1) / 2; };
  while (i > 0 && row_start(i) > k) --i;
  while (i + 1 < n && row_start(i + 1) <= k) ++i;
  return {i, static_cast<std::size_t>(i + 1 + (k - row_start(i)))};
}

std::uint64_t triple_count(std::size_t n) {
  return n < 3 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) * (n - 2) / 6;
}

std::uint64_t space_size(const std::vector<std::uint64_t>& dims) {
  unsigned __int128 s = 1;
  for (auto d : dims) {
    s *= d;
    if (s > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(s);
}

std::vector<std::uint64_t> decode(std::uint64_t index, const std::vector<std::uint64_t>& dims) {
  std::vector<std::uint64_t> out(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    out[k] = index % dims[k];
    index /= dims[k];
  }
  return out;
}

}  // namespace rewardkit::axiom
