#pragma once

// Instance enumeration for the falsifiers.
//
// A check is a kernel over instance indices 0..space-1. Indices are either
// enumerated exhaustively or, past the budget, drawn as a seeded sorted
// sample. The serial runner is the reference; the parallel runner partitions
// the same index list over OpenMP threads and must produce an identical
// summary: every index is evaluated (no early exit), counters are summed and
// the witness is the one with the lowest index.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rewardkit/axiom/report.hpp"

namespace rewardkit::axiom {

enum class ExecutionMode { Serial, Parallel };

struct InstanceOutcome {
  enum Kind : std::uint8_t { Pass, Skip, Violation };
  Kind kind = Pass;
  std::optional<Witness> witness;

  static InstanceOutcome pass() { return {}; }
  static InstanceOutcome skip() { return {Skip, std::nullopt}; }
  static InstanceOutcome violation(Witness w) { return {Violation, std::move(w)}; }
};

/// Kernels may throw OutOfTable; the runner records the instance as skipped.
using Kernel = std::function<InstanceOutcome(std::uint64_t)>;

struct RunSummary {
  std::uint64_t evaluated = 0;
  std::uint64_t skipped = 0;
  std::uint64_t violations = 0;
  std::optional<std::uint64_t> witness_index;
  std::optional<Witness> witness;
};

/// All of 0..space-1 if space <= budget, else `budget` distinct indices drawn
/// with the seed, ascending.
std::vector<std::uint64_t> select_instances(std::uint64_t space, std::uint64_t budget, std::uint64_t seed);

RunSummary run_serial(const std::vector<std::uint64_t>& indices, const Kernel& kernel);
RunSummary run_parallel(const std::vector<std::uint64_t>& indices, const Kernel& kernel);
RunSummary run_instances(const std::vector<std::uint64_t>& indices, const Kernel& kernel, ExecutionMode mode);

/// Threads the parallel runner will use (1 without OpenMP).
int parallel_threads();

/// Decoders for the index spaces used by the checkers.
struct PairIndex {
  std::size_t i;
  std::size_t j;
};
/// Pairs i < j of n items, row-major: (0,1), (0,2), ..., (1,2), ...
std::uint64_t pair_count(std::size_t n);
PairIndex decode_pair(std::uint64_t k, std::size_t n);

/// Triples i < j < k of n items in lexicographic order.
std::uint64_t triple_count(std::size_t n);

/// Mixed-radix decoding, first dimension most significant. The product of
/// `dims` must fit in 64 bits (space_size saturates and callers reject that).
std::uint64_t space_size(const std::vector<std::uint64_t>& dims);
std::vector<std::uint64_t> decode(std::uint64_t index, const std::vector<std::uint64_t>& dims);

}  // namespace rewardkit::axiom
