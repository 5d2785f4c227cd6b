#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "abacus/estimator.hpp"
#include "abacus/versioned.hpp"

namespace abacus {

/// Per-event signed contributions c_0..c_{M-1} of one mini-batch.
struct PartialCounts {
  std::vector<double> values;
  std::vector<int128> scaled;  // filled in audit mode only
  std::vector<std::uint64_t> found;
  /// Intersection comparisons per worker group.
  std::vector<std::uint64_t> worker_comparisons;
};

/// Contiguous range of batch positions owned by worker group `g` when M
/// events are split into `workers` groups of ceil(M / workers).
struct WorkerRange {
  std::size_t begin;
  std::size_t end;
};
WorkerRange worker_range(std::size_t batch_size, unsigned workers, unsigned g);

/// Counts every batch event against its version using OpenMP threads.
/// Results do not depend on `workers` or on scheduling.
PartialCounts parallel_count(std::span<const EdgeEvent> batch,
                             const VersionedSample& versions, unsigned workers,
                             bool audit);

/// Single-threaded reference for parallel_count (same worker grouping, so
/// the comparison tallies match too).
PartialCounts serial_count(std::span<const EdgeEvent> batch,
                           const VersionedSample& versions, unsigned workers,
                           bool audit);

/// prior + sum of partials, added in ascending event order.
double aggregate(double prior, const PartialCounts& partials);
void aggregate(ExactCount& prior, const PartialCounts& partials);

struct ParAbacusOptions {
  std::size_t batch_size = 500;  // M
  unsigned workers = 1;          // p
  bool audit = false;
  bool validate = true;
  /// Use serial_count instead of the OpenMP kernel.
  bool serial_reference = false;
};

struct BatchEstimate {
  std::uint64_t offset;  // events processed so far
  double estimate;
  std::optional<ExactCount> exact;
};

/// Mini-batch estimator: build versions, count in parallel, aggregate,
/// consolidate.
class ParAbacus {
 public:
  ParAbacus(std::uint64_t budget, std::uint64_t seed, ParAbacusOptions options);

  /// Processes one mini-batch (any length >= 1).
  void process_batch(std::span<const EdgeEvent> batch);
  /// Splits `events` into batches of options.batch_size.
  void process(std::span<const EdgeEvent> events);

  const EstimateLedger& ledger() const noexcept { return ledger_; }
  const PairingState& state() const noexcept { return state_; }
  const SampleGraph& sample() const noexcept { return sample_; }
  double estimate() const noexcept { return ledger_.estimate; }
  const std::vector<BatchEstimate>& batches() const noexcept { return batches_; }
  /// Accumulated comparison tallies, one per worker group.
  const std::vector<std::uint64_t>& load() const noexcept { return load_; }
  /// Largest delta (added + removed edges) held by any batch.
  std::size_t peak_delta_edges() const noexcept { return peak_delta_; }

  EstimateLedger take_ledger() && { return std::move(ledger_); }
  PairingState take_state() && { return std::move(state_); }
  SampleGraph take_sample() && { return std::move(sample_); }

 private:
  ParAbacusOptions options_;
  PairingState state_;
  SampleGraph sample_;
  EstimateLedger ledger_;
  std::optional<StreamValidityState> validity_;
  std::vector<BatchEstimate> batches_;
  std::vector<std::uint64_t> load_;
  std::size_t peak_delta_ = 0;
};

struct ParRunResult {
  EstimateLedger ledger;
  PairingState state;
  SampleGraph sample;
  std::vector<BatchEstimate> batches;
  std::vector<std::uint64_t> load;
};

ParRunResult run_parabacus(std::span<const EdgeEvent> events,
                           std::uint64_t budget, std::size_t batch_size,
                           unsigned workers, std::uint64_t seed,
                           bool audit = false);

/// CSV "worker,comparisons".
void write_load_csv(std::ostream& out, std::span<const std::uint64_t> load);

}  // namespace abacus
