#include "abacus/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <ostream>

#include "abacus/errors.hpp"

namespace abacus {

namespace {

PartialCounts make_partials(std::size_t batch_size, unsigned workers,
                            bool audit) {
  PartialCounts out;
  out.values.assign(batch_size, 0.0);
  out.found.assign(batch_size, 0);
  if (audit) out.scaled.assign(batch_size, 0);
  out.worker_comparisons.assign(workers, 0);
  return out;
}

void count_range(std::span<const EdgeEvent> batch,
                 const VersionedSample& versions, WorkerRange range,
                 bool audit, CountScratch& scratch, PartialCounts& out,
                 std::uint64_t& comparisons) {
  VersionCursor cursor(versions);
  for (std::size_t i = range.begin; i < range.end; ++i) {
    cursor.seek(i);
    const auto c = contribution(cursor, batch[i],
                                versions.triplet(i), audit, scratch,
                                comparisons);
    out.values[i] = c.value;
    out.found[i] = c.found;
    if (audit) out.scaled[i] = c.scaled;
  }
}

unsigned active_groups(std::size_t batch_size, unsigned workers) {
  if (batch_size == 0) return 0;
  const std::size_t chunk = (batch_size + workers - 1) / workers;
  return static_cast<unsigned>((batch_size + chunk - 1) / chunk);
}

}  // namespace

WorkerRange worker_range(std::size_t batch_size, unsigned workers, unsigned g) {
  const std::size_t chunk = (batch_size + workers - 1) / workers;
  const std::size_t begin = std::min(batch_size, g * chunk);
  return {begin, std::min(batch_size, begin + chunk)};
}

PartialCounts parallel_count(std::span<const EdgeEvent> batch,
                             const VersionedSample& versions, unsigned workers,
                             bool audit) {
  if (workers == 0) throw ConfigError("worker count must be at least 1");
  PartialCounts out = make_partials(batch.size(), workers, audit);
  const unsigned groups = active_groups(batch.size(), workers);
  if (groups == 0) return out;

  // Each thread owns whole groups and writes disjoint slots of `out`.
#pragma omp parallel num_threads(groups)
  {
    CountScratch scratch;
    const auto tid = static_cast<unsigned>(omp_get_thread_num());
    const auto team = static_cast<unsigned>(omp_get_num_threads());
    for (unsigned g = tid; g < groups; g += team) {
      std::uint64_t comparisons = 0;
      count_range(batch, versions, worker_range(batch.size(), workers, g),
                  audit, scratch, out, comparisons);
      out.worker_comparisons[g] = comparisons;
    }
  }
  return out;
}

PartialCounts serial_count(std::span<const EdgeEvent> batch,
                           const VersionedSample& versions, unsigned workers,
                           bool audit) {
  if (workers == 0) throw ConfigError("worker count must be at least 1");
  PartialCounts out = make_partials(batch.size(), workers, audit);
  CountScratch scratch;
  const unsigned groups = active_groups(batch.size(), workers);
  for (unsigned g = 0; g < groups; ++g) {
    std::uint64_t comparisons = 0;
    count_range(batch, versions, worker_range(batch.size(), workers, g), audit,
                scratch, out, comparisons);
    out.worker_comparisons[g] = comparisons;
  }
  return out;
}

double aggregate(double prior, const PartialCounts& partials) {
  for (double v : partials.values) prior += v;
  return prior;
}

void aggregate(ExactCount& prior, const PartialCounts& partials) {
  for (int128 v : partials.scaled) prior.add_scaled(v);
}

ParAbacus::ParAbacus(std::uint64_t budget, std::uint64_t seed,
                     ParAbacusOptions options)
    : options_(options), state_(budget, seed), load_(options.workers, 0) {
  if (options_.batch_size == 0)
    throw ConfigError("mini-batch size M must be at least 1");
  if (options_.workers == 0)
    throw ConfigError("worker count p must be at least 1");
  if (options_.audit) ledger_.exact.emplace(budget);
  if (options_.validate) validity_.emplace();
}

void ParAbacus::process_batch(std::span<const EdgeEvent> batch) {
  if (batch.empty()) return;
  if (validity_)
    for (const auto& ev : batch) validity_->apply(ev);

  auto versions = VersionedSample::build(batch, state_, sample_);
  peak_delta_ = std::max(peak_delta_,
                         versions.added_edges() + versions.removed_edges());

  const auto partials =
      options_.serial_reference
          ? serial_count(batch, versions, options_.workers, options_.audit)
          : parallel_count(batch, versions, options_.workers, options_.audit);

  ledger_.estimate = aggregate(ledger_.estimate, partials);
  if (ledger_.exact) aggregate(*ledger_.exact, partials);
  ledger_.events_processed += batch.size();
  for (unsigned g = 0; g < options_.workers; ++g)
    load_[g] += partials.worker_comparisons[g];

  versions.consolidate();
  batches_.push_back({ledger_.events_processed, ledger_.estimate, ledger_.exact});
}

void ParAbacus::process(std::span<const EdgeEvent> events) {
  for (std::size_t at = 0; at < events.size(); at += options_.batch_size)
    process_batch(events.subspan(
        at, std::min(options_.batch_size, events.size() - at)));
}

ParRunResult run_parabacus(std::span<const EdgeEvent> events,
                           std::uint64_t budget, std::size_t batch_size,
                           unsigned workers, std::uint64_t seed, bool audit) {
  ParAbacusOptions options;
  options.batch_size = batch_size;
  options.workers = workers;
  options.audit = audit;
  ParAbacus runner(budget, seed, options);
  runner.process(events);
  auto batches = runner.batches();
  auto load = runner.load();
  return {std::move(runner).take_ledger(), std::move(runner).take_state(),
          std::move(runner).take_sample(), std::move(batches),
          std::move(load)};
}

void write_load_csv(std::ostream& out, std::span<const std::uint64_t> load) {
  out << "worker,comparisons\n";
  for (std::size_t w = 0; w < load.size(); ++w)
    out << w << ',' << load[w] << '\n';
}

}  // namespace abacus
