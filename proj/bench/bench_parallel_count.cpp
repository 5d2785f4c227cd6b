// Serial reference vs OpenMP counting kernel on one mini-batch, plus
// end-to-end sequential and mini-batch throughput.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <thread>

#include "abacus/estimator.hpp"
#include "abacus/parallel.hpp"
#include "abacus/stream.hpp"
#include "abacus/versioned.hpp"

namespace {

using namespace abacus;

constexpr std::uint64_t kBudget = 10000;
constexpr std::size_t kBatch = 10000;

const EventStream& dense_stream() {
  static const EventStream events = [] {
    SyntheticGraphConfig cfg;
    cfg.left_vertices = 150;
    cfg.right_vertices = 150;
    cfg.edges = 12000;
    cfg.seed = 7;
    return generate_dynamic_stream(generate_bipartite_stream(cfg), 0.2, 7);
  }();
  return events;
}

// Sampler warmed on the stream head, with versions built for the next batch.
struct BatchFixture {
  PairingState state{kBudget, 11};
  SampleGraph graph;
  std::optional<VersionedSample> versions;
  std::span<const EdgeEvent> batch;

  BatchFixture() {
    const auto& events = dense_stream();
    const std::size_t head = events.size() - std::min(events.size(), kBatch);
    for (std::size_t i = 0; i < head; ++i) {
      if (events[i].sign == Sign::Insert)
        insert_to_sample(state, graph, events[i].edge);
      else
        delete_from_sample(state, graph, events[i].edge);
    }
    batch = std::span<const EdgeEvent>(events).subspan(head);
    versions.emplace(VersionedSample::build(batch, state, graph));
  }
};

BatchFixture& fixture() {
  static BatchFixture f;
  return f;
}

void BM_SerialCount(benchmark::State& st) {
  auto& f = fixture();
  const auto workers = static_cast<unsigned>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(serial_count(f.batch, *f.versions, workers, false));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.batch.size()));
}

void BM_ParallelCount(benchmark::State& st) {
  auto& f = fixture();
  const auto workers = static_cast<unsigned>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(parallel_count(f.batch, *f.versions, workers, false));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(f.batch.size()));
}

void BM_Abacus(benchmark::State& st) {
  const auto& events = dense_stream();
  for (auto _ : st) {
    AbacusOptions options;
    options.validate = false;
    Abacus abacus(kBudget, 3, options);
    for (const auto& ev : events) abacus.process(ev);
    benchmark::DoNotOptimize(abacus.estimate());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(events.size()));
}

void BM_ParAbacus(benchmark::State& st) {
  const auto& events = dense_stream();
  ParAbacusOptions options;
  options.batch_size = kBatch;
  options.workers = static_cast<unsigned>(st.range(0));
  options.validate = false;
  for (auto _ : st) {
    ParAbacus runner(kBudget, 3, options);
    runner.process(events);
    benchmark::DoNotOptimize(runner.estimate());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(events.size()));
}

void worker_args(benchmark::internal::Benchmark* b) {
  const long cores = std::max(4u, std::thread::hardware_concurrency());
  for (long p = 1; p <= cores; p *= 2) b->Arg(p);
}

}  // namespace

BENCHMARK(BM_SerialCount)->Apply(worker_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParallelCount)->Apply(worker_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Abacus)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ParAbacus)->Apply(worker_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
