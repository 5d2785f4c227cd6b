#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "abacus/estimator.hpp"
#include "abacus/stream.hpp"

namespace abacus::harness {

enum class Mode { Abacus, ParAbacus, Exact };

Mode parse_mode_name(const std::string& name);
std::string mode_name(Mode mode);

struct ExperimentConfig {
  std::string input;
  InputFormat format = InputFormat::PlainTsv;
  Mode mode = Mode::Abacus;
  std::uint64_t budget = 1000;   // k
  std::size_t batch_size = 500;  // M
  unsigned workers = 1;          // p
  /// Deletion ratio applied to the ingested insertions, per seed.
  std::optional<double> alpha;
  std::vector<std::uint64_t> seeds{1};
  /// Stream fractions in (0, 1] at which a row is recorded.
  std::vector<double> checkpoints{0.1, 0.2, 0.3, 0.4, 0.5,
                                  0.6, 0.7, 0.8, 0.9, 1.0};
  bool compute_exact = true;
  unsigned repetitions = 3;  // timing runs; the median is reported
  bool trace = false;
  bool load_report = false;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
};

struct MetricsRow {
  std::uint64_t seed = 0;
  double checkpoint = 0.0;
  std::uint64_t offset = 0;
  double estimate = 0.0;
  std::optional<std::uint64_t> exact;
  std::optional<double> relative_error;  // present iff exact > 0
  double wall_time = 0.0;                // seconds, processing only
  double events_per_second = 0.0;
  std::uint64_t peak_sample_edges = 0;
};

/// |exact - estimate| / exact. Throws UndefinedMetric unless exact > 0.
double relative_error(double exact, double estimate);

/// Event offsets for stream fractions: round(f * n), clamped to [1, n],
/// rounded up to a multiple of `granularity`, sorted and unique.
std::vector<std::uint64_t> checkpoint_offsets(std::span<const double> fractions,
                                              std::uint64_t n,
                                              std::uint64_t granularity = 1);

struct ExperimentOutput {
  std::vector<MetricsRow> rows;
  std::vector<TraceRow> trace;      // first seed, abacus mode with trace
  std::vector<std::uint64_t> load;  // first seed, parabacus with load_report
};

/// Runs `cfg.mode` over `base` once per seed (after applying alpha, if set)
/// and records one row per checkpoint. In parabacus mode every checkpoint
/// estimate is first checked against a sequential run; a mismatch throws
/// EquivalenceViolation.
ExperimentOutput run_experiment(const ExperimentConfig& cfg,
                                std::span<const EdgeEvent> base);

/// Header plus rows, sorted by (seed, checkpoint).
void write_metrics_csv(std::ostream& out, std::vector<MetricsRow> rows);

struct SpeedupRow {
  std::size_t batch_size;
  unsigned workers;
  std::uint64_t budget;
  double abacus_time;
  double parabacus_time;
  double speedup;
};

/// Times sequential and mini-batch runs of one stream over every (M, p).
/// Estimates must agree bit-for-bit before any timing is reported.
std::vector<SpeedupRow> speedup_report(std::span<const EdgeEvent> events,
                                       std::uint64_t budget,
                                       std::span<const std::size_t> batch_sizes,
                                       std::span<const unsigned> workers,
                                       std::uint64_t seed,
                                       unsigned repetitions = 3);

void write_speedup_csv(std::ostream& out, std::span<const SpeedupRow> rows);

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

}  // namespace abacus::harness
