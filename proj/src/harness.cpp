#include "abacus/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "abacus/errors.hpp"
#include "abacus/oracle.hpp"
#include "abacus/parallel.hpp"

namespace abacus::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// One timed pass: estimate and cumulative processing time at each offset.
struct Pass {
  std::vector<double> estimates;
  std::vector<double> times;
  std::uint64_t peak_sample_edges = 0;
  std::vector<TraceRow> trace;
  std::vector<std::uint64_t> load;
};

Pass run_abacus_pass(std::span<const EdgeEvent> events,
                     std::span<const std::uint64_t> offsets,
                     std::uint64_t budget, std::uint64_t seed, bool trace) {
  AbacusOptions options;
  options.validate = false;
  options.trace = trace;
  Abacus abacus(budget, seed, options);
  Pass pass;
  double elapsed = 0.0;
  std::uint64_t done = 0;
  for (std::uint64_t offset : offsets) {
    const auto start = Clock::now();
    for (; done < offset; ++done) abacus.process(events[done]);
    elapsed += seconds_since(start);
    pass.peak_sample_edges =
        std::max<std::uint64_t>(pass.peak_sample_edges, abacus.sample().size());
    pass.estimates.push_back(abacus.estimate());
    pass.times.push_back(elapsed);
  }
  if (trace) pass.trace = abacus.ledger().trace;
  return pass;
}

Pass run_parabacus_pass(std::span<const EdgeEvent> events,
                        std::span<const std::uint64_t> offsets,
                        const ExperimentConfig& cfg, std::uint64_t seed) {
  ParAbacusOptions options;
  options.batch_size = cfg.batch_size;
  options.workers = cfg.workers;
  options.validate = false;
  ParAbacus runner(cfg.budget, seed, options);
  Pass pass;
  double elapsed = 0.0;
  std::uint64_t done = 0;
  for (std::uint64_t offset : offsets) {
    const auto start = Clock::now();
    while (done < offset) {
      const std::size_t len = std::min<std::uint64_t>(cfg.batch_size,
                                                      offset - done);
      runner.process_batch(events.subspan(done, len));
      done += len;
    }
    elapsed += seconds_since(start);
    pass.peak_sample_edges = std::max<std::uint64_t>(
        pass.peak_sample_edges,
        runner.sample().size() + runner.peak_delta_edges());
    pass.estimates.push_back(runner.estimate());
    pass.times.push_back(elapsed);
  }
  pass.load = runner.load();
  return pass;
}

Pass run_exact_pass(std::span<const EdgeEvent> events,
                    std::span<const std::uint64_t> offsets) {
  const auto start = Clock::now();
  const auto counts = oracle::exact_count_stream(events);
  const double total = seconds_since(start);
  Pass pass;
  for (std::uint64_t offset : offsets) {
    pass.estimates.push_back(static_cast<double>(counts[offset - 1]));
    pass.times.push_back(total * static_cast<double>(offset) /
                         static_cast<double>(events.size()));
  }
  return pass;
}

}  // namespace

Mode parse_mode_name(const std::string& name) {
  if (name == "abacus") return Mode::Abacus;
  if (name == "parabacus") return Mode::ParAbacus;
  if (name == "exact") return Mode::Exact;
  throw ConfigError("unknown mode '" + name + "'");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Abacus: return "abacus";
    case Mode::ParAbacus: return "parabacus";
    case Mode::Exact: return "exact";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (budget < 2) throw ConfigError("--budget must be at least 2");
  if (mode == Mode::ParAbacus && (batch_size == 0 || workers == 0))
    throw ConfigError("parabacus mode needs --batch >= 1 and --workers >= 1");
  if (alpha && !(*alpha >= 0.0 && *alpha <= 1.0))
    throw ConfigError("--alpha must lie in [0, 1]");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (checkpoints.empty()) throw ConfigError("at least one checkpoint is required");
  for (double f : checkpoints)
    if (!(f > 0.0 && f <= 1.0))
      throw ConfigError("checkpoints must be fractions in (0, 1]");
  if (repetitions == 0) throw ConfigError("repetitions must be at least 1");
}

double relative_error(double exact, double estimate) {
  if (!(exact > 0.0))
    throw UndefinedMetric("relative error needs a positive exact count");
  return std::abs(exact - estimate) / exact;
}

std::vector<std::uint64_t> checkpoint_offsets(std::span<const double> fractions,
                                              std::uint64_t n,
                                              std::uint64_t granularity) {
  std::vector<std::uint64_t> out;
  if (n == 0) return out;
  for (double f : fractions) {
    auto offset = static_cast<std::uint64_t>(
        std::llround(f * static_cast<double>(n)));
    offset = std::clamp<std::uint64_t>(offset, 1, n);
    if (granularity > 1)
      offset = std::min(n, (offset + granularity - 1) / granularity * granularity);
    out.push_back(offset);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg,
                                std::span<const EdgeEvent> base) {
  cfg.validate();
  ExperimentOutput output;
  bool first_seed = true;
  for (std::uint64_t seed : cfg.seeds) {
    EventStream events = cfg.alpha
                             ? generate_dynamic_stream(base, *cfg.alpha, seed)
                             : EventStream(base.begin(), base.end());
    validate_stream(events);
    const std::uint64_t n = events.size();
    const std::vector<double> fractions(cfg.checkpoints.begin(),
                                        cfg.checkpoints.end());
    const auto offsets = checkpoint_offsets(
        fractions, n, cfg.mode == Mode::ParAbacus ? cfg.batch_size : 1);

    std::vector<std::uint64_t> exact;
    if (cfg.compute_exact || cfg.mode == Mode::Exact)
      exact = oracle::exact_count_stream(events);

    std::vector<Pass> passes;
    for (unsigned rep = 0; rep < cfg.repetitions; ++rep) {
      switch (cfg.mode) {
        case Mode::Abacus:
          passes.push_back(run_abacus_pass(events, offsets, cfg.budget, seed,
                                           cfg.trace && first_seed && rep == 0));
          break;
        case Mode::ParAbacus:
          passes.push_back(run_parabacus_pass(events, offsets, cfg, seed));
          break;
        case Mode::Exact:
          passes.push_back(run_exact_pass(events, offsets));
          break;
      }
    }

    if (cfg.mode == Mode::ParAbacus) {
      const auto reference =
          run_abacus_pass(events, offsets, cfg.budget, seed, false);
      for (std::size_t i = 0; i < offsets.size(); ++i)
        if (reference.estimates[i] != passes.front().estimates[i])
          throw EquivalenceViolation(
              "parabacus estimate differs from abacus at offset " +
              std::to_string(offsets[i]) + " for seed " + std::to_string(seed));
    }

    for (std::size_t i = 0; i < offsets.size(); ++i) {
      MetricsRow row;
      row.seed = seed;
      row.offset = offsets[i];
      row.checkpoint = static_cast<double>(offsets[i]) / static_cast<double>(n);
      row.estimate = passes.front().estimates[i];
      std::vector<double> times;
      for (const auto& p : passes) times.push_back(p.times[i]);
      row.wall_time = median(std::move(times));
      row.events_per_second =
          row.wall_time > 0.0 ? static_cast<double>(offsets[i]) / row.wall_time
                              : 0.0;
      row.peak_sample_edges = passes.front().peak_sample_edges;
      if (!exact.empty()) {
        row.exact = exact[offsets[i] - 1];
        if (*row.exact > 0)
          row.relative_error =
              relative_error(static_cast<double>(*row.exact), row.estimate);
      }
      output.rows.push_back(row);
    }
    if (first_seed) {
      output.trace = std::move(passes.front().trace);
      if (cfg.load_report) output.load = std::move(passes.front().load);
    }
    first_seed = false;
  }
  std::sort(output.rows.begin(), output.rows.end(),
            [](const MetricsRow& a, const MetricsRow& b) {
              return std::tie(a.seed, a.offset) < std::tie(b.seed, b.offset);
            });
  return output;
}

void write_metrics_csv(std::ostream& out, std::vector<MetricsRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const MetricsRow& a, const MetricsRow& b) {
    return std::tie(a.seed, a.offset) < std::tie(b.seed, b.offset);
  });
  out << "seed,checkpoint,offset,estimate,exact,relative_error,wall_time,"
         "events_per_second,peak_sample_edges\n";
  const auto old_precision = out.precision(12);
  for (const auto& r : rows) {
    out << r.seed << ',' << r.checkpoint << ',' << r.offset << ','
        << r.estimate << ',';
    if (r.exact) out << *r.exact;
    out << ',';
    if (r.relative_error) out << *r.relative_error;
    out << ',' << r.wall_time << ',' << r.events_per_second << ','
        << r.peak_sample_edges << '\n';
  }
  out.precision(old_precision);
}

std::vector<SpeedupRow> speedup_report(std::span<const EdgeEvent> events,
                                       std::uint64_t budget,
                                       std::span<const std::size_t> batch_sizes,
                                       std::span<const unsigned> workers,
                                       std::uint64_t seed,
                                       unsigned repetitions) {
  if (repetitions == 0) throw ConfigError("repetitions must be at least 1");
  AbacusOptions sequential_options;
  sequential_options.validate = false;

  double reference = 0.0;
  std::vector<double> abacus_times;
  for (unsigned rep = 0; rep < repetitions; ++rep) {
    Abacus abacus(budget, seed, sequential_options);
    const auto start = Clock::now();
    for (const auto& ev : events) abacus.process(ev);
    abacus_times.push_back(seconds_since(start));
    reference = abacus.estimate();
  }
  const double abacus_time = median(abacus_times);

  std::vector<SpeedupRow> rows;
  for (std::size_t m : batch_sizes) {
    for (unsigned p : workers) {
      ParAbacusOptions options;
      options.batch_size = m;
      options.workers = p;
      options.validate = false;
      std::vector<double> times;
      for (unsigned rep = 0; rep < repetitions; ++rep) {
        ParAbacus runner(budget, seed, options);
        const auto start = Clock::now();
        runner.process(events);
        times.push_back(seconds_since(start));
        if (runner.estimate() != reference)
          throw EquivalenceViolation(
              "parabacus estimate differs from abacus (M=" + std::to_string(m) +
              ", p=" + std::to_string(p) + ")");
      }
      const double t = median(times);
      rows.push_back({m, p, budget, abacus_time, t,
                      t > 0.0 ? abacus_time / t : 0.0});
    }
  }
  return rows;
}

void write_speedup_csv(std::ostream& out, std::span<const SpeedupRow> rows) {
  out << "M,p,k,abacus_time,parabacus_time,speedup\n";
  const auto old_precision = out.precision(6);
  for (const auto& r : rows)
    out << r.batch_size << ',' << r.workers << ',' << r.budget << ','
        << r.abacus_time << ',' << r.parabacus_time << ',' << r.speedup << '\n';
  out.precision(old_precision);
}

}  // namespace abacus::harness
