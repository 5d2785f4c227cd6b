#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "abacus/errors.hpp"
#include "abacus/harness.hpp"
#include "support.hpp"

using namespace abacus;
using namespace abacus::harness;

namespace {

std::string data_file(const char* name) {
  return std::string(ABACUS_TEST_DATA) + "/" + name;
}

EventStream load(const std::string& path) {
  return parse_edge_list_file(path, InputFormat::PlainTsv).events;
}

}  // namespace

TEST_CASE("relative error examples") {
  CHECK(relative_error(100, 100) == 0.0);
  CHECK(relative_error(100, 92) == doctest::Approx(0.08));
  CHECK(relative_error(100, 108) == doctest::Approx(0.08));
  CHECK_THROWS_AS(relative_error(0, 5), UndefinedMetric);
  CHECK_THROWS_AS(relative_error(-1, 5), UndefinedMetric);
}

TEST_CASE("mode names") {
  CHECK(parse_mode_name("abacus") == Mode::Abacus);
  CHECK(parse_mode_name("parabacus") == Mode::ParAbacus);
  CHECK(parse_mode_name("exact") == Mode::Exact);
  CHECK(mode_name(Mode::ParAbacus) == "parabacus");
  CHECK_THROWS_AS(parse_mode_name("fast"), ConfigError);
}

TEST_CASE("checkpoint offsets") {
  const std::vector<double> tenths{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  const auto o = checkpoint_offsets(tenths, 100);
  CHECK(o == std::vector<std::uint64_t>{10, 20, 30, 40, 50, 60, 70, 80, 90, 100});
  const auto coarse = checkpoint_offsets(tenths, 100, 30);
  CHECK(coarse == std::vector<std::uint64_t>{30, 60, 90, 100});
  const std::vector<double> tiny{0.001};
  CHECK(checkpoint_offsets(tiny, 10) == std::vector<std::uint64_t>{1});
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.budget = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.mode = Mode::ParAbacus;
  cfg.workers = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha = 1.2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.checkpoints = {0.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.seeds.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("exact mode on K23") {
  ExperimentConfig cfg;
  cfg.mode = Mode::Exact;
  cfg.checkpoints = {1.0};
  cfg.repetitions = 1;
  const auto out = run_experiment(cfg, load(data_file("k23.tsv")));
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].estimate == 3.0);
  CHECK(*out.rows[0].exact == 3);
  CHECK(*out.rows[0].relative_error == 0.0);
}

TEST_CASE("abacus mode at full budget has zero error for every seed") {
  const auto base = testing::random_stream(4, 15, 15, 150, 0.0);
  ExperimentConfig cfg;
  cfg.budget = 1000;
  cfg.alpha = 0.2;
  cfg.seeds = {1, 2, 3, 4};
  cfg.repetitions = 1;
  const auto out = run_experiment(cfg, base);
  CHECK(out.rows.size() == 40);
  for (const auto& row : out.rows) {
    CHECK(row.exact.has_value());
    CHECK(row.relative_error.has_value() == (*row.exact > 0));
    if (row.relative_error) CHECK(*row.relative_error == 0.0);
    CHECK(row.peak_sample_edges <= 150);
  }
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    const auto& a = out.rows[i - 1];
    const auto& b = out.rows[i];
    CHECK(std::tie(a.seed, a.offset) < std::tie(b.seed, b.offset));
  }
}

TEST_CASE("parabacus mode reports the same estimates as abacus") {
  const auto base = testing::random_stream(8, 20, 20, 300, 0.0);
  ExperimentConfig cfg;
  cfg.budget = 60;
  cfg.alpha = 0.2;
  cfg.seeds = {5};
  cfg.repetitions = 1;
  cfg.checkpoints = {0.5, 1.0};
  const auto seq = run_experiment(cfg, base);
  cfg.mode = Mode::ParAbacus;
  cfg.batch_size = 60;
  cfg.workers = 3;
  cfg.load_report = true;
  const auto par = run_experiment(cfg, base);
  REQUIRE(par.rows.size() == 2);
  CHECK(par.rows[1].offset == seq.rows[1].offset);
  CHECK(par.rows[1].estimate == seq.rows[1].estimate);
  CHECK(par.load.size() == 3);
}

TEST_CASE("trace is captured for the first seed") {
  const auto base = testing::random_stream(2, 10, 10, 50, 0.0);
  ExperimentConfig cfg;
  cfg.budget = 20;
  cfg.seeds = {1, 2};
  cfg.trace = true;
  cfg.repetitions = 1;
  const auto out = run_experiment(cfg, base);
  CHECK(out.trace.size() == base.size());
}

TEST_CASE("invalid input stream is rejected") {
  const auto bad = testing::indexed({testing::ins(0, 0), testing::ins(0, 0)});
  ExperimentConfig cfg;
  CHECK_THROWS_AS(run_experiment(cfg, bad), StreamInvariantViolation);
}

TEST_CASE("metrics csv schema") {
  MetricsRow a;
  a.seed = 2;
  a.offset = 5;
  a.checkpoint = 0.5;
  a.estimate = 3;
  MetricsRow b = a;
  b.seed = 1;
  b.exact = 4;
  b.relative_error = 0.25;
  std::ostringstream out;
  write_metrics_csv(out, {a, b});
  std::istringstream in(out.str());
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(header ==
        "seed,checkpoint,offset,estimate,exact,relative_error,wall_time,"
        "events_per_second,peak_sample_edges");
  CHECK(first.rfind("1,0.5,5,3,4,0.25,", 0) == 0);
  CHECK(second.rfind("2,0.5,5,3,,,", 0) == 0);
}

TEST_CASE("speedup report") {
  const auto events = testing::random_stream(3, 25, 25, 400, 0.2);
  const std::vector<std::size_t> batches{1, 50};
  const std::vector<unsigned> workers{1, 2};
  const auto rows = speedup_report(events, 80, batches, workers, 7, 1);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.budget == 80);
    CHECK(r.abacus_time > 0.0);
    CHECK(r.parabacus_time > 0.0);
    CHECK(r.speedup == doctest::Approx(r.abacus_time / r.parabacus_time));
  }
  std::ostringstream out;
  write_speedup_csv(out, rows);
  CHECK(out.str().rfind("M,p,k,abacus_time,parabacus_time,speedup\n1,1,80,", 0) == 0);
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0}) == 2.5);
  CHECK_THROWS_AS(median({}), ConfigError);
}
