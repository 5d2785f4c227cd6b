// Command-line front end: streaming butterfly estimation experiments.
//
//   abacus_cli --input g.tsv --mode abacus --budget 5000 --seed 1,2,3
//   abacus_cli speedup --input g.tsv --budget 10000 --batch 1000,10000 --workers 1,2,4
//   abacus_cli generate --left 300 --right 300 --edges 50000 --out g.tsv

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "abacus/errors.hpp"
#include "abacus/harness.hpp"
#include "abacus/parallel.hpp"
#include "abacus/stream.hpp"

namespace {

using namespace abacus;

std::vector<double> parse_fractions(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad checkpoint fraction '" + item + "'");
    }
  }
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

EventStream load_input(const std::string& path, const std::string& format) {
  auto parsed = parse_edge_list_file(path, parse_format_name(format));
  const auto& w = parsed.warnings;
  if (w.total() > 0)
    std::cerr << "warning: skipped " << w.duplicates << " duplicate, "
              << w.invalid_deletes << " invalid-delete and " << w.malformed
              << " malformed lines\n";
  return std::move(parsed.events);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-memory butterfly count estimation over dynamic bipartite streams"};
  app.require_subcommand(0, 1);

  harness::ExperimentConfig cfg;
  std::string format = "tsv";
  std::string mode = "abacus";
  std::string checkpoints;
  std::string out_path;
  bool no_exact = false;
  double alpha = -1.0;

  app.add_option("--input", cfg.input, "edge list path");
  app.add_option("--format", format, "tsv | konect | native")
      ->check(CLI::IsMember({"tsv", "konect", "native"}));
  app.add_option("--mode", mode, "abacus | parabacus | exact")
      ->check(CLI::IsMember({"abacus", "parabacus", "exact"}));
  app.add_option("--budget", cfg.budget, "memory budget k (sample edges)");
  app.add_option("--batch", cfg.batch_size, "mini-batch size M");
  app.add_option("--workers", cfg.workers, "worker threads p");
  app.add_option("--alpha", alpha, "deletion ratio applied to the input");
  app.add_option("--seed", cfg.seeds, "seed list")->delimiter(',');
  app.add_option("--checkpoints", checkpoints, "comma-separated stream fractions");
  app.add_option("--repetitions", cfg.repetitions, "timing repetitions (median)");
  app.add_flag("--no-exact", no_exact, "skip the exact reference count");
  app.add_flag("--trace", cfg.trace, "write <out>.trace.csv (abacus mode)");
  app.add_flag("--load-report", cfg.load_report,
               "write <out>.load.csv (parabacus mode)");
  app.add_option("--out", out_path, "report path (default: stdout)");

  auto* speedup = app.add_subcommand("speedup", "sequential vs mini-batch timing grid");
  std::string sp_input;
  std::string sp_format = "tsv";
  std::uint64_t sp_budget = 10000;
  std::vector<std::size_t> sp_batches{500};
  std::vector<unsigned> sp_workers{1, 2, 4};
  std::uint64_t sp_seed = 1;
  double sp_alpha = -1.0;
  unsigned sp_reps = 3;
  std::string sp_out;
  speedup->add_option("--input", sp_input, "edge list path")->required();
  speedup->add_option("--format", sp_format, "tsv | konect | native")
      ->check(CLI::IsMember({"tsv", "konect", "native"}));
  speedup->add_option("--budget", sp_budget, "memory budget k");
  speedup->add_option("--batch", sp_batches, "mini-batch sizes")->delimiter(',');
  speedup->add_option("--workers", sp_workers, "worker counts")->delimiter(',');
  speedup->add_option("--seed", sp_seed, "seed");
  speedup->add_option("--alpha", sp_alpha, "deletion ratio applied to the input");
  speedup->add_option("--repetitions", sp_reps, "timing repetitions (median)");
  speedup->add_option("--out", sp_out, "report path (default: stdout)");

  auto* generate = app.add_subcommand("generate", "write a synthetic bipartite edge list");
  SyntheticGraphConfig gen;
  double gen_alpha = -1.0;
  std::string gen_out;
  generate->add_option("--left", gen.left_vertices, "left vertices");
  generate->add_option("--right", gen.right_vertices, "right vertices");
  generate->add_option("--edges", gen.edges, "distinct edges");
  generate->add_option("--skew", gen.skew, "Zipf exponent of endpoint popularity");
  generate->add_option("--seed", gen.seed, "seed");
  generate->add_option("--alpha", gen_alpha,
                       "also add deletions and write the native event format");
  generate->add_option("--out", gen_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      auto events = generate_bipartite_stream(gen);
      auto out = open_output(gen_out);
      if (gen_alpha >= 0.0) {
        write_native(out, generate_dynamic_stream(events, gen_alpha, gen.seed));
      } else {
        for (const auto& ev : events)
          out << ev.edge.left << '\t' << ev.edge.right << '\n';
      }
      return 0;
    }

    if (*speedup) {
      auto events = load_input(sp_input, sp_format);
      if (sp_alpha >= 0.0) events = generate_dynamic_stream(events, sp_alpha, sp_seed);
      validate_stream(events);
      const auto rows = harness::speedup_report(events, sp_budget, sp_batches,
                                                sp_workers, sp_seed, sp_reps);
      if (sp_out.empty()) {
        harness::write_speedup_csv(std::cout, rows);
      } else {
        auto out = open_output(sp_out);
        harness::write_speedup_csv(out, rows);
      }
      return 0;
    }

    if (cfg.input.empty()) throw ConfigError("--input is required");
    cfg.format = parse_format_name(format);
    cfg.mode = harness::parse_mode_name(mode);
    cfg.compute_exact = !no_exact;
    if (alpha >= 0.0) cfg.alpha = alpha;
    if (!checkpoints.empty()) cfg.checkpoints = parse_fractions(checkpoints);
    if ((cfg.trace || cfg.load_report) && out_path.empty())
      throw ConfigError("--trace and --load-report need --out");

    const auto base = load_input(cfg.input, format);
    const auto result = harness::run_experiment(cfg, base);
    if (out_path.empty()) {
      harness::write_metrics_csv(std::cout, result.rows);
    } else {
      auto out = open_output(out_path);
      harness::write_metrics_csv(out, result.rows);
    }
    if (cfg.trace) {
      auto out = open_output(out_path + ".trace.csv");
      write_trace_csv(out, result.trace);
    }
    if (cfg.load_report) {
      auto out = open_output(out_path + ".load.csv");
      write_load_csv(out, result.load);
    }
    return 0;
  } catch (const StreamInvariantViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const EquivalenceViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
