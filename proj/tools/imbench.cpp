// imbench: influence-maximization benchmark driver.
//
//   imbench run --config exp.json [--graph g.txt --method celf --k 10 --p 0.1 ...]
//   imbench score --graph g.txt --theta 2
//   imbench communities --graph g.txt --similarity alpha2s --alpha 1
//   imbench simulate --graph g.txt --seeds a,b --p 0.1 --r 1000 [--trace]

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hcim/bench.hpp"
#include "hcim/hcim.hpp"

namespace {

hcim::Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return hcim::load_edge_list(in);
}

void report_drops(const hcim::Graph& g) {
  if (g.self_loops_dropped() || g.duplicates_dropped()) {
    std::cerr << "warning: dropped " << g.self_loops_dropped() << " self-loops and " << g.duplicates_dropped()
              << " duplicate edges\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community-aware influence maximization benchmark"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run an experiment grid and write result files");
  std::string config_path;
  std::vector<std::string> graphs, methods;
  std::vector<std::size_t> ks;
  std::vector<double> ps;
  std::optional<std::size_t> r;
  std::optional<long long> theta;
  std::optional<double> alpha, timeout;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  bool no_timing = false;
  run->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  run->add_option("--graph", graphs, "Edge-list dataset (repeatable; replaces config datasets)");
  run->add_option("--method", methods, "hcim, alpha-hcim, greedy or celf (repeatable)")->delimiter(',');
  run->add_option("--k", ks, "Seed-set sizes")->delimiter(',');
  run->add_option("--p", ps, "Activation probabilities")->delimiter(',');
  run->add_option("--r", r, "Monte Carlo replications");
  run->add_option("--theta", theta, "Coverage radius for propagator scores");
  run->add_option("--alpha", alpha, "Alpha for the alpha-2S similarity");
  run->add_option("--seed", seed, "Master RNG seed");
  run->add_option("--timeout", timeout, "Per-cell time budget in seconds (0 = none)");
  run->add_option("--out", out, "Output directory");
  run->add_option("--workers", workers, "Worker threads");
  run->add_flag("--no-timing", no_timing, "Leave timing columns empty (byte-reproducible output)");

  // score
  auto* score = app.add_subcommand("score", "Dump propagator scores");
  std::string score_graph;
  long long score_theta = 2;
  score->add_option("--graph", score_graph, "Edge-list file")->required();
  score->add_option("--theta", score_theta, "Coverage radius");

  // communities
  auto* comm = app.add_subcommand("communities", "Dump the hierarchical-clustering partition");
  std::string comm_graph, similarity = "alpha2s";
  double comm_alpha = 1.0;
  comm->add_option("--graph", comm_graph, "Edge-list file")->required();
  comm->add_option("--similarity", similarity, "2s or alpha2s")->check(CLI::IsMember({"2s", "alpha2s"}));
  comm->add_option("--alpha", comm_alpha, "Alpha for alpha2s");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Estimate the spread of a seed set");
  std::string sim_graph;
  std::vector<std::string> sim_seeds;
  double sim_p = 0.1;
  std::size_t sim_r = 100;
  std::uint64_t sim_seed = 0;
  bool sim_trace = false;
  sim->add_option("--graph", sim_graph, "Edge-list file")->required();
  sim->add_option("--seeds", sim_seeds, "Seed vertex labels")->delimiter(',')->required();
  sim->add_option("--p", sim_p, "Activation probability");
  sim->add_option("--r", sim_r, "Replications");
  sim->add_option("--seed", sim_seed, "Master RNG seed");
  sim->add_flag("--trace", sim_trace, "Print 'round activator target' lines of replication 0");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      hcim::bench::ExperimentConfig cfg;
      if (!config_path.empty()) cfg = hcim::bench::load_config(config_path);
      if (!graphs.empty()) {
        cfg.datasets.clear();
        for (const auto& gpath : graphs) cfg.datasets.push_back(hcim::bench::dataset_from_path(gpath));
      }
      if (!methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : methods) cfg.methods.push_back(hcim::parse_method(m));
      }
      if (!ks.empty()) cfg.k_values = ks;
      if (!ps.empty()) cfg.p_values = ps;
      if (r) cfg.replications = *r;
      if (theta) cfg.theta = *theta;
      if (alpha) cfg.alpha = *alpha;
      if (seed) cfg.master_seed = *seed;
      if (timeout) cfg.timeout_s = *timeout;
      if (out) cfg.out_dir = *out;
      if (workers) cfg.workers = *workers;
      if (no_timing) cfg.record_timing = false;

      const auto result = hcim::bench::run_experiment(cfg);
      for (const auto& e : result.errors) std::cerr << "error: " << e << '\n';
      if (result.rows.empty()) {
        std::cerr << "no cells completed\n";
        return 1;
      }
      hcim::bench::emit_results(result, cfg.out_dir);
      std::cout << hcim::bench::results_table(result.rows, cfg.record_timing);
      return result.errors.empty() ? 0 : 2;
    }

    if (*score) {
      const auto g = read_graph(score_graph);
      report_drops(g);
      const hcim::ScoreTable scores(g, hcim::ScoreConfig{score_theta});
      for (hcim::Vertex v = 0; v < g.num_vertices(); ++v) std::cout << g.label(v) << ' ' << scores(v) << '\n';
      return 0;
    }

    if (*comm) {
      const auto g = read_graph(comm_graph);
      report_drops(g);
      const hcim::SimilaritySpec spec{similarity == "2s" ? hcim::SimilarityKind::TwoS : hcim::SimilarityKind::AlphaTwoS,
                                      comm_alpha};
      const auto result = hcim::hierarchical_clustering_detailed(g, spec);
      std::cout << "# communities=" << result.partition.size() << " modularity=" << std::setprecision(6)
                << result.modularity << '\n';
      hcim::write_partition(g, result.partition, std::cout);
      return 0;
    }

    if (*sim) {
      const auto g = read_graph(sim_graph);
      std::vector<hcim::Vertex> seeds;
      for (const auto& label : sim_seeds) seeds.push_back(g.id(label));
      const hcim::DiffusionParams params{sim_p, sim_r, sim_seed};
      const auto est = hcim::estimate_spread(g, seeds, params);
      std::cout << "mean " << est.mean << " std_error " << est.std_error << " r " << est.replications << '\n';
      if (sim_trace) {
        std::vector<hcim::Activation> trace;
        hcim::simulate_once(g, seeds, sim_p, hcim::replication_stream(sim_seed, 0), &trace);
        hcim::write_trace(g, trace, std::cout);
      }
      return 0;
    }
  } catch (const hcim::bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
