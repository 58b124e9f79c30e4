#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <locale>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hcim/community.hpp"
#include "hcim/diffusion.hpp"
#include "hcim/graph.hpp"
#include "hcim/rng.hpp"
#include "hcim/seedsel.hpp"

namespace hcim::bench {

namespace fs = std::filesystem;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DatasetSpec {
  std::string name;
  fs::path path;
};

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<Method> methods;
  std::vector<std::size_t> k_values;
  std::vector<double> p_values;
  std::size_t replications = 100;
  long long theta = 2;
  double alpha = 1.0;
  std::uint64_t master_seed = 0;
  double timeout_s = 0.0;  // 0 disables the per-cell budget
  fs::path out_dir = "results";
  unsigned workers = 1;
  /// When false, timing columns are left empty so reruns are byte-identical.
  bool record_timing = true;

  void validate() const {
    if (datasets.empty()) throw ConfigError("config lists no dataset");
    if (methods.empty()) throw ConfigError("config lists no method");
    if (k_values.empty()) throw ConfigError("config lists no k value");
    if (p_values.empty()) throw ConfigError("config lists no p value");
    for (auto k : k_values) {
      if (k < 1) throw ConfigError("k values must be at least 1");
    }
    for (double p : p_values) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p values must lie in [0, 1]");
    }
    if (replications < 1) throw ConfigError("r must be at least 1");
    if (theta < 0) throw ConfigError("theta must be nonnegative");
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be nonnegative");
    if (!(timeout_s >= 0.0)) throw ConfigError("timeout must be nonnegative");
    if (workers < 1) throw ConfigError("workers must be at least 1");
  }
};

inline DatasetSpec dataset_from_path(const fs::path& path) { return {path.stem().string(), path}; }

/// Reads a JSON experiment config. Relative dataset paths resolve against
/// `base_dir`.
inline ExperimentConfig parse_config(const nlohmann::json& j, const fs::path& base_dir = {}) {
  ExperimentConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "datasets") {
        for (const auto& d : value) {
          DatasetSpec spec;
          if (d.is_string()) {
            spec = dataset_from_path(d.get<std::string>());
          } else {
            spec.path = d.at("path").get<std::string>();
            spec.name = d.contains("name") ? d.at("name").get<std::string>() : spec.path.stem().string();
          }
          if (spec.path.is_relative() && !base_dir.empty()) spec.path = base_dir / spec.path;
          cfg.datasets.push_back(std::move(spec));
        }
      } else if (key == "methods") {
        for (const auto& m : value) cfg.methods.push_back(parse_method(m.get<std::string>()));
      } else if (key == "k") {
        cfg.k_values = value.is_array() ? value.get<std::vector<std::size_t>>()
                                        : std::vector<std::size_t>{value.get<std::size_t>()};
      } else if (key == "p") {
        cfg.p_values = value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
      } else if (key == "r") {
        cfg.replications = value.get<std::size_t>();
      } else if (key == "theta") {
        cfg.theta = value.get<long long>();
      } else if (key == "alpha") {
        cfg.alpha = value.get<double>();
      } else if (key == "seed") {
        cfg.master_seed = value.get<std::uint64_t>();
      } else if (key == "timeout") {
        cfg.timeout_s = value.get<double>();
      } else if (key == "out") {
        cfg.out_dir = value.get<std::string>();
      } else if (key == "workers") {
        cfg.workers = value.get<unsigned>();
      } else if (key == "timing") {
        cfg.record_timing = value.get<bool>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

inline ExperimentConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + file.string() + ": " + e.what());
  }
  return parse_config(j, file.parent_path());
}

struct ExperimentResult {
  std::string dataset;
  Method method = Method::Greedy;
  std::size_t k = 0;
  double p = 0.0;
  std::size_t replications = 0;
  std::optional<long long> theta;  // community-based methods only
  std::optional<double> alpha;     // alpha-hcim only
  std::optional<SpreadEstimate> sigma;
  double runtime_s = 0.0;
  bool timed_out = false;
  std::vector<std::string> seed_labels;
  std::optional<std::size_t> community_count;
  std::optional<double> modularity;
  std::size_t spread_evaluations = 0;
  std::optional<SeedSet> seeds;
  std::optional<SelectionTrace> trace;
};

struct DetectionRecord {
  std::string dataset;
  std::string similarity;
  std::optional<double> alpha;
  std::size_t communities = 0;
  double modularity = 0.0;
  double seconds = 0.0;
};

struct ExperimentRun {
  std::vector<ExperimentResult> rows;
  std::vector<DetectionRecord> detections;
  std::vector<std::string> errors;  // per-dataset load failures
  ExperimentConfig config;
  /// Graphs by dataset name, for label lookups when writing outputs.
  std::map<std::string, Graph> graphs;
};

/// Stream tag separating the reporting estimate from selection-time estimates.
inline constexpr std::uint64_t kEvaluationStream = 0x65'76'61'6cULL;

inline std::uint64_t evaluation_seed(std::uint64_t master_seed) { return rng::derive(master_seed, kEvaluationStream); }

/// Runs every (dataset, method, k, p) cell in that nesting order. Clustering
/// is computed once per (dataset, similarity) and reused across the grid.
inline ExperimentRun run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  using Clock = std::chrono::steady_clock;
  ExperimentRun run;
  run.config = cfg;
  for (const auto& ds : cfg.datasets) {
    std::optional<Graph> loaded;
    try {
      std::ifstream in(ds.path);
      if (!in) throw std::runtime_error("cannot open " + ds.path.string());
      loaded = load_edge_list(in);
    } catch (const std::exception& e) {
      run.errors.push_back(ds.name + ": " + e.what());
      continue;
    }
    const Graph& g = run.graphs.emplace(ds.name, std::move(*loaded)).first->second;

    std::map<Method, ClusteringResult> clusterings;
    for (Method m : cfg.methods) {
      if (m != Method::Hcim && m != Method::AlphaHcim) continue;
      if (clusterings.contains(m)) continue;
      const SimilaritySpec spec = m == Method::Hcim ? SimilaritySpec{SimilarityKind::TwoS, 0.0}
                                                    : SimilaritySpec{SimilarityKind::AlphaTwoS, cfg.alpha};
      const auto t0 = Clock::now();
      auto clustering = hierarchical_clustering_detailed(g, spec, StoppingRule::modularity_peak(), cfg.workers);
      const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      run.detections.push_back({ds.name, m == Method::Hcim ? "2s" : "alpha2s",
                                m == Method::Hcim ? std::nullopt : std::optional<double>(cfg.alpha),
                                clustering.partition.size(), clustering.modularity, secs});
      clusterings.emplace(m, std::move(clustering));
    }

    for (Method m : cfg.methods) {
      for (std::size_t k : cfg.k_values) {
        for (double p : cfg.p_values) {
          ExperimentResult row;
          row.dataset = ds.name;
          row.method = m;
          row.k = k;
          row.p = p;
          row.replications = cfg.replications;
          const bool community_based = m == Method::Hcim || m == Method::AlphaHcim;
          if (community_based) row.theta = cfg.theta;
          if (m == Method::AlphaHcim) row.alpha = cfg.alpha;
          if (community_based) {
            const auto& c = clusterings.at(m);
            row.community_count = c.partition.size();
            row.modularity = c.modularity;
          }
          if (k > g.num_vertices()) {
            run.errors.push_back(ds.name + ": k=" + std::to_string(k) + " exceeds vertex count");
            continue;
          }

          const DiffusionParams params{p, cfg.replications, cfg.master_seed};
          std::atomic<std::size_t> evaluations{0};
          SelectOptions opt;
          opt.workers = cfg.workers;
          opt.evaluations = &evaluations;
          const auto t0 = Clock::now();
          if (cfg.timeout_s > 0) {
            opt.deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.timeout_s));
          }
          try {
            SeedSet seeds;
            switch (m) {
              case Method::Greedy: seeds = greedy(g, k, params, opt); break;
              case Method::Celf: seeds = celf(g, k, params, opt); break;
              case Method::Hcim:
              case Method::AlphaHcim: {
                auto sel = select_community_based(g, clusterings.at(m).partition, k, params, cfg.theta, opt);
                sel.seeds.method = m;
                sel.seeds.alpha = row.alpha;
                seeds = std::move(sel.seeds);
                row.trace = std::move(sel.trace);
                break;
              }
            }
            row.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
            DiffusionParams eval = params;
            eval.master_seed = evaluation_seed(cfg.master_seed);
            row.sigma = estimate_spread(g, seeds.members, eval, cfg.workers);
            for (Vertex v : seeds.members) row.seed_labels.push_back(g.label(v));
            row.seeds = std::move(seeds);
          } catch (const TimedOut&) {
            row.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
            row.timed_out = true;
            row.trace.reset();
          }
          row.spread_evaluations = evaluations.load();
          run.rows.push_back(std::move(row));
        }
      }
    }
  }
  return run;
}

namespace detail {

inline std::string format_number(double value, int precision, bool fixed) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  if (fixed) out << std::fixed;
  out << std::setprecision(precision) << value;
  return out.str();
}

inline std::string format_p(double p) { return format_number(p, 6, false); }

inline std::string file_token(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  }
  return s;
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace detail

inline constexpr std::string_view kResultsHeader =
    "dataset,method,k,p,r,theta,alpha,sigma_mean,sigma_se,runtime_s,timed_out,seeds";

inline std::string results_table(const std::vector<ExperimentResult>& rows, bool record_timing) {
  using detail::format_number;
  std::ostringstream out;
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.dataset << ',' << method_name(r.method) << ',' << r.k << ',' << detail::format_p(r.p) << ','
        << r.replications << ',';
    if (r.theta) out << *r.theta;
    out << ',';
    if (r.alpha) out << format_number(*r.alpha, 6, false);
    out << ',';
    if (r.sigma && !r.timed_out) {
      out << format_number(r.sigma->mean, 4, true) << ',' << format_number(r.sigma->std_error, 4, true);
    } else {
      out << ',';
    }
    out << ',';
    if (record_timing) out << format_number(r.runtime_s, 6, true);
    out << ',' << (r.timed_out ? "true" : "false") << ',';
    for (std::size_t i = 0; i < r.seed_labels.size(); ++i) out << (i ? ";" : "") << r.seed_labels[i];
    out << '\n';
  }
  return out.str();
}

/// Writes results.csv, communities.csv, plots/, seeds/ and traces/ under
/// `out`. Returns the paths written.
inline std::vector<fs::path> emit_results(const ExperimentRun& run, const fs::path& out) {
  using detail::format_number;
  if (run.rows.empty()) throw std::invalid_argument("no result rows to emit");
  std::error_code ec;
  fs::create_directories(out / "plots", ec);
  fs::create_directories(out / "seeds", ec);
  fs::create_directories(out / "traces", ec);
  if (ec) throw std::runtime_error("cannot create output directory " + out.string() + ": " + ec.message());
  const bool timing = run.config.record_timing;
  std::vector<fs::path> written;
  auto emit = [&](const fs::path& path, const std::string& content) {
    detail::write_file(path, content);
    written.push_back(path);
  };

  emit(out / "results.csv", results_table(run.rows, timing));

  if (!run.detections.empty()) {
    std::ostringstream det;
    det << "dataset,similarity,alpha,communities,modularity,detection_s\n";
    for (const auto& d : run.detections) {
      det << d.dataset << ',' << d.similarity << ',' << (d.alpha ? format_number(*d.alpha, 6, false) : "") << ','
          << d.communities << ',' << format_number(d.modularity, 6, true) << ','
          << (timing ? format_number(d.seconds, 6, true) : "") << '\n';
    }
    emit(out / "communities.csv", det.str());
  }

  // Plot data: per (dataset, k) a p-series per method; per (dataset, p) a
  // k-series per method when the k grid has more than one value.
  auto series_file = [&](const std::string& dataset, bool by_k, double fixed) {
    std::ostringstream s;
    const std::string axis = by_k ? "p" : "k";
    bool first_block = true;
    for (Method m : run.config.methods) {
      std::ostringstream block;
      std::size_t points = 0;
      for (const auto& r : run.rows) {
        if (r.dataset != dataset || r.method != m || r.timed_out || !r.sigma) continue;
        if (by_k ? r.k != static_cast<std::size_t>(fixed) : r.p != fixed) continue;
        block << (by_k ? detail::format_p(r.p) : std::to_string(r.k)) << ' ' << format_number(r.sigma->mean, 4, true)
              << '\n';
        ++points;
      }
      if (!first_block) s << "\n\n";
      first_block = false;
      s << "# dataset=" << dataset << ' ' << (by_k ? "k=" + std::to_string(static_cast<std::size_t>(fixed))
                                                   : "p=" + detail::format_p(fixed))
        << " method=" << method_name(m) << " points=" << points << '\n';
      s << "# " << axis << " sigma_mean\n" << block.str();
    }
    return s.str();
  };
  std::vector<std::string> datasets;
  for (const auto& r : run.rows) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end()) datasets.push_back(r.dataset);
  }
  for (const auto& d : datasets) {
    for (std::size_t k : run.config.k_values) {
      emit(out / "plots" / (detail::file_token(d) + "_k" + std::to_string(k) + ".dat"), series_file(d, true, double(k)));
    }
    if (run.config.k_values.size() > 1) {
      for (double p : run.config.p_values) {
        emit(out / "plots" / (detail::file_token(d) + "_p" + detail::format_p(p) + ".dat"), series_file(d, false, p));
      }
    }
  }

  for (const auto& r : run.rows) {
    if (!r.seeds) continue;
    const Graph& g = run.graphs.at(r.dataset);
    const std::string stem = detail::file_token(r.dataset) + "_" + std::string(method_name(r.method)) + "_k" +
                             std::to_string(r.k) + "_p" + detail::format_p(r.p);
    std::ostringstream seeds;
    write_seed_set(g, *r.seeds, seeds);
    emit(out / "seeds" / (stem + ".txt"), seeds.str());
    if (r.trace) {
      std::ostringstream trace;
      write_trace(g, *r.seeds, *r.trace, trace);
      emit(out / "traces" / (stem + ".txt"), trace.str());
    }
  }
  return written;
}

}  // namespace hcim::bench
