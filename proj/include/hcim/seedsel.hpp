#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hcim/community.hpp"
#include "hcim/diffusion.hpp"
#include "hcim/graph.hpp"
#include "hcim/parallel.hpp"
#include "hcim/scoring.hpp"

namespace hcim {

enum class Method { Hcim, AlphaHcim, Greedy, Celf };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::Hcim: return "hcim";
    case Method::AlphaHcim: return "alpha-hcim";
    case Method::Greedy: return "greedy";
    case Method::Celf: return "celf";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  for (Method m : {Method::Hcim, Method::AlphaHcim, Method::Greedy, Method::Celf}) {
    if (method_name(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

/// Ordered seed vertices plus the parameters that produced them.
struct SeedSet {
  std::vector<Vertex> members;
  Method method = Method::Greedy;
  std::size_t k = 0;
  DiffusionParams params;
  long long theta = 2;
  std::optional<double> alpha;
};

class TimedOut : public std::runtime_error {
 public:
  TimedOut() : std::runtime_error("selection exceeded its time budget") {}
};

struct SelectOptions {
  unsigned workers = 1;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Incremented once per estimate_spread call when set.
  std::atomic<std::size_t>* evaluations = nullptr;

  void check_deadline() const {
    if (deadline && std::chrono::steady_clock::now() > *deadline) throw TimedOut();
  }
  void count_evaluation() const {
    if (evaluations) evaluations->fetch_add(1, std::memory_order_relaxed);
  }
};

namespace detail {

inline void check_k(const Graph& g, std::size_t k) {
  if (k < 1) throw std::domain_error("k must be at least 1");
  if (k > g.num_vertices()) throw std::domain_error("k exceeds the number of vertices");
}

inline SpreadEstimate counted_spread(const Graph& g, std::span<const Vertex> seeds, const DiffusionParams& params,
                                     const SelectOptions& opt, unsigned workers = 1) {
  opt.check_deadline();
  opt.count_evaluation();
  return estimate_spread(g, seeds, params, workers);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Greedy and CELF
//
// Every spread evaluation in one selection run uses the replication streams
// of params.master_seed. Under a fixed set of streams the estimated total
// activation count is an average of reachability counts over fixed
// live-arc worlds, hence exactly monotone and submodular, so the lazy
// evaluation in celf() never skips a candidate greedy() would pick. Ties go
// to the smallest vertex id in both.
// ---------------------------------------------------------------------------

inline SeedSet greedy(const Graph& g, std::size_t k, const DiffusionParams& params, const SelectOptions& opt = {}) {
  detail::check_k(g, k);
  params.validate();
  const std::size_t n = g.num_vertices();
  SeedSet out{{}, Method::Greedy, k, params, 0, std::nullopt};
  std::vector<char> chosen(n, 0);
  std::vector<std::uint64_t> totals(n);
  for (std::size_t round = 0; round < k; ++round) {
    parallel_blocks(n, opt.workers, [&](unsigned, std::size_t begin, std::size_t end) {
      std::vector<Vertex> trial = out.members;
      trial.push_back(0);
      for (std::size_t u = begin; u < end; ++u) {
        if (chosen[u]) continue;
        trial.back() = static_cast<Vertex>(u);
        totals[u] = detail::counted_spread(g, trial, params, opt).total_active;
      }
    });
    std::optional<Vertex> best;
    for (Vertex u = 0; u < n; ++u) {
      if (!chosen[u] && (!best || totals[u] > totals[*best])) best = u;
    }
    chosen[*best] = 1;
    out.members.push_back(*best);
  }
  return out;
}

inline SeedSet celf(const Graph& g, std::size_t k, const DiffusionParams& params, const SelectOptions& opt = {}) {
  detail::check_k(g, k);
  params.validate();
  const std::size_t n = g.num_vertices();
  SeedSet out{{}, Method::Celf, k, params, 0, std::nullopt};

  struct Entry {
    std::uint64_t gain;  // marginal gain in total activations
    Vertex vertex;
    std::size_t round;   // |S| when `gain` was computed
    bool operator<(const Entry& o) const {
      if (gain != o.gain) return gain < o.gain;
      return vertex > o.vertex;
    }
  };

  std::vector<std::uint64_t> initial(n);
  parallel_blocks(n, opt.workers, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      const Vertex seed[] = {static_cast<Vertex>(u)};
      initial[u] = detail::counted_spread(g, seed, params, opt).total_active;
    }
  });
  std::vector<Entry> heap;
  heap.reserve(n);
  for (Vertex u = 0; u < n; ++u) heap.push_back({initial[u], u, 0});
  std::priority_queue<Entry> queue(std::less<Entry>{}, std::move(heap));

  std::uint64_t current = 0;
  std::vector<Vertex> trial;
  while (out.members.size() < k) {
    Entry top = queue.top();
    queue.pop();
    if (top.round == out.members.size()) {
      out.members.push_back(top.vertex);
      current += top.gain;
      continue;
    }
    trial = out.members;
    trial.push_back(top.vertex);
    const std::uint64_t total = detail::counted_spread(g, trial, params, opt, opt.workers).total_active;
    top.gain = total - current;
    top.round = out.members.size();
    queue.push(top);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Community-based selection
// ---------------------------------------------------------------------------

struct SelectionTrace {
  struct CommunityPick {
    std::size_t community;  // index in the input partition
    Vertex node;
    double spread;          // estimated on the community's induced subgraph
  };
  struct ScorePick {
    Vertex node;
    std::uint64_t score;
  };
  struct SwapAttempt {
    Vertex incoming;  // lowest-score remaining singleton
    Vertex outgoing;  // seed from the smallest community, latest on ties
    double spread_before;
    double spread_after;
    bool accepted;
  };

  std::vector<CommunityPick> community_picks;
  std::vector<ScorePick> score_picks;
  std::vector<SwapAttempt> swaps;

  /// Reconstructs the seed sequence the trace describes.
  std::vector<Vertex> replay() const {
    std::vector<Vertex> seeds;
    for (const auto& p : community_picks) seeds.push_back(p.node);
    for (const auto& p : score_picks) seeds.push_back(p.node);
    for (const auto& s : swaps) {
      if (!s.accepted) continue;
      std::erase(seeds, s.outgoing);
      seeds.push_back(s.incoming);
    }
    return seeds;
  }
};

struct CommunitySelection {
  SeedSet seeds;
  SelectionTrace trace;
};

/// Three phases:
///  1. Visit communities of size > 1 from largest to smallest, repeatedly,
///     taking from each the remaining member with the largest spread
///     within the community's induced subgraph, until k seeds are chosen or
///     every such community is used up.
///  2. Fill up from the singleton communities by lowest propagator score.
///  3. While singletons remain, try replacing the seed from the smallest
///     community (most recent on ties) by the lowest-score singleton; keep
///     the first swap that raises the full-graph spread estimate, otherwise
///     revert it and drop that singleton from consideration.
inline CommunitySelection select_community_based(const Graph& g, const Partition& partition, std::size_t k,
                                                 const DiffusionParams& params, long long theta,
                                                 const SelectOptions& opt = {}) {
  detail::check_k(g, k);
  params.validate();
  partition.validate(g.num_vertices());
  const ScoreTable scores(g, ScoreConfig{theta});

  CommunitySelection result;
  auto& seeds = result.seeds.members;
  auto& trace = result.trace;
  result.seeds.k = k;
  result.seeds.params = params;
  result.seeds.theta = theta;

  const CommunitySplit split = partition_split(partition);

  struct Pool {
    std::size_t community;
    std::vector<Vertex> members;
    std::vector<double> spread;
    std::vector<std::uint64_t> total;
    std::vector<char> taken;
    std::size_t remaining;
  };
  std::vector<Pool> pools;
  pools.reserve(split.big.size());
  for (const auto& c : split.big) {
    pools.push_back({partition.assignment[c.front()], c, {}, {}, std::vector<char>(c.size(), 0), c.size()});
  }
  auto evaluate_pool = [&](Pool& pool) {
    if (!pool.total.empty()) return;
    const Graph sub = induced_subgraph(g, pool.members);
    pool.total.resize(pool.members.size());
    pool.spread.resize(pool.members.size());
    parallel_blocks(pool.members.size(), opt.workers, [&](unsigned, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Vertex local[] = {static_cast<Vertex>(i)};
        const auto est = detail::counted_spread(sub, local, params, opt);
        pool.total[i] = est.total_active;
        pool.spread[i] = est.mean;
      }
    });
  };

  // Phase 1.
  bool progressed = true;
  while (seeds.size() < k && progressed) {
    progressed = false;
    for (auto& pool : pools) {
      if (pool.remaining == 0) continue;
      evaluate_pool(pool);
      std::optional<std::size_t> best;
      for (std::size_t i = 0; i < pool.members.size(); ++i) {
        if (!pool.taken[i] && (!best || pool.total[i] > pool.total[*best])) best = i;
      }
      pool.taken[*best] = 1;
      --pool.remaining;
      seeds.push_back(pool.members[*best]);
      trace.community_picks.push_back({pool.community, pool.members[*best], pool.spread[*best]});
      progressed = true;
      if (seeds.size() == k) break;
    }
  }

  // Phase 2.
  std::vector<Vertex> singles;
  for (const auto& c : split.singletons) singles.push_back(c.front());
  while (seeds.size() < k) {
    const Vertex pick = min_score_node(scores, singles);
    seeds.push_back(pick);
    std::erase(singles, pick);
    trace.score_picks.push_back({pick, scores(pick)});
  }

  // Phase 3.
  if (!singles.empty()) {
    const SpreadEstimate before = detail::counted_spread(g, seeds, params, opt, opt.workers);
    std::size_t outgoing_pos = 0;
    for (std::size_t i = 1; i < seeds.size(); ++i) {
      if (size_com(partition, seeds[i]) <= size_com(partition, seeds[outgoing_pos])) outgoing_pos = i;
    }
    const Vertex outgoing = seeds[outgoing_pos];
    while (!singles.empty()) {
      const Vertex incoming = min_score_node(scores, singles);
      std::vector<Vertex> swapped = seeds;
      swapped.erase(swapped.begin() + static_cast<std::ptrdiff_t>(outgoing_pos));
      swapped.push_back(incoming);
      const SpreadEstimate after = detail::counted_spread(g, swapped, params, opt, opt.workers);
      const bool accepted = after.total_active > before.total_active;
      trace.swaps.push_back({incoming, outgoing, before.mean, after.mean, accepted});
      if (accepted) {
        seeds = std::move(swapped);
        break;
      }
      std::erase(singles, incoming);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline std::string seed_set_header(const SeedSet& s) {
  std::ostringstream out;
  out << "# method=" << method_name(s.method) << " k=" << s.k << " p=" << s.params.p
      << " r=" << s.params.replications << " seed=" << s.params.master_seed << " theta=" << s.theta;
  if (s.alpha) out << " alpha=" << *s.alpha;
  return out.str();
}

/// Header line with method and parameters, then one vertex label per line.
inline void write_seed_set(const Graph& g, const SeedSet& s, std::ostream& out) {
  out << seed_set_header(s) << '\n';
  for (Vertex v : s.members) out << g.label(v) << '\n';
}

inline SeedSet read_seed_set(const Graph& g, std::istream& in) {
  SeedSet s;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw ParseError(1, "missing seed set header");
  std::istringstream header(line.substr(2));
  for (std::string field; header >> field;) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ParseError(1, "malformed header field '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "method") s.method = parse_method(value);
    else if (key == "k") s.k = std::stoull(value);
    else if (key == "p") s.params.p = std::stod(value);
    else if (key == "r") s.params.replications = std::stoull(value);
    else if (key == "seed") s.params.master_seed = std::stoull(value);
    else if (key == "theta") s.theta = std::stoll(value);
    else if (key == "alpha") s.alpha = std::stod(value);
    else throw ParseError(1, "unknown header field '" + key + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto v = g.find(line);
    if (!v) throw ParseError(line_no, "unknown vertex label '" + line + "'");
    s.members.push_back(*v);
  }
  return s;
}

inline void write_trace(const Graph& g, const SeedSet& s, const SelectionTrace& t, std::ostream& out) {
  out << seed_set_header(s) << '\n';
  for (const auto& p : t.community_picks) {
    out << "community-pick community=" << p.community << " node=" << g.label(p.node) << " spread=" << p.spread
        << '\n';
  }
  for (const auto& p : t.score_picks) out << "score-pick node=" << g.label(p.node) << " score=" << p.score << '\n';
  for (const auto& sw : t.swaps) {
    out << "swap in=" << g.label(sw.incoming) << " out=" << g.label(sw.outgoing) << " before=" << sw.spread_before
        << " after=" << sw.spread_after << " accepted=" << (sw.accepted ? "yes" : "no") << '\n';
  }
}

}  // namespace hcim
