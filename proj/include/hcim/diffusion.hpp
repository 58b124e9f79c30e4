#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcim/graph.hpp"
#include "hcim/parallel.hpp"
#include "hcim/rng.hpp"

namespace hcim {

/// Independent Cascade parameters with a uniform activation probability.
struct DiffusionParams {
  double p = 0.1;
  std::size_t replications = 100;
  std::uint64_t master_seed = 0;

  void validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("activation probability must lie in [0, 1]");
    if (replications < 1) throw std::domain_error("replication count must be at least 1");
  }
};

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
  /// Sum of final active-set sizes over all replications. Exact, so
  /// comparisons between estimates under the same seed are exact too.
  std::uint64_t total_active = 0;
};

/// One activation event: `activator` (newly active in round - 1) switched
/// `target` on in `round`. Seeds are round 0 and are not recorded.
struct Activation {
  std::size_t round;
  Vertex activator;
  Vertex target;
};

/// Stream key driving replication `index` under `master_seed`.
inline std::uint64_t replication_stream(std::uint64_t master_seed, std::uint64_t index) {
  return rng::derive(master_seed, index);
}

/// Reusable IC cascade runner. Holds scratch buffers; one instance per thread.
///
/// Each directed arc u->v owns one Bernoulli draw per replication stream,
/// keyed by its arc id. Within a cascade an arc is attempted at most once
/// (only when u is newly active and v still inactive), so this is the IC
/// process exactly, and two seed sets run under the same stream see the
/// same coin flips.
class CascadeSimulator {
 public:
  explicit CascadeSimulator(const Graph& g) : g_(&g), stamp_(g.num_vertices(), 0) {}

  /// Returns the final active-set size. The active set is left in
  /// `active()` until the next call.
  std::size_t run(std::span<const Vertex> seeds, double p, std::uint64_t stream,
                  std::vector<Activation>* trace = nullptr) {
    if (seeds.empty()) throw std::domain_error("seed set must be nonempty");
    const rng::BernoulliStream coin(stream, p);
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    active_.clear();
    frontier_.clear();
    for (Vertex s : seeds) {
      g_->check(s);
      if (stamp_[s] != epoch_) {
        stamp_[s] = epoch_;
        frontier_.push_back(s);
        active_.push_back(s);
      }
    }
    std::sort(frontier_.begin(), frontier_.end());
    std::size_t round = 0;
    while (!frontier_.empty()) {
      ++round;
      next_.clear();
      for (Vertex u : frontier_) {
        const auto nb = g_->neighbors(u);
        const std::size_t base = g_->arc_begin(u);
        for (std::size_t i = 0; i < nb.size(); ++i) {
          const Vertex v = nb[i];
          if (stamp_[v] == epoch_) continue;
          if (coin(base + i)) {
            stamp_[v] = epoch_;
            next_.push_back(v);
            active_.push_back(v);
            if (trace) trace->push_back({round, u, v});
          }
        }
      }
      std::sort(next_.begin(), next_.end());
      frontier_.swap(next_);
    }
    return active_.size();
  }

  /// Vertices active after the last run, in activation order.
  std::span<const Vertex> active() const { return active_; }

 private:
  const Graph* g_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<Vertex> active_;
  std::vector<Vertex> frontier_;
  std::vector<Vertex> next_;
};

/// One IC realization; returns the final active set.
inline NodeSet simulate_once(const Graph& g, std::span<const Vertex> seeds, double p,
                             std::uint64_t stream, std::vector<Activation>* trace = nullptr) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("activation probability must lie in [0, 1]");
  CascadeSimulator sim(g);
  sim.run(seeds, p, stream, trace);
  return make_node_set({sim.active().begin(), sim.active().end()});
}

/// Writes "round activator target" per activation, using vertex labels.
inline void write_trace(const Graph& g, std::span<const Activation> trace, std::ostream& out) {
  for (const auto& a : trace) {
    out << a.round << ' ' << g.label(a.activator) << ' ' << g.label(a.target) << '\n';
  }
}

/// Monte Carlo estimate of the expected final active-set size. Replication i
/// uses stream replication_stream(master_seed, i), so the result does not
/// depend on `workers`.
inline SpreadEstimate estimate_spread(const Graph& g, std::span<const Vertex> seeds,
                                      const DiffusionParams& params, unsigned workers = 1) {
  params.validate();
  if (seeds.empty()) throw std::domain_error("seed set must be nonempty");
  for (Vertex s : seeds) g.check(s);
  const std::size_t r = params.replications;
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), r));
  std::vector<std::uint64_t> sums(used, 0), squares(used, 0);
  parallel_blocks(r, used, [&](unsigned w, std::size_t begin, std::size_t end) {
    CascadeSimulator sim(g);
    std::uint64_t sum = 0, sq = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t size = sim.run(seeds, params.p, replication_stream(params.master_seed, i));
      sum += size;
      sq += size * size;
    }
    sums[w] = sum;
    squares[w] = sq;
  });
  SpreadEstimate est;
  est.replications = r;
  est.total_active = std::accumulate(sums.begin(), sums.end(), std::uint64_t{0});
  const std::uint64_t total_sq = std::accumulate(squares.begin(), squares.end(), std::uint64_t{0});
  const double rd = static_cast<double>(r);
  est.mean = static_cast<double>(est.total_active) / rd;
  if (r > 1) {
    const double var = (static_cast<double>(total_sq) - rd * est.mean * est.mean) / (rd - 1.0);
    est.std_error = std::sqrt(std::max(0.0, var) / rd);
  }
  return est;
}

class RefusalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxExactEdges = 24;

namespace detail {

struct DisjointSets {
  std::vector<Vertex> parent;
  std::vector<std::uint32_t> size;

  explicit DisjointSets(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), Vertex{0});
  }
  Vertex find(Vertex x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return true;
  }
};

/// Calls fn(weight, components) for every live-edge world of g.
template <typename Fn>
void for_each_world(const Graph& g, double p, Fn&& fn) {
  const auto edges = g.edges();
  if (edges.size() > kMaxExactEdges) {
    throw RefusalError("exact enumeration refused: " + std::to_string(edges.size()) + " edges exceeds " +
                       std::to_string(kMaxExactEdges));
  }
  const std::uint64_t worlds = std::uint64_t{1} << edges.size();
  for (std::uint64_t mask = 0; mask < worlds; ++mask) {
    DisjointSets ds(g.num_vertices());
    double weight = 1.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (mask >> e & 1u) {
        weight *= p;
        ds.unite(edges[e].first, edges[e].second);
      } else {
        weight *= 1.0 - p;
      }
    }
    if (weight == 0.0) continue;
    fn(weight, ds);
  }
}

inline std::size_t reached(DisjointSets& ds, std::span<const Vertex> seeds, std::vector<Vertex>& roots) {
  roots.clear();
  std::size_t total = 0;
  for (Vertex s : seeds) {
    const Vertex r = ds.find(s);
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) {
      roots.push_back(r);
      total += ds.size[r];
    }
  }
  return total;
}

}  // namespace detail

/// Exact expected spread by enumerating all 2^|E| live-edge worlds.
/// Refuses graphs with more than kMaxExactEdges edges.
inline double exact_spread(const Graph& g, std::span<const Vertex> seeds, double p) {
  if (seeds.empty()) throw std::domain_error("seed set must be nonempty");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("activation probability must lie in [0, 1]");
  for (Vertex s : seeds) g.check(s);
  double total = 0.0;
  std::vector<Vertex> roots;
  detail::for_each_world(g, p, [&](double w, detail::DisjointSets& ds) {
    total += w * static_cast<double>(detail::reached(ds, seeds, roots));
  });
  return total;
}

struct OptimumResult {
  NodeSet seeds;
  double value = 0.0;
};

inline constexpr std::uint64_t kMaxBruteForceSubsets = 100000;

/// Exhaustive optimum over all k-subsets under exact_spread. Ties go to the
/// lexicographically smallest subset.
inline OptimumResult brute_force_optimum(const Graph& g, std::size_t k, double p) {
  const std::size_t n = g.num_vertices();
  if (k < 1 || k > n) throw std::domain_error("k must lie in [1, n]");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("activation probability must lie in [0, 1]");
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < k; ++i) {
    combos = combos * (n - i) / (i + 1);
    if (combos > kMaxBruteForceSubsets) throw RefusalError("brute force refused: too many subsets");
  }
  if (g.num_edges() > kMaxExactEdges) throw RefusalError("brute force refused: too many edges");

  // Subsets in lexicographic order.
  std::vector<Vertex> subsets;
  subsets.reserve(combos * k);
  std::vector<Vertex> cur(k);
  std::iota(cur.begin(), cur.end(), Vertex{0});
  while (true) {
    subsets.insert(subsets.end(), cur.begin(), cur.end());
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }

  std::vector<double> values(combos, 0.0);
  std::vector<Vertex> roots;
  detail::for_each_world(g, p, [&](double w, detail::DisjointSets& ds) {
    for (std::size_t c = 0; c < combos; ++c) {
      const std::span<const Vertex> s(subsets.data() + c * k, k);
      values[c] += w * static_cast<double>(detail::reached(ds, s, roots));
    }
  });
  std::size_t best = 0;
  for (std::size_t c = 1; c < combos; ++c) {
    // Sums of identical terms in different order can differ in the last ulp.
    if (values[c] > values[best] * (1.0 + 1e-12)) best = c;
  }
  OptimumResult out;
  out.seeds.assign(subsets.begin() + static_cast<std::ptrdiff_t>(best * k),
                   subsets.begin() + static_cast<std::ptrdiff_t>((best + 1) * k));
  out.value = values[best];
  return out;
}

}  // namespace hcim
