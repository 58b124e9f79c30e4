#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hcim/community.hpp"
#include "hcim/graph.hpp"

namespace hcim {

struct ScoreConfig {
  long long theta = 2;

  void validate() const {
    if (theta < 0) throw std::domain_error("coverage radius must be nonnegative");
  }
};

/// Propagator score: over every edge (u, w) of the subgraph induced by the
/// radius-theta coverage of v, add the number of common neighbors of u and w
/// in the full graph. Lower means fewer converging propagation paths.
inline std::uint64_t propagator_score(const Graph& g, Vertex v, const ScoreConfig& cfg) {
  cfg.validate();
  const NodeSet cover = coverage(g, v, cfg.theta);
  std::vector<char> inside(g.num_vertices(), 0);
  for (Vertex u : cover) inside[u] = 1;
  std::uint64_t score = 0;
  for (Vertex u : cover) {
    for (Vertex w : g.neighbors(u)) {
      if (u < w && inside[w]) score += detail::intersection_size(g.neighbors(u), g.neighbors(w));
    }
  }
  return score;
}

/// Memoized propagator scores for one graph and radius.
class ScoreTable {
 public:
  ScoreTable(const Graph& g, ScoreConfig cfg) : g_(&g), cfg_(cfg), cache_(g.num_vertices()) { cfg.validate(); }

  std::uint64_t operator()(Vertex v) const {
    g_->check(v);
    auto& slot = cache_[v];
    if (!slot) slot = propagator_score(*g_, v, cfg_);
    return *slot;
  }

  const ScoreConfig& config() const { return cfg_; }

 private:
  const Graph* g_;
  ScoreConfig cfg_;
  mutable std::vector<std::optional<std::uint64_t>> cache_;
};

/// Candidate with the smallest score; ties go to the smallest id.
inline Vertex min_score_node(const ScoreTable& scores, std::span<const Vertex> candidates) {
  if (candidates.empty()) throw std::domain_error("min_score_node: no candidates");
  Vertex best = candidates.front();
  std::uint64_t best_score = scores(best);
  for (Vertex c : candidates.subspan(1)) {
    const std::uint64_t s = scores(c);
    if (s < best_score || (s == best_score && c < best)) {
      best = c;
      best_score = s;
    }
  }
  return best;
}

inline Vertex min_score_node(const Graph& g, std::span<const Vertex> candidates, const ScoreConfig& cfg) {
  return min_score_node(ScoreTable(g, cfg), candidates);
}

}  // namespace hcim
