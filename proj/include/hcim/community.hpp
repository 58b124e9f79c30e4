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

namespace hcim {

/// Disjoint cover of the vertex set. Communities are ordered by their
/// smallest member and `assignment[u]` is the index of u's community.
struct Partition {
  std::vector<NodeSet> communities;
  std::vector<std::size_t> assignment;

  /// Builds the canonical partition from arbitrary per-vertex group keys.
  static Partition from_labels(std::span<const std::size_t> keys) {
    Partition p;
    const std::size_t n = keys.size();
    p.assignment.assign(n, 0);
    std::vector<std::size_t> key_to_index;
    std::size_t max_key = 0;
    for (auto k : keys) max_key = std::max(max_key, k);
    key_to_index.assign(n == 0 ? 0 : max_key + 1, SIZE_MAX);
    for (Vertex u = 0; u < n; ++u) {
      auto& slot = key_to_index[keys[u]];
      if (slot == SIZE_MAX) {
        slot = p.communities.size();
        p.communities.emplace_back();
      }
      p.communities[slot].push_back(u);
      p.assignment[u] = slot;
    }
    return p;
  }

  static Partition singletons(std::size_t n) {
    std::vector<std::size_t> keys(n);
    std::iota(keys.begin(), keys.end(), std::size_t{0});
    return from_labels(keys);
  }

  static Partition from_communities(std::size_t n, const std::vector<NodeSet>& groups) {
    std::vector<std::size_t> keys(n, SIZE_MAX);
    for (std::size_t c = 0; c < groups.size(); ++c) {
      for (Vertex u : groups[c]) {
        if (u >= n) throw std::out_of_range("community member out of range");
        if (keys[u] != SIZE_MAX) throw std::invalid_argument("communities overlap");
        keys[u] = c;
      }
    }
    for (auto k : keys) {
      if (k == SIZE_MAX) throw std::invalid_argument("communities do not cover every vertex");
    }
    return from_labels(keys);
  }

  std::size_t num_vertices() const { return assignment.size(); }
  std::size_t size() const { return communities.size(); }

  /// Throws std::invalid_argument unless this is a valid partition of [0, n).
  void validate(std::size_t n) const {
    if (assignment.size() != n) throw std::invalid_argument("partition does not match vertex count");
    std::vector<char> seen(n, 0);
    for (std::size_t c = 0; c < communities.size(); ++c) {
      if (communities[c].empty()) throw std::invalid_argument("empty community");
      for (Vertex u : communities[c]) {
        if (u >= n) throw std::invalid_argument("community member out of range");
        if (seen[u]) throw std::invalid_argument("communities overlap");
        if (assignment[u] != c) throw std::invalid_argument("assignment inconsistent with communities");
        seen[u] = 1;
      }
    }
    if (std::count(seen.begin(), seen.end(), 0) != 0) throw std::invalid_argument("partition misses a vertex");
  }
};

enum class SimilarityKind { TwoS, AlphaTwoS };

struct SimilaritySpec {
  SimilarityKind kind = SimilarityKind::AlphaTwoS;
  double alpha = 1.0;

  void validate() const {
    if (!(alpha >= 0.0)) throw std::domain_error("alpha must be nonnegative");
  }
};

namespace detail {

/// Sorted Nei(x) ∪ {x}.
inline NodeSet closed_neighborhood(const Graph& g, Vertex x) {
  const auto nb = g.neighbors(x);
  NodeSet out;
  out.reserve(nb.size() + 1);
  auto it = std::lower_bound(nb.begin(), nb.end(), x);
  out.insert(out.end(), nb.begin(), it);
  out.push_back(x);
  out.insert(out.end(), it, nb.end());
  return out;
}

inline NodeSet intersect(std::span<const Vertex> a, std::span<const Vertex> b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::size_t intersection_size(std::span<const Vertex> a, std::span<const Vertex> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

inline void check_pair(const Graph& g, Vertex u, Vertex v) {
  g.check(u);
  g.check(v);
  if (u == v) throw std::domain_error("similarity of a vertex with itself is undefined");
}

}  // namespace detail

/// Structural similarity |Γ(u) ∩ Γ(v)| / sqrt(|Γ(u)| |Γ(v)|) over closed
/// neighborhoods Γ.
inline double similarity_2s(const Graph& g, Vertex u, Vertex v) {
  detail::check_pair(g, u, v);
  const auto gu = detail::closed_neighborhood(g, u);
  const auto gv = detail::closed_neighborhood(g, v);
  const double common = static_cast<double>(detail::intersection_size(gu, gv));
  return common / std::sqrt(static_cast<double>(gu.size() * gv.size()));
}

/// Edges of g with both endpoints in `members` (sorted).
inline std::size_t edges_within(const Graph& g, std::span<const Vertex> members) {
  std::size_t twice = 0;
  for (Vertex x : members) twice += detail::intersection_size(g.neighbors(x), members);
  return twice / 2;
}

/// Structural similarity whose numerator also counts, weighted by alpha,
/// the edges joining members of the shared closed neighborhood.
inline double similarity_alpha2s(const Graph& g, Vertex u, Vertex v, double alpha) {
  detail::check_pair(g, u, v);
  if (!(alpha >= 0.0)) throw std::domain_error("alpha must be nonnegative");
  const auto gu = detail::closed_neighborhood(g, u);
  const auto gv = detail::closed_neighborhood(g, v);
  const auto common = detail::intersect(gu, gv);
  const double links = alpha == 0.0 ? 0.0 : static_cast<double>(edges_within(g, common));
  return (static_cast<double>(common.size()) + alpha * links) /
         std::sqrt(static_cast<double>(gu.size() * gv.size()));
}

inline double similarity(const Graph& g, Vertex u, Vertex v, const SimilaritySpec& spec) {
  return spec.kind == SimilarityKind::TwoS ? similarity_2s(g, u, v) : similarity_alpha2s(g, u, v, spec.alpha);
}

struct StoppingRule {
  enum class Kind { ModularityPeak, CommunityCount };
  Kind kind = Kind::ModularityPeak;
  std::size_t target = 0;

  static StoppingRule modularity_peak() { return {}; }
  static StoppingRule community_count(std::size_t count) { return {Kind::CommunityCount, count}; }
};

/// Newman modularity. Throws on an edgeless graph.
inline double modularity(const Graph& g, const Partition& p) {
  p.validate(g.num_vertices());
  const std::size_t m = g.num_edges();
  if (m == 0) throw std::domain_error("modularity undefined on an edgeless graph");
  const double two_m = 2.0 * static_cast<double>(m);
  double q = 0.0;
  for (const auto& c : p.communities) {
    std::size_t degree_sum = 0;
    for (Vertex u : c) degree_sum += g.degree(u);
    const double share = static_cast<double>(degree_sum) / two_m;
    q += static_cast<double>(edges_within(g, c)) / static_cast<double>(m) - share * share;
  }
  return q;
}

struct ClusteringResult {
  Partition partition;
  double modularity = 0.0;  // 0 for edgeless graphs
  std::size_t merges = 0;   // merges applied to reach `partition`
};

/// Agglomerative clustering: single-link over edge similarities computed
/// once on g. Edges are processed by (similarity desc, smaller endpoint,
/// larger endpoint); each edge joining two communities merges them. The
/// partition kept is the one selected by `stop` along that merge sequence.
inline ClusteringResult hierarchical_clustering_detailed(const Graph& g, const SimilaritySpec& spec,
                                                        StoppingRule stop = StoppingRule::modularity_peak(),
                                                        unsigned workers = 1) {
  spec.validate();
  const std::size_t n = g.num_vertices();
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  std::vector<double> sim(m);
  parallel_blocks(m, workers, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) sim[e] = similarity(g, edges[e].first, edges[e].second, spec);
  });
  // edges are already sorted by endpoint pair, so a stable sort on
  // similarity yields the full tie-break order.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sim[a] > sim[b]; });

  // Modularity scaled by 4m^2 is the integer 4m * intra - sum_c d_c^2.
  std::vector<std::size_t> owner(n);
  std::iota(owner.begin(), owner.end(), std::size_t{0});
  std::vector<std::vector<Vertex>> members(n);
  std::vector<std::int64_t> degree_sum(n);
  std::int64_t sum_sq = 0;
  for (Vertex u = 0; u < n; ++u) {
    members[u] = {u};
    degree_sum[u] = static_cast<std::int64_t>(g.degree(u));
    sum_sq += degree_sum[u] * degree_sum[u];
  }
  std::int64_t intra = 0;
  const std::int64_t four_m = 4 * static_cast<std::int64_t>(m);

  std::vector<std::size_t> merge_edges;  // edge index of each effective merge
  std::size_t communities = n;
  std::int64_t best_score = -sum_sq;
  std::size_t best_step = 0;
  const bool by_count = stop.kind == StoppingRule::Kind::CommunityCount;
  if (by_count && stop.target < 1) throw std::domain_error("community count target must be at least 1");

  // Peak candidates are cuts between similarity levels; merges of equal
  // similarity land together, which keeps the cut independent of vertex ids.
  for (std::size_t i = 0; i < m; ++i) {
    if (by_count && communities <= stop.target) break;
    const std::size_t e = order[i];
    const bool level_end = i + 1 == m || sim[order[i + 1]] != sim[e];
    std::size_t a = owner[edges[e].first];
    std::size_t b = owner[edges[e].second];
    if (a == b) {
      if (!by_count && level_end && four_m * intra - sum_sq > best_score) {
        best_score = four_m * intra - sum_sq;
        best_step = merge_edges.size();
      }
      continue;
    }
    if (members[a].size() < members[b].size()) std::swap(a, b);
    for (Vertex x : members[b]) {
      for (Vertex y : g.neighbors(x)) {
        if (owner[y] == a) ++intra;
      }
    }
    for (Vertex x : members[b]) owner[x] = a;
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
    members[b].shrink_to_fit();
    sum_sq += 2 * degree_sum[a] * degree_sum[b];
    degree_sum[a] += degree_sum[b];
    degree_sum[b] = 0;
    --communities;
    merge_edges.push_back(e);
    const std::int64_t score = four_m * intra - sum_sq;
    if (!by_count && level_end && score > best_score) {
      best_score = score;
      best_step = merge_edges.size();
    }
  }
  if (by_count) best_step = merge_edges.size();

  // Replay the chosen prefix of the merge sequence.
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (std::size_t s = 0; s < best_step; ++s) {
    const auto [u, v] = edges[merge_edges[s]];
    root[find(u)] = find(v);
  }
  std::vector<std::size_t> keys(n);
  for (Vertex u = 0; u < n; ++u) keys[u] = find(u);

  ClusteringResult out;
  out.partition = Partition::from_labels(keys);
  out.merges = best_step;
  out.modularity = m == 0 ? 0.0 : modularity(g, out.partition);
  return out;
}

inline Partition hierarchical_clustering(const Graph& g, const SimilaritySpec& spec,
                                         StoppingRule stop = StoppingRule::modularity_peak()) {
  return hierarchical_clustering_detailed(g, spec, stop).partition;
}

struct CommunitySplit {
  std::vector<NodeSet> singletons;  // communities of size 1
  std::vector<NodeSet> big;         // size > 1, by size desc then smallest member
};

inline CommunitySplit partition_split(const Partition& p) {
  CommunitySplit out;
  for (const auto& c : p.communities) (c.size() == 1 ? out.singletons : out.big).push_back(c);
  std::stable_sort(out.big.begin(), out.big.end(), [](const NodeSet& a, const NodeSet& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

/// Vertices with neighbors in at least two distinct communities.
inline NodeSet overlapping_nodes(const Graph& g, const Partition& p) {
  p.validate(g.num_vertices());
  NodeSet out;
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    const auto nb = g.neighbors(u);
    const bool spans = std::any_of(nb.begin(), nb.end(), [&](Vertex v) {
      return p.assignment[v] != p.assignment[nb.front()];
    });
    if (spans) out.push_back(u);
  }
  return out;
}

inline std::size_t size_com(const Partition& p, Vertex u) {
  if (u >= p.assignment.size()) throw std::domain_error("vertex not assigned in partition");
  return p.communities[p.assignment[u]].size();
}

/// One "label community_index" line per vertex, in internal id order.
inline void write_partition(const Graph& g, const Partition& p, std::ostream& out) {
  for (Vertex u = 0; u < g.num_vertices(); ++u) out << g.label(u) << ' ' << p.assignment[u] << '\n';
}

}  // namespace hcim
