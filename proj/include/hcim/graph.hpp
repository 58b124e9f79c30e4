#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hcim {

using Vertex = std::uint32_t;

/// Sorted, duplicate-free set of internal vertex ids.
using NodeSet = std::vector<Vertex>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline NodeSet make_node_set(std::vector<Vertex> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

/// Immutable undirected simple graph in CSR form.
///
/// Internal ids are dense in [0, n) and assigned in first-seen order when
/// loading; every id carries an external string label. Neighbor ranges are
/// sorted so intersections are linear merges.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  /// Builds from an undirected edge list over ids [0, labels.size()).
  /// Self-loops and duplicate edges are dropped.
  Graph(std::vector<std::string> labels, std::vector<std::pair<Vertex, Vertex>> edges)
      : labels_(std::move(labels)) {
    const std::size_t n = labels_.size();
    for (auto& [u, v] : edges) {
      if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
      if (u > v) std::swap(u, v);
    }
    const std::size_t before = edges.size();
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
    self_loops_dropped_ = before - edges.size();
    std::sort(edges.begin(), edges.end());
    const std::size_t with_dups = edges.size();
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    duplicates_dropped_ = with_dups - edges.size();

    offsets_.assign(n + 1, 0);
    for (const auto& [u, v] : edges) {
      ++offsets_[u + 1];
      ++offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    adjacency_.resize(offsets_[n]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
      adjacency_[cursor[u]++] = v;
      adjacency_[cursor[v]++] = u;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
    }
    index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!index_.emplace(labels_[i], static_cast<Vertex>(i)).second) {
        throw std::invalid_argument("duplicate vertex label '" + labels_[i] + "'");
      }
    }
  }

  std::size_t num_vertices() const { return labels_.size(); }
  std::size_t num_edges() const { return adjacency_.size() / 2; }
  bool empty() const { return labels_.empty(); }

  std::span<const Vertex> neighbors(Vertex u) const {
    check(u);
    return {adjacency_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::size_t degree(Vertex u) const {
    check(u);
    return offsets_[u + 1] - offsets_[u];
  }

  /// Position of u's adjacency range inside the flat arc array. Arc ids
  /// `arc_begin(u) + i` are unique per directed arc.
  std::size_t arc_begin(Vertex u) const { return offsets_[u]; }
  std::size_t num_arcs() const { return adjacency_.size(); }

  bool has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    check(v);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  const std::string& label(Vertex u) const {
    check(u);
    return labels_[u];
  }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<Vertex> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  Vertex id(std::string_view label) const {
    auto v = find(label);
    if (!v) throw std::out_of_range("unknown vertex label '" + std::string(label) + "'");
    return *v;
  }

  /// Edges as (u, v) with u < v, sorted by that pair.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(num_edges());
    for (Vertex u = 0; u < num_vertices(); ++u) {
      for (Vertex v : neighbors(u)) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  std::size_t self_loops_dropped() const { return self_loops_dropped_; }
  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

  void check(Vertex u) const {
    if (u >= labels_.size()) {
      throw std::out_of_range("vertex " + std::to_string(u) + " out of range [0, " +
                              std::to_string(labels_.size()) + ")");
    }
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adjacency_;
  std::size_t self_loops_dropped_ = 0;
  std::size_t duplicates_dropped_ = 0;
};

/// Reads a whitespace- or comma-separated edge list. Lines starting with
/// '#' or '%' and blank lines are ignored.
inline Graph load_edge_list(std::istream& in) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, Vertex> ids;
  std::vector<std::pair<Vertex, Vertex>> edges;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, static_cast<Vertex>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == '%') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream tokens(line);
    std::vector<std::string> parts;
    for (std::string tok; tokens >> tok;) parts.push_back(std::move(tok));
    if (parts.size() != 2) {
      throw ParseError(line_no, "expected two vertex labels, found " + std::to_string(parts.size()));
    }
    const Vertex u = intern(parts[0]);
    const Vertex v = intern(parts[1]);
    edges.emplace_back(u, v);
  }
  if (edges.empty()) throw ParseError(0, "no edges");
  return Graph(std::move(labels), std::move(edges));
}

inline Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_edge_list(in);
}

/// One "label1 label2" line per edge, sorted by internal id pair.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& [u, v] : g.edges()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

inline NodeSet neighbors(const Graph& g, Vertex u) {
  auto nb = g.neighbors(u);
  return NodeSet(nb.begin(), nb.end());
}

struct DegreeStats {
  std::size_t max_degree = 0;
  double average_degree = 0.0;
};

/// Degrees are taken in the full graph.
inline DegreeStats degree_stats(const Graph& g, std::span<const Vertex> subset) {
  if (subset.empty()) throw std::domain_error("degree_stats: empty vertex set");
  DegreeStats s;
  std::size_t total = 0;
  for (Vertex u : subset) {
    const std::size_t d = g.degree(u);
    s.max_degree = std::max(s.max_degree, d);
    total += d;
  }
  s.average_degree = static_cast<double>(total) / static_cast<double>(subset.size());
  return s;
}

/// Subgraph induced by `subset`, renumbered in ascending original-id order.
/// Labels are preserved.
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> subset) {
  const NodeSet members = make_node_set({subset.begin(), subset.end()});
  std::unordered_map<Vertex, Vertex> local;
  local.reserve(members.size());
  std::vector<std::string> labels;
  labels.reserve(members.size());
  for (Vertex u : members) {
    local.emplace(u, static_cast<Vertex>(labels.size()));
    labels.push_back(g.label(u));
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u : members) {
    for (Vertex v : g.neighbors(u)) {
      if (u < v) {
        if (auto it = local.find(v); it != local.end()) edges.emplace_back(local[u], it->second);
      }
    }
  }
  return Graph(std::move(labels), std::move(edges));
}

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// BFS hop counts from `source`; kUnreachable where no path exists.
/// Stops expanding past `max_depth`.
inline std::vector<std::size_t> bfs_distances(const Graph& g, Vertex source,
                                              std::size_t max_depth = kUnreachable) {
  g.check(source);
  std::vector<std::size_t> dist(g.num_vertices(), kUnreachable);
  std::queue<Vertex> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Vertex u = frontier.front();
    frontier.pop();
    if (dist[u] == max_depth) continue;
    for (Vertex v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

/// Shortest-path hop count, or nullopt when v is unreachable from u.
inline std::optional<std::size_t> distance(const Graph& g, Vertex u, Vertex v) {
  g.check(v);
  const std::size_t d = bfs_distances(g, u)[v];
  if (d == kUnreachable) return std::nullopt;
  return d;
}

/// All vertices within `radius` hops of u, u included.
inline NodeSet coverage(const Graph& g, Vertex u, long long radius) {
  if (radius < 0) throw std::domain_error("coverage: negative radius");
  const auto dist = bfs_distances(g, u, static_cast<std::size_t>(radius));
  NodeSet out;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (dist[v] != kUnreachable) out.push_back(v);
  }
  return out;
}

}  // namespace hcim
