#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hcim/graph.hpp"

namespace hcim::testing {

inline Graph graph_from(std::string_view text) { return parse_edge_list(text); }

inline Graph single_edge() { return graph_from("a b"); }
inline Graph path3() { return graph_from("a b\nb c"); }
inline Graph triangle() { return graph_from("a b\nb c\na c"); }
/// Center c first so it gets id 0.
inline Graph star4() { return graph_from("c x\nc y\nc z"); }
/// Triangles {l0,l1,x} and {y,r1,r2} joined by the bridge x-y.
inline Graph two_triangles_bridge() { return graph_from("l0 l1\nl0 x\nl1 x\nx y\ny r1\ny r2\nr1 r2"); }

/// 14 vertices; v is a low-conflict hub, c sits among overlapping triangles.
inline Graph score_sample() {
  return graph_from(
      "a c\na v\nb v\ne v\ne m\ni v\nh m\nh l\nh q\ni j\nb d\nc d\nf c\nf d\nf g\ng d\nj q\nl q");
}

inline Graph from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Graph(std::move(labels), edges);
}

/// G(n, q) sample; vertex labels are "0".."n-1".
inline Graph random_graph(std::size_t n, double q, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(q);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(gen)) edges.emplace_back(u, v);
    }
  }
  return from_edges(n, edges);
}

/// Random connected graph: a random spanning tree plus `extra` random edges.
inline Graph random_connected_graph(std::size_t n, std::size_t extra, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < n; ++v) {
    std::uniform_int_distribution<Vertex> pick(0, v - 1);
    edges.emplace_back(pick(gen), v);
  }
  std::uniform_int_distribution<Vertex> any(0, static_cast<Vertex>(n - 1));
  for (std::size_t i = 0; i < extra; ++i) {
    Vertex a = any(gen), b = any(gen);
    if (a != b) edges.emplace_back(a, b);
  }
  return from_edges(n, edges);
}

inline Graph cycle(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < n; ++u) edges.emplace_back(u, static_cast<Vertex>((u + 1) % n));
  return from_edges(n, edges);
}

inline Graph complete(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return from_edges(n, edges);
}

/// Same graph with ids permuted by `perm` (new id of old vertex u is perm[u]).
inline Graph relabel(const Graph& g, const std::vector<Vertex>& perm) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(perm[u], perm[v]);
  return from_edges(g.num_vertices(), edges);
}

inline std::vector<Vertex> ids(const Graph& g, std::initializer_list<std::string_view> labels) {
  std::vector<Vertex> out;
  for (auto l : labels) out.push_back(g.id(l));
  return make_node_set(out);
}

}  // namespace hcim::testing
