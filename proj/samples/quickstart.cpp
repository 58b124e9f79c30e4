// Loads an edge list, clusters it with alpha-2S and picks seeds three ways.
//
//   quickstart data/karate.txt 4 0.1

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "hcim/hcim.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: quickstart <edge-list> [k] [p]\n";
    return 1;
  }
  std::ifstream in(argv[1]);
  const hcim::Graph g = hcim::load_edge_list(in);
  const std::size_t k = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 4;
  const double p = argc > 3 ? std::strtod(argv[3], nullptr) : 0.1;
  const hcim::DiffusionParams params{p, 100, 42};

  const auto clustering = hcim::hierarchical_clustering_detailed(g, {hcim::SimilarityKind::AlphaTwoS, 1.0});
  std::cout << g.num_vertices() << " vertices, " << g.num_edges() << " edges, " << clustering.partition.size()
            << " communities (Q = " << clustering.modularity << ")\n";

  const auto community = hcim::select_community_based(g, clustering.partition, k, params, 2);
  const auto lazy = hcim::celf(g, k, params);

  for (const auto* s : {&community.seeds, &lazy}) {
    const auto est = hcim::estimate_spread(g, s->members, {p, 1000, 7});
    std::cout << (s == &lazy ? "celf      " : "alpha-hcim") << "  sigma = " << est.mean << "  seeds:";
    for (auto v : s->members) std::cout << ' ' << g.label(v);
    std::cout << '\n';
  }
}
