#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bcg/rng.hpp"

namespace bcg {

struct Arc {
  int from = 0;
  int to = 0;
};

// Directed acyclic graph with a designated source and sink. Arc order is
// the file/generator order and defines the ambient coordinate layout of
// the path polytope.
struct DagGraph {
  int nodes = 0;
  int source = 0;
  int sink = 0;
  std::vector<Arc> arcs;

  std::vector<int> topological_order() const;  // throws if cyclic
  // Arcs grouped by tail node, indices into `arcs`.
  std::vector<std::vector<int>> out_arcs() const;
  void validate() const;  // shape checks + acyclicity + sink reachability
};

// Plain-text format:
//   nodes <m> arcs <a> source <s> sink <t>
//   u v            (one arc per line, in arc-index order)
DagGraph read_dag(std::istream& in);
DagGraph load_dag(const std::string& path);
void write_dag(const DagGraph& g, std::ostream& out);
void save_dag(const DagGraph& g, const std::string& path);

// Layered synthetic DAG: source, `layers` ranks of `width` nodes with all
// consecutive-rank arcs, then sink; plus `skips` random rank-skipping arcs.
// Node and arc numbering depend only on the parameters and the rng stream.
DagGraph generate_layered_dag(int layers, int width, int skips, Rng& rng);

}  // namespace bcg
