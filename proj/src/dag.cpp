#include "bcg/dag.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bcg {

std::vector<std::vector<int>> DagGraph::out_arcs() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(nodes));
  for (std::size_t i = 0; i < arcs.size(); ++i)
    out[static_cast<std::size_t>(arcs[i].from)].push_back(static_cast<int>(i));
  return out;
}

std::vector<int> DagGraph::topological_order() const {
  std::vector<int> indeg(static_cast<std::size_t>(nodes), 0);
  for (const Arc& a : arcs) ++indeg[static_cast<std::size_t>(a.to)];
  const auto out = out_arcs();
  std::vector<int> queue;
  for (int v = 0; v < nodes; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) queue.push_back(v);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(nodes));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    order.push_back(v);
    for (int ai : out[static_cast<std::size_t>(v)]) {
      const int w = arcs[static_cast<std::size_t>(ai)].to;
      if (--indeg[static_cast<std::size_t>(w)] == 0) queue.push_back(w);
    }
  }
  if (static_cast<int>(order.size()) != nodes)
    throw std::runtime_error("DagGraph: graph has a cycle");
  return order;
}

void DagGraph::validate() const {
  if (nodes <= 0) throw std::invalid_argument("DagGraph: no nodes");
  if (source < 0 || source >= nodes || sink < 0 || sink >= nodes || source == sink)
    throw std::invalid_argument("DagGraph: bad source/sink");
  for (const Arc& a : arcs)
    if (a.from < 0 || a.from >= nodes || a.to < 0 || a.to >= nodes || a.from == a.to)
      throw std::invalid_argument("DagGraph: arc endpoint out of range");
  const auto order = topological_order();  // throws on cycles
  (void)order;
  // Sink reachability from the source.
  std::vector<char> reach(static_cast<std::size_t>(nodes), 0);
  reach[static_cast<std::size_t>(source)] = 1;
  const auto out = out_arcs();
  std::vector<int> stack{source};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int ai : out[static_cast<std::size_t>(v)]) {
      const int w = arcs[static_cast<std::size_t>(ai)].to;
      if (!reach[static_cast<std::size_t>(w)]) {
        reach[static_cast<std::size_t>(w)] = 1;
        stack.push_back(w);
      }
    }
  }
  if (!reach[static_cast<std::size_t>(sink)])
    throw std::invalid_argument("DagGraph: sink unreachable from source");
}

DagGraph read_dag(std::istream& in) {
  DagGraph g;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_dag: empty input");
  std::istringstream hs(line);
  std::string knodes, karcs, ksource, ksink;
  int narcs = 0;
  hs >> knodes >> g.nodes >> karcs >> narcs >> ksource >> g.source >> ksink >> g.sink;
  if (!hs || knodes != "nodes" || karcs != "arcs" || ksource != "source" || ksink != "sink")
    throw std::runtime_error("read_dag: malformed header");
  g.arcs.reserve(static_cast<std::size_t>(narcs));
  for (int i = 0; i < narcs; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("read_dag: truncated arc list");
    std::istringstream ls(line);
    Arc a;
    ls >> a.from >> a.to;
    if (!ls) throw std::runtime_error("read_dag: malformed arc line");
    g.arcs.push_back(a);
  }
  g.validate();
  return g;
}

DagGraph load_dag(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dag: cannot open " + path);
  return read_dag(in);
}

void write_dag(const DagGraph& g, std::ostream& out) {
  out << "nodes " << g.nodes << " arcs " << g.arcs.size() << " source " << g.source
      << " sink " << g.sink << "\n";
  for (const Arc& a : g.arcs) out << a.from << " " << a.to << "\n";
}

void save_dag(const DagGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dag: cannot open " + path);
  write_dag(g, out);
}

DagGraph generate_layered_dag(int layers, int width, int skips, Rng& rng) {
  if (layers < 1 || width < 1) throw std::invalid_argument("generate_layered_dag: bad shape");
  DagGraph g;
  g.nodes = 2 + layers * width;
  g.source = 0;
  g.sink = g.nodes - 1;
  auto node_at = [&](int layer, int slot) { return 1 + layer * width + slot; };
  for (int s = 0; s < width; ++s) g.arcs.push_back({g.source, node_at(0, s)});
  for (int l = 0; l + 1 < layers; ++l)
    for (int a = 0; a < width; ++a)
      for (int b = 0; b < width; ++b) g.arcs.push_back({node_at(l, a), node_at(l + 1, b)});
  for (int s = 0; s < width; ++s) g.arcs.push_back({node_at(layers - 1, s), g.sink});
  // Rank-skipping extras; duplicates are avoided so arc identity stays clean.
  std::vector<Arc> extras;
  for (int k = 0; k < skips && layers >= 3; ++k) {
    const int l = static_cast<int>(rng.uniform_int(layers - 2));
    const int a = static_cast<int>(rng.uniform_int(width));
    const int b = static_cast<int>(rng.uniform_int(width));
    const Arc cand{node_at(l, a), node_at(l + 2, b)};
    const bool dup =
        std::any_of(extras.begin(), extras.end(), [&](const Arc& e) {
          return e.from == cand.from && e.to == cand.to;
        });
    if (!dup) extras.push_back(cand);
  }
  g.arcs.insert(g.arcs.end(), extras.begin(), extras.end());
  g.validate();
  return g;
}

}  // namespace bcg
