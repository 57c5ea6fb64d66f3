#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "epq/formula.hpp"
#include "epq/pp_formula.hpp"

namespace epq {

/// Simple undirected graph on named vertices; edges are index pairs (u < v),
/// sorted and distinct.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  bool has_edge(std::size_t u, std::size_t v) const;
  std::size_t index_of(const std::string& name) const;
};

/// Co-occurrence graph of a structure's elements.
Graph graph_of(const Structure& s);
Graph graph_of(const PpFormula& pp);

/// core(aug(A,S)); the liberal elements always survive.
Structure core_of_formula(const PpFormula& pp);

/// G[V'] for each component V of G[D \ S] on the core's graph, where V'
/// adds the liberal vertices adjacent to V.
std::vector<Graph> exists_components(const PpFormula& pp);

/// Graph on S: G[S] plus a clique over the liberal vertices of each
/// exists-component.
Graph contract_graph(const PpFormula& pp);

struct TreewidthResult {
  int lower = 0;
  int upper = 0;
  bool exact = false;
};

/// Branch and bound over elimination orderings; exact up to `exact_limit`
/// vertices, bounds only above. The empty graph has width 0.
TreewidthResult treewidth(const Graph& g, std::size_t exact_limit = 20);

struct FormulaRow {
  std::string id;
  std::string formula;
  TreewidthResult tw_core;
  TreewidthResult tw_contract;
  std::size_t exists_components = 0;
};

/// Finite stand-in for the trichotomy: case 1 if every core and contract
/// graph has width <= w, case 2 if only the contract graphs do, else 3.
struct StructuralReport {
  std::vector<FormulaRow> rows;
  int width = 0;
  int max_tw_core = 0;
  int max_tw_contract = 0;
  int trichotomy_case = 1;
};

/// Analyses every member of phi+ for each formula.
StructuralReport classify_set(const std::vector<EpFormula>& phis, int width);

std::string format_report(const StructuralReport& report);

}  // namespace epq
