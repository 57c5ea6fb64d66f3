#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "epq/classifier.hpp"
#include "support.hpp"

using namespace epq;
using namespace epq::testing;

namespace {

Graph make_graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
  for (auto& [u, v] : edges)
    if (u > v) std::swap(u, v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = edges;
  return g;
}

Graph clique(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e);
}

// Width of the best elimination ordering, trying every permutation.
int reference_treewidth(const Graph& g) {
  const std::size_t n = g.vertices.size();
  if (n == 0) return 0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  int best = static_cast<int>(n);
  do {
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (auto [u, v] : g.edges) adj[u][v] = adj[v][u] = true;
    std::vector<bool> gone(n, false);
    int width = 0;
    for (std::size_t v : order) {
      std::vector<std::size_t> nb;
      for (std::size_t u = 0; u < n; ++u)
        if (!gone[u] && u != v && adj[v][u]) nb.push_back(u);
      width = std::max(width, static_cast<int>(nb.size()));
      for (std::size_t a : nb)
        for (std::size_t b : nb)
          if (a != b) adj[a][b] = true;
      gone[v] = true;
    }
    best = std::min(best, width);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

TEST_CASE("treewidth of small families") {
  CHECK(treewidth(Graph{}).upper == 0);
  CHECK(treewidth(make_graph(3, {})).upper == 0);
  CHECK(treewidth(make_graph(4, {{0, 1}, {1, 2}, {2, 3}})).upper == 1);
  auto c4 = treewidth(make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  CHECK(c4.exact);
  CHECK(c4.lower == 2);
  CHECK(c4.upper == 2);
  for (std::size_t n = 1; n <= 7; ++n) CHECK(treewidth(clique(n)).upper == static_cast<int>(n) - 1);
  std::vector<std::pair<std::size_t, std::size_t>> grid;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      if (c + 1 < 3) grid.emplace_back(r * 3 + c, r * 3 + c + 1);
      if (r + 1 < 3) grid.emplace_back(r * 3 + c, (r + 1) * 3 + c);
    }
  CHECK(treewidth(make_graph(9, grid)).upper == 3);
}

TEST_CASE("treewidth agrees with exhaustive elimination orderings") {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 80; ++i) {
    std::size_t n = 1 + rng() % 7;
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (rng() % 100 < 45) e.emplace_back(u, v);
    Graph g = make_graph(n, e);
    auto tw = treewidth(g);
    REQUIRE(tw.exact);
    CHECK(tw.lower == tw.upper);
    CHECK(tw.upper == reference_treewidth(g));
  }
}

TEST_CASE("star query has a tree core and a triangle contract") {
  PpFormula star = pp("E/2", "x,y,z", "exists a. E(x,a) & E(y,a) & E(z,a)");
  CHECK(treewidth(graph_of(core_of_formula(star))).upper == 1);
  auto parts = exists_components(star);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].vertices.size() == 4);
  Graph contract = contract_graph(star);
  CHECK(contract.vertices.size() == 3);
  CHECK(contract.edges.size() == 3);
  CHECK(treewidth(contract).upper == 2);
}

TEST_CASE("core removes redundant quantified parts before analysis") {
  PpFormula p = pp("E/2", "x,y", "exists a,b. E(x,y) & E(x,a) & E(a,b) & E(b,y)");
  // a and b form a path that cannot fold onto the single edge, so both stay.
  CHECK(core_of_formula(p).size() == 4);
  PpFormula q = pp("E/2", "x,y", "exists a,b. E(x,y) & E(x,a) & E(b,y)");
  CHECK(core_of_formula(q).size() == 2);
  CHECK(exists_components(q).empty());
}

TEST_CASE("rotated paths classify as the easy case") {
  EpFormula phi = parse_formula(read_data("rotated_paths.query"));
  StructuralReport report = classify_set({phi}, 1);
  CHECK(report.trichotomy_case == 1);
  CHECK(report.max_tw_core == 1);
  PpFormula phi1 = pp("E/2", "w,x,y,z", "E(x,y) & E(y,z)");
  PpFormula phi2 = pp("E/2", "w,x,y,z", "E(z,w) & E(w,x)");
  PpFormula cycle = conjoin_pp(std::vector<PpFormula>{phi1, phi2});
  auto tw = treewidth(graph_of(core_of_formula(cycle)));
  CHECK(tw.exact);
  CHECK(tw.upper == 2);
  CHECK(classify_set({to_ep_formula(cycle)}, 1).trichotomy_case == 3);
  std::string table = format_report(report);
  CHECK(table.find("case 1") != std::string::npos);
}

TEST_CASE("the contract graph decides between the hard cases") {
  EpFormula star = ep("E/2", "x,y,z", "exists a. E(x,a) & E(y,a) & E(z,a)");
  auto report = classify_set({star}, 1);
  CHECK(report.max_tw_core == 1);
  CHECK(report.max_tw_contract == 2);
  CHECK(report.trichotomy_case == 3);
  EpFormula triangle = ep("E/2", "x,y,z", "E(x,y) & E(y,z) & E(z,x)");
  auto tri = classify_set({triangle}, 1);
  CHECK(tri.max_tw_core == 2);
  CHECK(tri.trichotomy_case == 3);
  EpFormula hidden = ep("E/2", "x", "exists a,b,c. E(x,a) & E(a,b) & E(b,c) & E(c,a)");
  auto h = classify_set({hidden}, 1);
  CHECK(h.max_tw_core == 2);
  CHECK(h.max_tw_contract == 0);
  CHECK(h.trichotomy_case == 2);
}
