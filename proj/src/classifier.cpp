#include "epq/classifier.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "epq/errors.hpp"
#include "epq/expansion.hpp"
#include "epq/homomorphism.hpp"

namespace epq {

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

std::size_t Graph::index_of(const std::string& name) const {
  auto it = std::find(vertices.begin(), vertices.end(), name);
  if (it == vertices.end()) throw PreconditionViolation("no vertex named " + name);
  return static_cast<std::size_t>(it - vertices.begin());
}

namespace {

Graph make_graph(std::vector<std::string> vertices, std::set<std::pair<std::size_t, std::size_t>> edges) {
  return Graph{std::move(vertices), {edges.begin(), edges.end()}};
}

Graph induced(const Graph& g, const std::vector<std::size_t>& keep) {
  std::vector<std::string> names;
  std::vector<std::size_t> position(g.vertices.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    position[keep[i]] = i;
    names.push_back(g.vertices[keep[i]]);
  }
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (auto [u, v] : g.edges) {
    if (position[u] != static_cast<std::size_t>(-1) && position[v] != static_cast<std::size_t>(-1)) {
      edges.emplace(std::min(position[u], position[v]), std::max(position[u], position[v]));
    }
  }
  return make_graph(std::move(names), std::move(edges));
}

struct CoreView {
  Graph graph;
  std::vector<char> liberal;
};

CoreView core_view(const PpFormula& pp) {
  Structure core = core_of_formula(pp);
  CoreView view{graph_of(core), std::vector<char>(core.size(), 0)};
  for (const auto& v : pp.lib()) view.liberal[core.index_of(v)] = 1;
  return view;
}

// Components of the quantified part of the core, each with its liberal
// neighbours, as sorted vertex index lists.
std::vector<std::vector<std::size_t>> exists_vertex_sets(const CoreView& view) {
  const Graph& g = view.graph;
  const std::size_t n = g.vertices.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start < n; ++start) {
    if (view.liberal[start] || seen[start]) continue;
    std::set<std::size_t> members;
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      members.insert(u);
      for (std::size_t w : adj[u]) {
        if (view.liberal[w]) {
          members.insert(w);
        } else if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    out.emplace_back(members.begin(), members.end());
  }
  return out;
}

}  // namespace

Graph graph_of(const Structure& s) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [rel, tuples] : s.relations()) {
    for (const auto& t : tuples) {
      for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
          if (t[i] != t[j]) edges.emplace(std::min(t[i], t[j]), std::max(t[i], t[j]));
        }
      }
    }
  }
  return make_graph(s.elements(), std::move(edges));
}

Graph graph_of(const PpFormula& pp) { return graph_of(pp.structure()); }

Structure core_of_formula(const PpFormula& pp) { return core(augment(pp)); }

std::vector<Graph> exists_components(const PpFormula& pp) {
  CoreView view = core_view(pp);
  std::vector<Graph> out;
  for (const auto& set : exists_vertex_sets(view)) out.push_back(induced(view.graph, set));
  return out;
}

Graph contract_graph(const PpFormula& pp) {
  CoreView view = core_view(pp);
  const Graph& g = view.graph;
  std::vector<std::size_t> lib_index;
  std::vector<std::size_t> position(g.vertices.size(), 0);
  std::vector<std::string> names;
  for (const auto& v : pp.lib()) {
    std::size_t i = g.index_of(v);
    position[i] = lib_index.size();
    lib_index.push_back(i);
    names.push_back(v);
  }
  std::set<std::pair<std::size_t, std::size_t>> edges;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a != b) edges.emplace(std::min(position[a], position[b]), std::max(position[a], position[b]));
  };
  for (auto [u, v] : g.edges) {
    if (view.liberal[u] && view.liberal[v]) add(u, v);
  }
  for (const auto& set : exists_vertex_sets(view)) {
    for (std::size_t a : set) {
      for (std::size_t b : set) {
        if (a < b && view.liberal[a] && view.liberal[b]) add(a, b);
      }
    }
  }
  return make_graph(std::move(names), std::move(edges));
}

// --- treewidth ---------------------------------------------------------------------

namespace {

using Mask = std::uint64_t;

int popcount(Mask m) { return std::popcount(m); }

// Largest minimum degree seen while repeatedly deleting a minimum-degree
// vertex (a lower bound on treewidth).
int degeneracy_bound(const std::vector<Mask>& adj, Mask alive) {
  int best = 0;
  std::vector<Mask> a = adj;
  while (alive != 0) {
    int min_deg = 1 << 30;
    int pick = -1;
    for (Mask m = alive; m != 0; m &= m - 1) {
      int v = std::countr_zero(m);
      int d = popcount(a[v] & alive);
      if (d < min_deg) {
        min_deg = d;
        pick = v;
      }
    }
    best = std::max(best, min_deg);
    alive &= ~(Mask{1} << pick);
  }
  return best;
}

void eliminate(std::vector<Mask>& adj, int v, Mask alive) {
  Mask nb = adj[v] & alive;
  for (Mask m = nb; m != 0; m &= m - 1) {
    int u = std::countr_zero(m);
    adj[u] |= nb & ~(Mask{1} << u);
  }
}

// Width of the min-fill elimination ordering (an upper bound).
int min_fill_bound(std::vector<Mask> adj, Mask alive) {
  int width = 0;
  while (alive != 0) {
    int pick = -1;
    long best_fill = -1;
    for (Mask m = alive; m != 0; m &= m - 1) {
      int v = std::countr_zero(m);
      Mask nb = adj[v] & alive;
      long fill = 0;
      for (Mask x = nb; x != 0; x &= x - 1) {
        int u = std::countr_zero(x);
        fill += popcount(nb & ~adj[u] & ~(Mask{1} << u));
      }
      if (pick < 0 || fill < best_fill) {
        best_fill = fill;
        pick = v;
      }
    }
    width = std::max(width, popcount(adj[pick] & alive));
    eliminate(adj, pick, alive);
    alive &= ~(Mask{1} << pick);
  }
  return width;
}

class Exact {
 public:
  Exact(std::vector<Mask> adj, int upper) : adj_(std::move(adj)), best_(upper) {}

  int run(Mask alive) {
    search(adj_, alive, 0);
    return best_;
  }

 private:
  void search(const std::vector<Mask>& adj, Mask alive, int width) {
    if (width >= best_) return;
    int left = popcount(alive);
    if (left <= width + 1) {
      best_ = width;
      return;
    }
    if (std::max(width, degeneracy_bound(adj, alive)) >= best_) return;
    auto [it, fresh] = seen_.try_emplace(alive, width);
    if (!fresh) {
      if (it->second <= width) return;
      it->second = width;
    }
    // A simplicial vertex can always be eliminated first.
    for (Mask m = alive; m != 0; m &= m - 1) {
      int v = std::countr_zero(m);
      Mask nb = adj[v] & alive;
      bool clique = true;
      for (Mask x = nb; x != 0 && clique; x &= x - 1) {
        int u = std::countr_zero(x);
        clique = (nb & ~adj[u] & ~(Mask{1} << u)) == 0;
      }
      if (clique) {
        search(adj, alive & ~(Mask{1} << v), std::max(width, popcount(nb)));
        return;
      }
    }
    for (Mask m = alive; m != 0; m &= m - 1) {
      int v = std::countr_zero(m);
      std::vector<Mask> next = adj;
      eliminate(next, v, alive);
      search(next, alive & ~(Mask{1} << v), std::max(width, popcount(adj[v] & alive)));
    }
  }

  std::vector<Mask> adj_;
  int best_;
  std::unordered_map<Mask, int> seen_;
};

}  // namespace

TreewidthResult treewidth(const Graph& g, std::size_t exact_limit) {
  const std::size_t n = g.vertices.size();
  TreewidthResult r;
  if (n == 0) return {0, 0, true};
  if (n > 64) {
    r.lower = g.edges.empty() ? 0 : 1;
    r.upper = static_cast<int>(n) - 1;
    return r;
  }
  std::vector<Mask> adj(n, 0);
  for (auto [u, v] : g.edges) {
    adj[u] |= Mask{1} << v;
    adj[v] |= Mask{1} << u;
  }
  Mask all = n == 64 ? ~Mask{0} : (Mask{1} << n) - 1;
  r.lower = degeneracy_bound(adj, all);
  r.upper = min_fill_bound(adj, all);
  if (r.lower == r.upper) {
    r.exact = true;
    return r;
  }
  if (n <= exact_limit) {
    int w = Exact(adj, r.upper).run(all);
    r.lower = r.upper = w;
    r.exact = true;
  }
  return r;
}

StructuralReport classify_set(const std::vector<EpFormula>& phis, int width) {
  if (width < 0) throw PreconditionViolation("width threshold must be nonnegative");
  StructuralReport report;
  report.width = width;
  for (const auto& phi : phis) {
    PlusSet plus = plus_set(normalize_ep(phi));
    auto members = plus.members();
    for (std::size_t i = 0; i < members.size(); ++i) {
      FormulaRow row;
      row.id = phi.name() + "/" + std::to_string(i + 1);
      row.formula = canonical_text(members[i]);
      row.tw_core = treewidth(graph_of(core_of_formula(members[i])));
      row.tw_contract = treewidth(contract_graph(members[i]));
      row.exists_components = exists_components(members[i]).size();
      report.max_tw_core = std::max(report.max_tw_core, row.tw_core.upper);
      report.max_tw_contract = std::max(report.max_tw_contract, row.tw_contract.upper);
      report.rows.push_back(std::move(row));
    }
  }
  if (report.max_tw_contract > width) {
    report.trichotomy_case = 3;
  } else if (report.max_tw_core > width) {
    report.trichotomy_case = 2;
  } else {
    report.trichotomy_case = 1;
  }
  return report;
}

namespace {

std::string width_text(const TreewidthResult& t) {
  if (t.exact) return std::to_string(t.upper);
  return std::to_string(t.lower) + ".." + std::to_string(t.upper);
}

}  // namespace

std::string format_report(const StructuralReport& report) {
  std::ostringstream out;
  out << "id\ttw_core\ttw_contract\texists_components\tformula\n";
  for (const auto& row : report.rows) {
    out << row.id << '\t' << width_text(row.tw_core) << '\t' << width_text(row.tw_contract) << '\t'
        << row.exists_components << '\t' << row.formula << '\n';
  }
  out << "max tw_core " << report.max_tw_core << ", max tw_contract " << report.max_tw_contract << ", width "
      << report.width << ": case " << report.trichotomy_case;
  switch (report.trichotomy_case) {
    case 1:
      out << " (cores and contract graphs within the threshold)\n";
      break;
    case 2:
      out << " (contract graphs within the threshold, cores not)\n";
      break;
    default:
      out << " (contract graphs exceed the threshold)\n";
      break;
  }
  return out.str();
}

}  // namespace epq
