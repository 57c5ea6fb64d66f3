#include "epq/counting.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "epq/equivalence.hpp"
#include "epq/errors.hpp"
#include "epq/expansion.hpp"
#include "epq/homomorphism.hpp"

namespace epq {

BigInt assignment_count(std::size_t lib_size, const Structure& b) { return pow_big(BigInt(b.size()), lib_size); }

// --- brute force -------------------------------------------------------------------

namespace {

enum class Tri : unsigned char { False, True, Unknown };
constexpr Element kUnset = static_cast<Element>(-1);

struct Compiled {
  enum Kind { True, Atom, And, Or, Exists } kind = True;
  const std::vector<Tuple>* tuples = nullptr;
  std::vector<std::size_t> slots;
  std::size_t var = 0;
  std::vector<Compiled> children;
  // Slots the node reads but does not bind; an Exists result depends only
  // on their values, so it is memoized on them.
  std::vector<std::size_t> free;
  std::size_t memo = 0;
};

class Evaluator {
 public:
  Evaluator(const EpFormula& phi, const Structure& b) : b_(b) {
    for (const auto& v : phi.lib()) slot_of(v);
    root_ = compile(phi.body());
    values_.assign(next_slot_, kUnset);
  }

  BigInt count(std::size_t lib_size) {
    lib_size_ = lib_size;
    total_ = 0;
    walk(0);
    return total_;
  }

 private:
  std::size_t slot_of(const std::string& name) {
    auto [it, inserted] = slots_.try_emplace(name, next_slot_);
    if (inserted) ++next_slot_;
    return it->second;
  }

  Compiled compile(const NodePtr& node) {
    Compiled c;
    if (const auto* a = std::get_if<Atom>(&node->value)) {
      c.kind = Compiled::Atom;
      c.tuples = &b_.tuples(a->relation);
      for (const auto& v : a->args) c.slots.push_back(slot_of(v));
      c.free = c.slots;
    } else if (const auto* k = std::get_if<Conj>(&node->value)) {
      c.kind = Compiled::And;
      c.children.push_back(compile(k->lhs));
      c.children.push_back(compile(k->rhs));
    } else if (const auto* d = std::get_if<Disj>(&node->value)) {
      c.kind = Compiled::Or;
      c.children.push_back(compile(d->lhs));
      c.children.push_back(compile(d->rhs));
    } else if (const auto* e = std::get_if<Exists>(&node->value)) {
      c.kind = Compiled::Exists;
      // Bound names are unique after renaming apart, so each binder owns its slot.
      c.var = next_slot_++;
      auto saved = slots_.find(e->var);
      std::optional<std::size_t> previous;
      if (saved != slots_.end()) previous = saved->second;
      slots_[e->var] = c.var;
      c.children.push_back(compile(e->body));
      if (previous) {
        slots_[e->var] = *previous;
      } else {
        slots_.erase(e->var);
      }
      c.memo = memos_.size();
      memos_.emplace_back();
    }
    for (const auto& child : c.children) c.free.insert(c.free.end(), child.free.begin(), child.free.end());
    std::sort(c.free.begin(), c.free.end());
    c.free.erase(std::unique(c.free.begin(), c.free.end()), c.free.end());
    if (c.kind == Compiled::Exists) c.free.erase(std::remove(c.free.begin(), c.free.end(), c.var), c.free.end());
    return c;
  }

  Tri eval(const Compiled& c) {
    switch (c.kind) {
      case Compiled::True:
        return Tri::True;
      case Compiled::Atom: {
        Tuple t(c.slots.size());
        for (std::size_t i = 0; i < c.slots.size(); ++i) {
          t[i] = values_[c.slots[i]];
          if (t[i] == kUnset) return Tri::Unknown;
        }
        return std::binary_search(c.tuples->begin(), c.tuples->end(), t) ? Tri::True : Tri::False;
      }
      case Compiled::And: {
        Tri l = eval(c.children[0]);
        if (l == Tri::False) return l;
        Tri r = eval(c.children[1]);
        if (r == Tri::False) return r;
        return (l == Tri::True && r == Tri::True) ? Tri::True : Tri::Unknown;
      }
      case Compiled::Or: {
        Tri l = eval(c.children[0]);
        if (l == Tri::True) return l;
        Tri r = eval(c.children[1]);
        if (r == Tri::True) return r;
        return (l == Tri::False && r == Tri::False) ? Tri::False : Tri::Unknown;
      }
      case Compiled::Exists: {
        std::vector<Element> key;
        key.reserve(c.free.size());
        for (std::size_t slot : c.free) key.push_back(values_[slot]);
        auto& memo = memos_[c.memo];
        if (auto hit = memo.find(key); hit != memo.end()) return hit->second;
        Tri result = Tri::False;
        for (Element e = 0; e < b_.size() && result != Tri::True; ++e) {
          values_[c.var] = e;
          Tri r = eval(c.children[0]);
          if (r == Tri::True) {
            result = Tri::True;
          } else if (r == Tri::Unknown) {
            result = Tri::Unknown;
          }
        }
        values_[c.var] = kUnset;
        memo.emplace(std::move(key), result);
        return result;
      }
    }
    return Tri::Unknown;
  }

  void walk(std::size_t depth) {
    Tri t = eval(root_);
    if (t == Tri::False) return;
    if (t == Tri::True) {
      total_ += pow_big(BigInt(b_.size()), lib_size_ - depth);
      return;
    }
    if (depth == lib_size_) return;  // unreachable: a full assignment decides the formula
    for (Element e = 0; e < b_.size(); ++e) {
      values_[depth] = e;
      walk(depth + 1);
    }
    values_[depth] = kUnset;
  }

  const Structure& b_;
  std::map<std::string, std::size_t> slots_;
  std::size_t next_slot_ = 0;
  std::vector<std::map<std::vector<Element>, Tri>> memos_;
  Compiled root_;
  std::vector<Element> values_;
  std::size_t lib_size_ = 0;
  BigInt total_;
};

}  // namespace

BigInt brute_force_count(const EpFormula& phi, const Structure& b) {
  require_includes(b.signature(), phi.signature(), "structure");
  Evaluator ev(phi, b);
  return ev.count(phi.lib().size());
}

// --- join-project ------------------------------------------------------------------

namespace {

struct Factor {
  std::vector<Element> vars;  // sorted, distinct
  std::vector<std::vector<Element>> rows;
};

void normalize_rows(Factor& f) {
  std::sort(f.rows.begin(), f.rows.end());
  f.rows.erase(std::unique(f.rows.begin(), f.rows.end()), f.rows.end());
}

Factor atom_factor(const Tuple& atom, const std::vector<Tuple>& tuples) {
  Factor f;
  f.vars = atom;
  std::sort(f.vars.begin(), f.vars.end());
  f.vars.erase(std::unique(f.vars.begin(), f.vars.end()), f.vars.end());
  std::vector<std::size_t> column(f.vars.size());
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    column[i] = static_cast<std::size_t>(std::find(atom.begin(), atom.end(), f.vars[i]) - atom.begin());
  }
  for (const auto& t : tuples) {
    bool consistent = true;
    for (std::size_t i = 0; i < atom.size() && consistent; ++i) {
      std::size_t first = static_cast<std::size_t>(std::find(atom.begin(), atom.end(), atom[i]) - atom.begin());
      consistent = t[i] == t[first];
    }
    if (!consistent) continue;
    std::vector<Element> row(f.vars.size());
    for (std::size_t i = 0; i < f.vars.size(); ++i) row[i] = t[column[i]];
    f.rows.push_back(std::move(row));
  }
  normalize_rows(f);
  return f;
}

Factor join(const Factor& a, const Factor& b) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(out.vars));
  std::vector<Element> shared;
  std::set_intersection(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(shared));
  auto positions = [](const std::vector<Element>& vars, const std::vector<Element>& pick) {
    std::vector<std::size_t> pos;
    for (Element v : pick) pos.push_back(static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin()));
    return pos;
  };
  auto a_shared = positions(a.vars, shared);
  auto b_shared = positions(b.vars, shared);
  std::map<std::vector<Element>, std::vector<std::size_t>> index;
  for (std::size_t r = 0; r < b.rows.size(); ++r) {
    std::vector<Element> key;
    for (auto p : b_shared) key.push_back(b.rows[r][p]);
    index[key].push_back(r);
  }
  // Source of each output column: (0, pos in a) or (1, pos in b).
  std::vector<std::pair<int, std::size_t>> source;
  for (Element v : out.vars) {
    auto ia = std::find(a.vars.begin(), a.vars.end(), v);
    if (ia != a.vars.end()) {
      source.emplace_back(0, static_cast<std::size_t>(ia - a.vars.begin()));
    } else {
      source.emplace_back(1, static_cast<std::size_t>(std::find(b.vars.begin(), b.vars.end(), v) - b.vars.begin()));
    }
  }
  for (const auto& ra : a.rows) {
    std::vector<Element> key;
    for (auto p : a_shared) key.push_back(ra[p]);
    auto it = index.find(key);
    if (it == index.end()) continue;
    for (std::size_t r : it->second) {
      const auto& rb = b.rows[r];
      std::vector<Element> row;
      row.reserve(source.size());
      for (auto [side, p] : source) row.push_back(side == 0 ? ra[p] : rb[p]);
      out.rows.push_back(std::move(row));
    }
  }
  normalize_rows(out);
  return out;
}

Factor project_out(const Factor& f, Element v) {
  Factor out;
  std::size_t drop = static_cast<std::size_t>(std::find(f.vars.begin(), f.vars.end(), v) - f.vars.begin());
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (i != drop) out.vars.push_back(f.vars[i]);
  }
  for (const auto& row : f.rows) {
    std::vector<Element> r;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i != drop) r.push_back(row[i]);
    }
    out.rows.push_back(std::move(r));
  }
  normalize_rows(out);
  return out;
}

// Size of the projection onto the liberal elements of the answers of a
// connected structure with at least one tuple.
BigInt join_project_count(const PpFormula& pp, const Structure& b) {
  const Structure& a = pp.structure();
  std::vector<Factor> factors;
  for (const auto& [rel, tuples] : a.relations()) {
    for (const auto& t : tuples) {
      factors.push_back(atom_factor(t, b.tuples(rel)));
      if (factors.back().rows.empty()) return 0;
    }
  }
  std::set<Element> pending;
  for (Element e : pp.quantified_elements()) pending.insert(e);
  while (!pending.empty()) {
    Element best = *pending.begin();
    std::size_t best_degree = static_cast<std::size_t>(-1);
    for (Element v : pending) {
      std::set<Element> neighbours;
      for (const auto& f : factors) {
        if (std::binary_search(f.vars.begin(), f.vars.end(), v)) neighbours.insert(f.vars.begin(), f.vars.end());
      }
      if (neighbours.size() < best_degree) {
        best_degree = neighbours.size();
        best = v;
      }
    }
    pending.erase(best);
    std::vector<Factor> rest;
    std::optional<Factor> merged;
    for (auto& f : factors) {
      if (std::binary_search(f.vars.begin(), f.vars.end(), best)) {
        merged = merged ? join(*merged, f) : std::move(f);
      } else {
        rest.push_back(std::move(f));
      }
    }
    if (merged) {
      Factor projected = project_out(*merged, best);
      if (projected.rows.empty()) return 0;
      if (!projected.vars.empty()) rest.push_back(std::move(projected));
    }
    factors = std::move(rest);
  }
  if (factors.empty()) return 1;
  std::sort(factors.begin(), factors.end(), [](const Factor& x, const Factor& y) { return x.rows.size() < y.rows.size(); });
  Factor total = std::move(factors.front());
  for (std::size_t i = 1; i < factors.size(); ++i) {
    total = join(total, factors[i]);
    if (total.rows.empty()) return 0;
  }
  return BigInt(total.rows.size());
}

}  // namespace

BigInt count_pp(const PpFormula& pp, const Structure& b) {
  require_includes(b.signature(), pp.signature(), "structure");
  BigInt result = 1;
  for (const auto& comp : components(pp)) {
    const Structure& s = comp.structure();
    if (!comp.is_liberal()) {
      if (!find_homomorphism(s, b)) return 0;
    } else if (s.tuple_count() == 0) {
      result *= assignment_count(s.size(), b);
    } else {
      result *= join_project_count(comp, b);
    }
    if (result == 0) return 0;
  }
  return result;
}

BigInt count_ep(const EpFormula& phi, const Structure& b) {
  require_includes(b.signature(), phi.signature(), "structure");
  DisjunctiveEp normal = normalize_ep(phi);
  for (const auto& d : normal.disjuncts) {
    if (d.is_sentence() && count_pp(d, b) != 0) return assignment_count(normal.lib.size(), b);
  }
  auto parts = all_free_part(normal);
  if (parts.all_free.disjuncts.empty()) return 0;
  // A disjunct entailing another one adds no answers. Dropping it leaves the
  // formula logically equivalent, hence the same expansion, with fewer subsets.
  auto& free = parts.all_free.disjuncts;
  std::vector<PpFormula> kept;
  for (std::size_t j = 0; j < free.size(); ++j) {
    bool redundant = false;
    for (std::size_t i = 0; i < free.size() && !redundant; ++i) {
      if (i == j || !entails(free[j], free[i])) continue;
      // Of two equivalent disjuncts only the first survives.
      redundant = i < j || !entails(free[i], free[j]);
    }
    if (!redundant) kept.push_back(free[j]);
  }
  free = std::move(kept);
  BigInt total = 0;
  for (const auto& term : star_expansion(parts.all_free).terms) total += term.coefficient * count_pp(term.formula, b);
  return total;
}

}  // namespace epq
