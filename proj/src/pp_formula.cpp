#include "epq/pp_formula.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "epq/errors.hpp"
#include "epq/homomorphism.hpp"

namespace epq {

PpFormula::PpFormula(Structure structure, std::vector<std::string> lib)
    : structure_(std::move(structure)), lib_(std::move(lib)) {
  std::set<std::string> seen;
  for (const auto& v : lib_) {
    if (!seen.insert(v).second) throw PreconditionViolation("duplicate liberal variable '" + v + "'");
    auto e = structure_.find(v);
    if (!e) throw PreconditionViolation("liberal variable '" + v + "' is not in the universe");
    lib_elements_.push_back(*e);
  }
}

bool PpFormula::is_lib(Element e) const {
  return std::find(lib_elements_.begin(), lib_elements_.end(), e) != lib_elements_.end();
}

bool PpFormula::is_free() const {
  for (const auto& [rel, tuples] : structure_.relations()) {
    for (const auto& t : tuples) {
      for (Element e : t) {
        if (is_lib(e)) return true;
      }
    }
  }
  return false;
}

std::vector<Element> PpFormula::quantified_elements() const {
  std::vector<Element> out;
  for (Element e = 0; e < structure_.size(); ++e) {
    if (!is_lib(e)) out.push_back(e);
  }
  return out;
}

namespace {

void gather(const NodePtr& node, std::vector<const Atom*>& atoms, std::vector<std::string>& binders) {
  if (const auto* a = std::get_if<Atom>(&node->value)) {
    atoms.push_back(a);
  } else if (const auto* c = std::get_if<Conj>(&node->value)) {
    gather(c->lhs, atoms, binders);
    gather(c->rhs, atoms, binders);
  } else if (const auto* e = std::get_if<Exists>(&node->value)) {
    binders.push_back(e->var);
    gather(e->body, atoms, binders);
  }
}

bool reserved_name(std::string_view name) {
  return name == "exists" || name == "true" || name == "query" || name == "sig" || name == "lib";
}

// Output names for every element: lib names unchanged, quantified names kept
// when usable and otherwise (or when `renumber`) replaced by `_q<n>`.
std::vector<std::string> display_names(const PpFormula& pp, bool renumber) {
  const Structure& s = pp.structure();
  std::set<std::string> taken(pp.lib().begin(), pp.lib().end());
  std::vector<std::string> names(s.size());
  std::vector<Element> pending;
  for (Element e = 0; e < s.size(); ++e) {
    const std::string& n = s.name_of(e);
    if (pp.is_lib(e)) {
      names[e] = n;
    } else if (!renumber && is_identifier(n) && !reserved_name(n)) {
      names[e] = n;
      taken.insert(n);
    } else {
      pending.push_back(e);
    }
  }
  std::size_t counter = 0;
  for (Element e : pending) {
    std::string candidate;
    do {
      candidate = "_q" + std::to_string(counter++);
    } while (taken.count(candidate));
    taken.insert(candidate);
    names[e] = candidate;
  }
  return names;
}

NodePtr body_of(const PpFormula& pp, const std::vector<std::string>& names) {
  const Structure& s = pp.structure();
  NodePtr body;
  for (const auto& [rel, tuples] : s.relations()) {
    for (const auto& t : tuples) {
      std::vector<std::string> args;
      for (Element e : t) args.push_back(names[e]);
      NodePtr atom = make_atom(rel, std::move(args));
      body = body ? make_and(body, atom) : atom;
    }
  }
  if (!body) body = make_truth();
  auto quantified = pp.quantified_elements();
  for (auto it = quantified.rbegin(); it != quantified.rend(); ++it) body = make_exists(names[*it], body);
  return body;
}

std::vector<std::vector<std::size_t>> element_groups(const Structure& s) {
  std::vector<std::size_t> parent(s.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [rel, tuples] : s.relations()) {
    for (const auto& t : tuples) {
      for (std::size_t i = 1; i < t.size(); ++i) {
        auto a = find(t[0]);
        auto b = find(t[i]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t e = 0; e < s.size(); ++e) groups[find(e)].push_back(e);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

PpFormula restrict_to(const PpFormula& pp, const std::vector<Element>& keep) {
  Structure sub = induced_substructure(pp.structure(), keep);
  std::vector<std::string> lib;
  for (const auto& v : pp.lib()) {
    if (sub.find(v)) lib.push_back(v);
  }
  return PpFormula(std::move(sub), std::move(lib));
}

}  // namespace

PpFormula to_structure_view(const EpFormula& input) {
  if (contains_disjunction(input.body())) {
    throw PreconditionViolation("formula " + input.name() + " contains a disjunction and is not primitive positive");
  }
  std::vector<const Atom*> atoms;
  std::vector<std::string> binders;
  gather(input.body(), atoms, binders);
  std::set<std::string> distinct(binders.begin(), binders.end());
  if (distinct.size() != binders.size()) return to_structure_view(rename_bound_apart(input));

  StructureBuilder builder(input.signature());
  for (const auto& v : input.lib()) builder.add_element(v);
  for (const auto& v : binders) builder.add_element(v);
  for (const Atom* a : atoms) builder.add_tuple(a->relation, a->args);
  return PpFormula(std::move(builder).build(), input.lib());
}

EpFormula to_ep_formula(const PpFormula& pp, const std::string& name) {
  return EpFormula(name, pp.signature(), pp.lib(), body_of(pp, display_names(pp, false)));
}

std::string from_structure_view(const PpFormula& pp, const std::string& name) {
  return format_query(to_ep_formula(pp, name));
}

std::string canonical_text(const PpFormula& pp) { return format_body(body_of(pp, display_names(pp, true))); }

Structure augment(const PpFormula& pp) {
  Signature sig = pp.signature();
  for (const auto& v : pp.lib()) sig.add("__lib_" + v, 1);
  const Structure& s = pp.structure();
  StructureBuilder builder(sig);
  for (const auto& n : s.elements()) builder.add_element(n);
  for (const auto& [rel, tuples] : s.relations()) {
    for (const auto& t : tuples) builder.add_tuple_ids(rel, t);
  }
  for (const auto& v : pp.lib()) builder.add_tuple("__lib_" + v, {v});
  return std::move(builder).build();
}

PpFormula conjoin_pp(std::span<const PpFormula> phis) {
  if (phis.empty()) throw PreconditionViolation("conjoin_pp needs at least one formula");
  if (phis.size() == 1) return phis.front();
  const auto& lib = phis.front().lib();
  std::set<std::string> libset(lib.begin(), lib.end());
  const Signature& sig = phis.front().signature();
  for (const auto& p : phis) {
    if (std::set<std::string>(p.lib().begin(), p.lib().end()) != libset) {
      throw PreconditionViolation("conjoin_pp: liberal variable sets differ");
    }
    if (!(p.signature() == sig)) throw SignatureMismatch("conjoin_pp: signatures differ");
  }
  StructureBuilder builder(sig);
  for (const auto& v : lib) builder.add_element(v);
  std::size_t counter = 0;
  for (const auto& p : phis) {
    const Structure& s = p.structure();
    std::vector<Element> ids(s.size());
    for (Element e = 0; e < s.size(); ++e) {
      if (p.is_lib(e)) {
        ids[e] = builder.add_element(s.name_of(e));
      } else {
        std::string fresh;
        do {
          fresh = "_q" + std::to_string(counter++);
        } while (libset.count(fresh));
        ids[e] = builder.add_element(fresh);
      }
    }
    for (const auto& [rel, tuples] : s.relations()) {
      for (const auto& t : tuples) {
        Tuple mapped;
        for (Element e : t) mapped.push_back(ids[e]);
        builder.add_tuple_ids(rel, std::move(mapped));
      }
    }
  }
  return PpFormula(std::move(builder).build(), lib);
}

std::vector<PpFormula> components(const PpFormula& pp) {
  std::vector<PpFormula> out;
  for (const auto& group : element_groups(pp.structure())) {
    out.push_back(restrict_to(pp, std::vector<Element>(group.begin(), group.end())));
  }
  return out;
}

PpFormula hat(const PpFormula& pp) {
  if (!pp.is_liberal()) throw PreconditionViolation("hat needs at least one liberal variable");
  std::vector<Element> keep;
  for (const auto& group : element_groups(pp.structure())) {
    bool liberal = std::any_of(group.begin(), group.end(), [&](std::size_t e) { return pp.is_lib(e); });
    if (liberal) keep.insert(keep.end(), group.begin(), group.end());
  }
  std::sort(keep.begin(), keep.end());
  return restrict_to(pp, keep);
}

namespace {

using Conjunct = std::vector<const Atom*>;

std::vector<Conjunct> dnf(const NodePtr& node) {
  if (std::holds_alternative<Truth>(node->value)) return {Conjunct{}};
  if (const auto* a = std::get_if<Atom>(&node->value)) return {Conjunct{a}};
  if (const auto* e = std::get_if<Exists>(&node->value)) return dnf(e->body);
  if (const auto* d = std::get_if<Disj>(&node->value)) {
    auto out = dnf(d->lhs);
    auto rhs = dnf(d->rhs);
    out.insert(out.end(), rhs.begin(), rhs.end());
    return out;
  }
  const auto& c = std::get<Conj>(node->value);
  auto lhs = dnf(c.lhs);
  auto rhs = dnf(c.rhs);
  std::vector<Conjunct> out;
  for (const auto& l : lhs) {
    for (const auto& r : rhs) {
      Conjunct joined = l;
      joined.insert(joined.end(), r.begin(), r.end());
      out.push_back(std::move(joined));
    }
  }
  return out;
}

bool sentence_maps_into(const PpFormula& sentence, const PpFormula& other) {
  return find_homomorphism(augment(sentence), augment(other)).has_value();
}

}  // namespace

DisjunctiveEp normalize_ep(const EpFormula& input) {
  EpFormula phi = rename_bound_apart(input);
  DisjunctiveEp out{phi.lib(), phi.signature(), {}};
  for (const auto& conjunct : dnf(phi.body())) {
    StructureBuilder builder(phi.signature());
    for (const auto& v : phi.lib()) builder.add_element(v);
    for (const Atom* a : conjunct) {
      for (const auto& v : a->args) builder.add_element(v);
    }
    for (const Atom* a : conjunct) builder.add_tuple(a->relation, a->args);
    out.disjuncts.emplace_back(std::move(builder).build(), phi.lib());
  }

  std::vector<std::pair<std::string, PpFormula>> keyed;
  for (auto& d : out.disjuncts) keyed.emplace_back(canonical_text(d), std::move(d));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<char> alive(keyed.size(), 1);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
      if (!alive[i] || !keyed[i].second.is_sentence()) continue;
      for (std::size_t j = 0; j < keyed.size(); ++j) {
        if (j == i || !alive[j]) continue;
        if (sentence_maps_into(keyed[i].second, keyed[j].second)) {
          alive[j] = 0;
          changed = true;
        }
      }
    }
  }
  out.disjuncts.clear();
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    if (alive[i]) out.disjuncts.push_back(std::move(keyed[i].second));
  }
  return out;
}

bool is_normalized(const DisjunctiveEp& phi) {
  for (std::size_t i = 0; i < phi.disjuncts.size(); ++i) {
    if (!phi.disjuncts[i].is_sentence()) continue;
    for (std::size_t j = 0; j < phi.disjuncts.size(); ++j) {
      if (j != i && sentence_maps_into(phi.disjuncts[i], phi.disjuncts[j])) return false;
    }
  }
  return true;
}

EpFormula to_ep_formula(const DisjunctiveEp& phi, const std::string& name) {
  if (phi.disjuncts.empty()) throw PreconditionViolation("disjunctive formula without disjuncts");
  NodePtr body;
  for (const auto& d : phi.disjuncts) {
    NodePtr part = to_ep_formula(d).body();
    body = body ? make_or(body, part) : part;
  }
  return EpFormula(name, phi.signature, phi.lib, body);
}

}  // namespace epq
