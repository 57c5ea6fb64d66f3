#include "epq/homomorphism.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <deque>

#include "epq/errors.hpp"

namespace epq {

using Bits = boost::dynamic_bitset<>;

class HomomorphismSearch::State {
 public:
  State(const HomomorphismSearch& owner) : owner_(owner) {
    const std::size_t n = owner.source_.size();
    const std::size_t m = owner.target_.size();
    domains_.assign(n, Bits(m));
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t t = 0; t < m; ++t) {
        if (owner.forbidden_[t]) continue;
        if (!owner.allowed_[v].empty() && !owner.allowed_[v][t]) continue;
        domains_[v].set(t);
      }
    }
  }

  /// Full propagation from scratch; false on wipe-out.
  bool initialise() {
    for (std::size_t v = 0; v < domains_.size(); ++v) {
      if (domains_[v].none()) return false;
      if (owner_.injective_[v] && domains_[v].count() == 1 && !spread_injective(static_cast<Element>(v))) return false;
    }
    for (std::size_t c = 0; c < owner_.constraints_.size(); ++c) enqueue(c);
    return propagate();
  }

  bool assign(Element var, std::size_t value) {
    domains_[var].reset();
    domains_[var].set(value);
    if (owner_.injective_[var] && !spread_injective(var)) return false;
    for (std::size_t c : owner_.constraints_of_[var]) enqueue(c);
    return propagate();
  }

  const Bits& domain(Element v) const { return domains_[v]; }
  std::size_t size() const { return domains_.size(); }

  /// Unfixed variable to branch on: priority group first, then the rest;
  /// smallest domain, ties broken by constraint degree then index.
  std::optional<Element> pick(std::span<const Element> first) const {
    auto better = [&](Element a, std::optional<Element> best) {
      if (!best) return true;
      auto ca = domains_[a].count();
      auto cb = domains_[*best].count();
      if (ca != cb) return ca < cb;
      return owner_.constraints_of_[a].size() > owner_.constraints_of_[*best].size();
    };
    std::optional<Element> best;
    for (Element v : first) {
      if (domains_[v].count() > 1 && better(v, best)) best = v;
    }
    if (best) return best;
    for (Element v = 0; v < domains_.size(); ++v) {
      if (domains_[v].count() > 1 && better(v, best)) best = v;
    }
    return best;
  }

  Mapping solution() const {
    Mapping h(domains_.size());
    for (std::size_t v = 0; v < domains_.size(); ++v) h[v] = static_cast<Element>(domains_[v].find_first());
    return h;
  }

 private:
  void enqueue(std::size_t c) {
    if (queued_.size() < owner_.constraints_.size()) queued_.assign(owner_.constraints_.size(), 0);
    if (!queued_[c]) {
      queued_[c] = 1;
      queue_.push_back(c);
    }
  }

  bool spread_injective(Element var) {
    const std::size_t value = domains_[var].find_first();
    for (std::size_t other = 0; other < domains_.size(); ++other) {
      if (other == var || !owner_.injective_[other] || !domains_[other].test(value)) continue;
      domains_[other].reset(value);
      if (domains_[other].none()) return false;
      for (std::size_t c : owner_.constraints_of_[other]) enqueue(c);
      if (domains_[other].count() == 1 && !spread_injective(static_cast<Element>(other))) return false;
    }
    return true;
  }

  bool revise(const Constraint& c) {
    const std::size_t m = owner_.target_.size();
    std::vector<Bits> support(c.distinct_vars.size(), Bits(m));
    std::vector<std::size_t> slot(c.vars.size());
    for (std::size_t p = 0; p < c.vars.size(); ++p) {
      slot[p] = static_cast<std::size_t>(
          std::find(c.distinct_vars.begin(), c.distinct_vars.end(), c.vars[p]) - c.distinct_vars.begin());
    }
    for (const auto& u : *c.target_tuples) {
      bool ok = true;
      for (std::size_t p = 0; p < c.vars.size() && ok; ++p) {
        ok = domains_[c.vars[p]].test(u[p]) && u[p] == u[c.first_occurrence[p]];
      }
      if (!ok) continue;
      for (std::size_t p = 0; p < c.vars.size(); ++p) support[slot[p]].set(u[p]);
    }
    for (std::size_t i = 0; i < c.distinct_vars.size(); ++i) {
      Element v = c.distinct_vars[i];
      Bits narrowed = domains_[v] & support[i];
      if (narrowed.none()) return false;
      if (narrowed == domains_[v]) continue;
      domains_[v] = std::move(narrowed);
      for (std::size_t other : owner_.constraints_of_[v]) enqueue(other);
      if (owner_.injective_[v] && domains_[v].count() == 1 && !spread_injective(v)) return false;
    }
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      std::size_t c = queue_.front();
      queue_.pop_front();
      queued_[c] = 0;
      if (!revise(owner_.constraints_[c])) {
        queue_.clear();
        std::fill(queued_.begin(), queued_.end(), 0);
        return false;
      }
    }
    return true;
  }

  const HomomorphismSearch& owner_;
  std::vector<Bits> domains_;
  std::deque<std::size_t> queue_;
  std::vector<char> queued_;
};

HomomorphismSearch::HomomorphismSearch(const Structure& source, const Structure& target)
    : source_(source),
      target_(target),
      constraints_of_(source.size()),
      allowed_(source.size()),
      forbidden_(target.size(), 0),
      injective_(source.size(), 0) {
  require_includes(target.signature(), source.signature(), "homomorphism search");
  for (const auto& [rel, ts] : source.relations()) {
    for (const auto& t : ts) {
      Constraint c;
      c.target_tuples = &target.tuples(rel);
      c.vars = t;
      c.first_occurrence.resize(t.size());
      for (std::size_t p = 0; p < t.size(); ++p) {
        c.first_occurrence[p] = static_cast<std::size_t>(std::find(t.begin(), t.end(), t[p]) - t.begin());
        if (c.first_occurrence[p] == p) c.distinct_vars.push_back(t[p]);
      }
      for (Element v : c.distinct_vars) constraints_of_[v].push_back(constraints_.size());
      constraints_.push_back(std::move(c));
    }
  }
}

void HomomorphismSearch::restrict_domain(Element source_element, std::span<const Element> allowed) {
  auto& mask = allowed_.at(source_element);
  std::vector<char> next(target_.size(), 0);
  for (Element t : allowed) next.at(t) = 1;
  if (!mask.empty()) {
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = static_cast<char>(next[i] && mask[i]);
  }
  mask = std::move(next);
}

void HomomorphismSearch::forbid_target(Element target_element) { forbidden_.at(target_element) = 1; }

void HomomorphismSearch::prioritize(std::vector<Element> source_elements) { priority_ = std::move(source_elements); }

void HomomorphismSearch::require_injective(std::vector<Element> source_elements) {
  for (Element v : source_elements) injective_.at(v) = 1;
}

namespace {

template <class State>
bool search_exists(const State& state, std::span<const Element> priority, Mapping& out) {
  auto var = state.pick(priority);
  if (!var) {
    out = state.solution();
    return true;
  }
  const auto& dom = state.domain(*var);
  for (auto value = dom.find_first(); value != Bits::npos; value = dom.find_next(value)) {
    State next = state;
    if (!next.assign(*var, value)) continue;
    if (search_exists(next, priority, out)) return true;
  }
  return false;
}

template <class State>
bool search_projection(const State& state, std::span<const Element> priority, std::span<const Element> projection,
                       const std::function<bool(const std::vector<Element>&)>& visit) {
  std::optional<Element> var;
  for (Element v : projection) {
    if (state.domain(v).count() > 1 && (!var || state.domain(v).count() < state.domain(*var).count())) var = v;
  }
  if (!var) {
    Mapping witness;
    if (!search_exists(state, priority, witness)) return true;
    std::vector<Element> values;
    values.reserve(projection.size());
    for (Element v : projection) values.push_back(witness[v]);
    return visit(values);
  }
  const auto& dom = state.domain(*var);
  for (auto value = dom.find_first(); value != Bits::npos; value = dom.find_next(value)) {
    State next = state;
    if (!next.assign(*var, value)) continue;
    if (!search_projection(next, priority, projection, visit)) return false;
  }
  return true;
}

}  // namespace

std::optional<Mapping> HomomorphismSearch::find() const {
  if (source_.empty()) return Mapping{};
  State root(*this);
  if (!root.initialise()) return std::nullopt;
  Mapping h;
  if (!search_exists(root, priority_, h)) return std::nullopt;
  if (!is_homomorphism(source_, target_, h)) throw Error("internal: homomorphism search produced an invalid map");
  return h;
}

void HomomorphismSearch::for_each_projection(std::span<const Element> projection,
                                             const std::function<bool(const std::vector<Element>&)>& visit) const {
  if (source_.empty()) {
    visit({});
    return;
  }
  State root(*this);
  if (!root.initialise()) return;
  search_projection(root, priority_, projection, visit);
}

bool is_homomorphism(const Structure& a, const Structure& b, std::span<const Element> h) {
  if (h.size() != a.size()) return false;
  if (!b.signature().includes(a.signature())) return false;
  for (Element img : h) {
    if (img >= b.size()) return false;
  }
  Tuple image;
  for (const auto& [rel, ts] : a.relations()) {
    for (const auto& t : ts) {
      image.clear();
      for (Element e : t) image.push_back(h[e]);
      if (!b.contains(rel, image)) return false;
    }
  }
  return true;
}

std::optional<Mapping> find_homomorphism(const Structure& a, const Structure& b) {
  return HomomorphismSearch(a, b).find();
}

std::vector<std::vector<Element>> hom_set(const Structure& a, const Structure& b, std::span<const Element> s) {
  for (Element e : s) {
    if (e >= a.size()) throw PreconditionViolation("hom_set: projection element outside the source universe");
  }
  HomomorphismSearch search(a, b);
  search.prioritize({s.begin(), s.end()});
  std::vector<std::vector<Element>> out;
  search.for_each_projection(s, [&](const std::vector<Element>& values) {
    out.push_back(values);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool hom_equivalent(const Structure& a, const Structure& b) {
  return find_homomorphism(a, b).has_value() && find_homomorphism(b, a).has_value();
}

namespace {

std::optional<Mapping> shrink_map(const Structure& x, Element dropped) {
  HomomorphismSearch search(x, x);
  search.forbid_target(dropped);
  return search.find();
}

}  // namespace

Structure core(const Structure& x) {
  Structure current = x;
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (Element e = 0; e < current.size(); ++e) {
      auto h = shrink_map(current, e);
      if (!h) continue;
      std::vector<Element> image(h->begin(), h->end());
      std::sort(image.begin(), image.end());
      image.erase(std::unique(image.begin(), image.end()), image.end());
      current = induced_substructure(current, image);
      shrunk = true;
      break;
    }
  }
  return current;
}

bool is_core(const Structure& x) {
  for (Element e = 0; e < x.size(); ++e) {
    if (shrink_map(x, e)) return false;
  }
  return true;
}

}  // namespace epq
