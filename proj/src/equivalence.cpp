#include "epq/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <set>

#include "epq/counting.hpp"
#include "epq/enumerate.hpp"
#include "epq/errors.hpp"

namespace epq {

std::string to_string(EquivalenceKind kind) {
  switch (kind) {
    case EquivalenceKind::Logical:
      return "logical";
    case EquivalenceKind::Counting:
      return "counting";
    case EquivalenceKind::SemiCounting:
      return "semi-counting";
  }
  return "?";
}

SearchLimits default_limits() {
  SearchLimits limits;
  if (const char* cap = std::getenv("EPQ_SEARCH_CAP")) {
    char* end = nullptr;
    long v = std::strtol(cap, &end, 10);
    if (end != cap && v >= 1) limits.exhaustive_size = static_cast<std::size_t>(v);
  }
  return limits;
}

namespace {

PpFormula lift(const PpFormula& pp, const Signature& sig) {
  if (pp.signature() == sig) return pp;
  return PpFormula(with_signature(pp.structure(), sig), pp.lib());
}

std::pair<PpFormula, PpFormula> lift_pair(const PpFormula& p, const PpFormula& q) {
  Signature sig = Signature::merge(p.signature(), q.signature());
  return {lift(p, sig), lift(q, sig)};
}

std::set<std::string> lib_set(const PpFormula& p) { return {p.lib().begin(), p.lib().end()}; }

// A homomorphism A_from -> A_to mapping the liberal elements bijectively
// onto the liberal elements of `to` (sizes assumed equal).
std::optional<Mapping> renaming_hom(const PpFormula& from, const PpFormula& to) {
  HomomorphismSearch search(from.structure(), to.structure());
  for (Element s : from.lib_elements()) search.restrict_domain(s, to.lib_elements());
  search.require_injective(from.lib_elements());
  search.prioritize(from.lib_elements());
  auto h = search.find();
  if (!h) return h;
  std::set<Element> image;
  for (Element s : from.lib_elements()) {
    if (!to.is_lib((*h)[s])) throw Error("internal: renaming witness leaves the liberal set");
    image.insert((*h)[s]);
  }
  if (image.size() != from.lib_elements().size()) throw Error("internal: renaming witness is not injective");
  return h;
}

bool counts_differ(const PpFormula& p, const PpFormula& q, const Structure& b) {
  return count_pp(p, b) != count_pp(q, b);
}

Structure as_tau_structure(const Structure& s, const Signature& sig) { return with_signature(s, sig); }

}  // namespace

EquivalenceVerdict logically_equivalent(const PpFormula& p0, const PpFormula& q0) {
  EquivalenceVerdict v;
  v.kind = EquivalenceKind::Logical;
  if (lib_set(p0) != lib_set(q0)) {
    v.note = "liberal variable sets differ; formulas over different variables are never logically equivalent";
    return v;
  }
  auto [p, q] = lift_pair(p0, q0);
  Structure ap = augment(p);
  Structure aq = augment(q);
  // q entails p iff aug(p) -> aug(q).
  v.forward = find_homomorphism(ap, aq);
  v.backward = find_homomorphism(aq, ap);
  v.equivalent = v.forward && v.backward;
  if (!v.equivalent) {
    v.note = !v.forward ? "first formula is not entailed by the second" : "second formula is not entailed by the first";
    v.forward.reset();
    v.backward.reset();
  }
  return v;
}

EquivalenceVerdict counting_equivalent(const PpFormula& p0, const PpFormula& q0, bool want_distinguisher,
                                       const SearchLimits& limits) {
  auto [p, q] = lift_pair(p0, q0);
  EquivalenceVerdict v;
  v.kind = EquivalenceKind::Counting;
  if (p.lib().size() != q.lib().size()) {
    v.note = "liberal sets have different sizes";
    if (want_distinguisher) v.distinguisher = full_structure(p.signature(), 2);
    return v;
  }
  v.forward = renaming_hom(p, q);
  if (v.forward) v.backward = renaming_hom(q, p);
  v.equivalent = v.forward && v.backward;
  if (!v.equivalent) {
    v.forward.reset();
    v.backward.reset();
    v.note = "no renaming in both directions";
    if (want_distinguisher) {
      v.distinguisher = find_distinguishing_structure(p, q, limits);
      if (!v.distinguisher) v.note += "; no distinguishing structure found within the search limits";
    }
  }
  return v;
}

EquivalenceVerdict semi_counting_equivalent(const PpFormula& p, const PpFormula& q, bool want_distinguisher,
                                            const SearchLimits& limits) {
  if (!p.is_liberal() || !q.is_liberal()) {
    throw PreconditionViolation("semi-counting equivalence needs formulas with liberal variables");
  }
  EquivalenceVerdict v = counting_equivalent(hat(p), hat(q), false, limits);
  v.kind = EquivalenceKind::SemiCounting;
  if (!v.equivalent && want_distinguisher) v.distinguisher = distinguishing_pair_structure(p, q, limits);
  return v;
}

std::optional<Structure> find_distinguishing_structure(const PpFormula& p0, const PpFormula& q0,
                                                       const SearchLimits& limits) {
  auto [p, q] = lift_pair(p0, q0);
  const Signature& sig = p.signature();
  std::optional<Structure> found;
  for (std::size_t n = 1; n <= limits.exhaustive_size && !found; ++n) {
    if (tuple_slots(sig, n) > limits.max_slots) continue;
    for_each_structure(sig, n, [&](const Structure& b) {
      if (counts_differ(p, q, b)) found = b;
      return !found;
    });
  }
  if (found) return found;

  Structure unit = unit_structure(sig);
  for (const auto* pp : {&p, &q}) {
    Structure own = as_tau_structure(pp->structure(), sig);
    for (std::size_t k = 0; k <= 2; ++k) {
      Structure candidate = k == 0 ? own : disjoint_union(own, k, unit);
      if (counts_differ(p, q, candidate)) return candidate;
    }
  }
  std::mt19937_64 rng(limits.seed);
  std::uniform_int_distribution<std::size_t> size(1, std::max<std::size_t>(1, limits.random_size));
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (std::size_t trial = 0; trial < limits.random_trials; ++trial) {
    Structure b = random_structure(sig, size(rng), density(rng), rng);
    if (counts_differ(p, q, b)) return b;
  }
  return std::nullopt;
}

Structure distinguishing_pair_structure(const PpFormula& p0, const PpFormula& q0, const SearchLimits& limits) {
  auto [p, q] = lift_pair(p0, q0);
  if (!p.is_liberal() || !q.is_liberal()) {
    throw PreconditionViolation("distinguishing_pair_structure needs formulas with liberal variables");
  }
  PpFormula hp = hat(p);
  PpFormula hq = hat(q);
  if (counting_equivalent(hp, hq).equivalent) {
    throw PreconditionViolation("formulas are semi-counting equivalent; no distinguishing structure exists");
  }
  auto b = find_distinguishing_structure(hp, hq, limits);
  if (!b) throw SearchExhausted("no structure separating the hat formulas within the search limits");
  Structure unit = unit_structure(p.signature());
  // k -> |hat(B + kI)| is a polynomial of degree at most |lib|; two different
  // ones agree on at most that many points.
  const std::size_t bound = std::max(p.lib().size(), q.lib().size()) + 1;
  for (std::size_t k = 1; k <= bound; ++k) {
    Structure d = disjoint_union(*b, k, unit);
    BigInt cp = count_pp(p, d);
    BigInt cq = count_pp(q, d);
    if (cp > 0 && cq > 0 && cp != cq) return d;
  }
  throw Error("internal: no k separates the formulas on B + kI");
}

std::vector<std::vector<std::size_t>> semi_counting_classes(std::span<const PpFormula> phis) {
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    bool placed = false;
    for (auto& cls : classes) {
      if (semi_counting_equivalent(phis[cls.front()], phis[i]).equivalent) {
        cls.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back({i});
  }
  return classes;
}

namespace {

bool pairwise_distinct(const std::vector<BigInt>& values) {
  std::vector<BigInt> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool separates(const std::vector<PpFormula>& reps, const Structure& c) {
  std::vector<BigInt> counts;
  for (const auto& r : reps) {
    counts.push_back(count_pp(r, c));
    if (counts.back() == 0) return false;
  }
  return pairwise_distinct(counts);
}

// A structure in factored form D^l x D' with its counts for the
// representatives, kept symbolic until materialised.
struct Factored {
  std::vector<std::pair<Structure, std::size_t>> factors;  // (structure, exponent)
  std::vector<BigInt> counts;
  BigInt size;
};

std::size_t log_bound(const BigInt& numerator_over, const BigInt& lo, const BigInt& hi) {
  // Smallest l with (hi/lo)^l > numerator_over, computed exactly.
  std::size_t l = 0;
  BigInt a = 1;
  BigInt b = 1;
  while (a <= numerator_over * b) {
    a *= hi;
    b *= lo;
    ++l;
  }
  return l;
}

Structure materialise(const Factored& f, const Signature& sig) {
  Structure out = unit_structure(sig);
  bool first = true;
  for (const auto& [s, e] : f.factors) {
    for (std::size_t i = 0; i < e; ++i) {
      out = first ? s : product(out, s);
      first = false;
    }
  }
  return out;
}

Factored inductive_construction(const std::vector<PpFormula>& reps, const Signature& sig,
                                const SearchLimits& limits) {
  Factored current;
  current.counts = {BigInt(1)};
  current.size = 1;
  for (std::size_t n = 1; n < reps.size(); ++n) {
    std::vector<BigInt> counts = current.counts;
    Structure d = materialise(current, sig);
    counts.push_back(count_pp(reps[n], d));
    std::size_t clash = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] == counts[n]) clash = i;
    }
    if (clash == n) {
      current.counts = std::move(counts);
      continue;
    }
    Structure d2 = distinguishing_pair_structure(reps[n], reps[clash], limits);
    std::vector<BigInt> second;
    BigInt biggest = 0;
    for (std::size_t i = 0; i <= n; ++i) {
      second.push_back(count_pp(reps[i], d2));
      biggest = std::max(biggest, second.back());
    }
    // Enough copies of D make the D-order dominate any factor from D'.
    std::size_t bound = 0;
    std::vector<BigInt> sorted(counts.begin(), counts.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) bound = std::max(bound, log_bound(biggest, sorted[i - 1], sorted[i]));
    std::optional<std::size_t> chosen;
    for (std::size_t l = 0; l <= bound && !chosen; ++l) {
      std::vector<BigInt> combined;
      for (std::size_t i = 0; i <= n; ++i) combined.push_back(pow_big(counts[i], l) * second[i]);
      if (pairwise_distinct(combined)) chosen = l;
    }
    if (!chosen) throw Error("internal: inductive construction found no exponent");
    Factored next;
    for (const auto& [s, e] : current.factors) next.factors.emplace_back(s, e * *chosen);
    next.factors.emplace_back(d2, 1);
    for (std::size_t i = 0; i <= n; ++i) next.counts.push_back(pow_big(counts[i], *chosen) * second[i]);
    next.size = pow_big(current.size, *chosen) * d2.size();
    current = std::move(next);
  }
  return current;
}

}  // namespace

Structure joint_distinguishing_structure(std::span<const PpFormula> phis0, const SearchLimits& limits) {
  if (phis0.empty()) throw PreconditionViolation("joint_distinguishing_structure needs at least one formula");
  Signature sig;
  for (const auto& p : phis0) {
    if (!p.is_liberal()) throw PreconditionViolation("joint_distinguishing_structure needs liberal formulas");
    sig = Signature::merge(sig, p.signature());
  }
  std::vector<PpFormula> phis;
  for (const auto& p : phis0) phis.push_back(lift(p, sig));
  std::vector<PpFormula> reps;
  for (const auto& cls : semi_counting_classes(phis)) reps.push_back(phis[cls.front()]);

  Structure unit = unit_structure(sig);
  if (reps.size() == 1) return unit;

  Factored built = inductive_construction(reps, sig, limits);
  if (built.size <= limits.max_constructed_size) {
    Structure c = materialise(built, sig);
    if (!separates(reps, c)) throw Error("internal: constructed structure does not separate the classes");
    return c;
  }
  // The construction is too large to use; look for a small B + I instead.
  std::optional<Structure> found;
  for (std::size_t n = 1; n <= limits.exhaustive_size && !found; ++n) {
    if (tuple_slots(sig, n) > limits.max_slots) continue;
    for_each_structure(sig, n, [&](const Structure& b) {
      Structure c = disjoint_union(b, 1, unit);
      if (separates(reps, c)) found = std::move(c);
      return !found;
    });
  }
  if (found) return *found;
  std::mt19937_64 rng(limits.seed);
  std::uniform_int_distribution<std::size_t> size(1, std::max<std::size_t>(1, limits.random_size));
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (std::size_t trial = 0; trial < limits.random_trials; ++trial) {
    Structure c = disjoint_union(random_structure(sig, size(rng), density(rng), rng), 1, unit);
    if (separates(reps, c)) return c;
  }
  throw SearchExhausted("constructed structure has " + built.size.str() +
                        " elements and no small replacement was found");
}

std::pair<std::size_t, Structure> min_hom_order_witness(std::span<const PpFormula> phis) {
  if (phis.empty()) throw PreconditionViolation("min_hom_order_witness needs at least one formula");
  for (std::size_t i = 0; i < phis.size(); ++i) {
    for (std::size_t j = i + 1; j < phis.size(); ++j) {
      if (!semi_counting_equivalent(phis[i], phis[j]).equivalent) {
        throw PreconditionViolation("formulas " + std::to_string(i) + " and " + std::to_string(j) +
                                    " are not semi-counting equivalent");
      }
      if (counting_equivalent(phis[i], phis[j]).equivalent) {
        throw PreconditionViolation("formulas " + std::to_string(i) + " and " + std::to_string(j) +
                                    " are counting equivalent");
      }
    }
  }
  Signature sig;
  for (const auto& p : phis) sig = Signature::merge(sig, p.signature());
  std::vector<Structure> structures;
  for (const auto& p : phis) structures.push_back(with_signature(p.structure(), sig));
  for (std::size_t i = 0; i < phis.size(); ++i) {
    bool minimal = true;
    for (std::size_t j = 0; j < phis.size() && minimal; ++j) {
      if (j != i && find_homomorphism(structures[j], structures[i])) minimal = false;
    }
    if (minimal) return {i, structures[i]};
  }
  throw PreconditionViolation("homomorphism order has no minimal element (structures are homomorphically equivalent)");
}

bool entails(const PpFormula& psi0, const PpFormula& theta0) {
  if (lib_set(psi0) != lib_set(theta0)) throw PreconditionViolation("entailment needs equal liberal sets");
  auto [psi, theta] = lift_pair(psi0, theta0);
  return find_homomorphism(augment(theta), augment(psi)).has_value();
}

std::vector<std::pair<std::string, std::string>> lib_bijection(const PpFormula& p, const PpFormula& q,
                                                               const Mapping& forward) {
  std::vector<std::pair<std::string, std::string>> out;
  for (Element s : p.lib_elements()) out.emplace_back(p.structure().name_of(s), q.structure().name_of(forward.at(s)));
  return out;
}

}  // namespace epq
