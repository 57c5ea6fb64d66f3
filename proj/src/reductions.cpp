#include "epq/reductions.hpp"

#include <algorithm>

#include "epq/counting.hpp"
#include "epq/errors.hpp"
#include "epq/homomorphism.hpp"
#include "epq/rational.hpp"

namespace epq {

CountOracle OracleTranscript::wrap(std::string label, CountOracle oracle) const {
  auto state = state_;
  return [state, label = std::move(label), oracle = std::move(oracle)](const Structure& d) {
    BigInt answer = oracle(d);
    std::lock_guard<std::mutex> lock(state->mutex);
    state->calls.push_back({label, d.size(), answer});
    return answer;
  };
}

std::vector<OracleCall> OracleTranscript::calls() const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  return state_->calls;
}

std::size_t OracleTranscript::size() const {
  std::lock_guard<std::mutex> lock(state_->mutex);
  return state_->calls.size();
}

namespace {

// Brings `s` to the signature of `b` so the two can be multiplied.
Structure aligned(const Structure& s, const Structure& b) {
  if (s.signature() == b.signature()) return s;
  return with_signature(s, Signature::merge(b.signature(), s.signature()));
}

Structure times(const Structure& b, const Structure& c) {
  Signature sig = Signature::merge(b.signature(), c.signature());
  return product(with_signature(b, sig), with_signature(c, sig));
}

BigInt exact_divide(const BigInt& num, const BigInt& den, const std::string& what) {
  if (den == 0 || num % den != 0) throw OracleInconsistency(what + ": division is not exact");
  return num / den;
}

}  // namespace

RecoveryPlan plan_recovery(const WeightedPpSum& sum, const std::optional<Structure>& c, const SearchLimits& limits) {
  RecoveryPlan plan;
  plan.sum = sum;
  if (sum.terms.empty()) return plan;
  std::vector<PpFormula> formulas;
  for (const auto& t : sum.terms) formulas.push_back(t.formula);
  plan.classes = semi_counting_classes(formulas);
  plan.c = c ? *c : joint_distinguishing_structure(formulas, limits);
  for (const auto& cls : plan.classes) {
    BigInt node = count_pp(formulas[cls.front()], plan.c);
    for (std::size_t i : cls) {
      if (count_pp(formulas[i], plan.c) != node) {
        throw PreconditionViolation("structure C gives different counts inside one semi-counting class");
      }
    }
    if (node <= 0) throw PreconditionViolation("structure C gives a zero count");
    plan.nodes.push_back(node);
  }
  std::vector<BigInt> sorted = plan.nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionViolation("structure C does not separate the semi-counting classes");
  }
  return plan;
}

std::vector<BigInt> recover_class_sums(const RecoveryPlan& plan, const Structure& b, const CountOracle& oracle) {
  const std::size_t s = plan.classes.size();
  if (s == 0) return {};
  Structure c = aligned(plan.c, b);
  std::vector<BigInt> rhs;
  Structure current = b;
  for (std::size_t l = 0; l < s; ++l) {
    if (l > 0) current = times(current, c);
    rhs.push_back(oracle(current));
  }
  auto solution = solve_vandermonde(plan.nodes, rhs);
  std::vector<BigInt> out;
  for (const auto& q : solution) {
    auto v = as_integer(q);
    if (!v) throw OracleInconsistency("recovered class sum is not an integer");
    out.push_back(*v);
  }
  return out;
}

std::vector<BigInt> split_semi_class(const std::vector<WeightedTerm>& terms, const Structure& b,
                                     const CountOracle& sum_oracle) {
  const std::size_t n = terms.size();
  std::vector<std::optional<BigInt>> known(n);
  std::vector<std::size_t> remaining(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (terms[i].coefficient == 0) throw PreconditionViolation("split_semi_class: zero coefficient");
    remaining[i] = i;
  }
  while (!remaining.empty()) {
    std::size_t g = remaining.front();
    Structure anchor;
    bool last = remaining.size() == 1;
    if (!last) {
      std::vector<PpFormula> rest;
      for (std::size_t i : remaining) rest.push_back(terms[i].formula);
      auto [local, c] = min_hom_order_witness(rest);
      g = remaining[local];
      anchor = aligned(c, b);
    }
    // On B x A_g every other remaining term vanishes; on the last level the
    // query is B itself.
    BigInt value = last ? sum_oracle(b) : sum_oracle(times(b, anchor));
    for (std::size_t r = 0; r < n; ++r) {
      if (!known[r]) continue;
      BigInt factor = last ? BigInt(1) : count_pp(terms[r].formula, anchor);
      value -= terms[r].coefficient * *known[r] * factor;
    }
    BigInt scale = terms[g].coefficient * (last ? BigInt(1) : count_pp(terms[g].formula, anchor));
    known[g] = exact_divide(value, scale, "split_semi_class");
    if (*known[g] < 0) throw OracleInconsistency("split_semi_class: negative count");
    remaining.erase(std::find(remaining.begin(), remaining.end(), g));
  }
  std::vector<BigInt> out;
  for (auto& k : known) out.push_back(*k);
  return out;
}

std::vector<BigInt> recover_term_counts(const RecoveryPlan& plan, const Structure& b, const CountOracle& oracle) {
  std::vector<BigInt> out(plan.sum.terms.size());
  auto sums = recover_class_sums(plan, b, oracle);
  for (std::size_t j = 0; j < plan.classes.size(); ++j) {
    const auto& cls = plan.classes[j];
    std::vector<WeightedTerm> terms;
    for (std::size_t i : cls) terms.push_back(plan.sum.terms[i]);
    std::vector<BigInt> counts;
    if (cls.size() == 1) {
      counts.push_back(exact_divide(sums[j], terms.front().coefficient, "class sum"));
    } else {
      // The class sum at B is known; at other structures it is recovered again.
      CountOracle class_oracle = [&, j](const Structure& d) {
        if (&d == &b) return sums[j];
        return recover_class_sums(plan, d, oracle)[j];
      };
      counts = split_semi_class(terms, b, class_oracle);
    }
    for (std::size_t k = 0; k < cls.size(); ++k) out[cls[k]] = counts[k];
  }
  return out;
}

BigInt ep_count_from_pp_oracle(const DisjunctiveEp& phi, const PlusSet& plus, const Structure& b,
                               const std::vector<CountOracle>& pp_oracles) {
  const auto members = plus.members();
  if (pp_oracles.size() != members.size()) throw PreconditionViolation("one oracle per member of phi+ is needed");
  const BigInt all = assignment_count(phi.lib.size(), b);
  std::size_t minus_count = members.size() - plus.sentences.size();
  for (std::size_t i = minus_count; i < members.size(); ++i) {
    BigInt v = pp_oracles[i](b);
    if (v != 0 && v != all) throw OracleInconsistency("a sentence disjunct has neither 0 nor all answers");
    if (v != 0) return all;
  }
  BigInt total = 0;
  std::size_t k = 0;
  for (std::size_t t = 0; t < plus.af_star.terms.size(); ++t) {
    if (!plus.in_minus[t]) continue;  // entails a false sentence: no answers
    total += plus.af_star.terms[t].coefficient * pp_oracles[k++](b);
  }
  if (total < 0 || total > all) throw OracleInconsistency("total count out of range");
  return total;
}

BigInt pp_count_from_ep_oracle(std::size_t index, const DisjunctiveEp& phi, const PlusSet& plus, const Structure& b,
                               const CountOracle& ep_oracle, AnchorChoice anchor, const RecoveryPlan* minus_plan,
                               const SearchLimits& limits) {
  const auto members = plus.members();
  if (index >= members.size()) throw PreconditionViolation("formula is not a member of phi+");
  const PpFormula& psi = members[index];
  const std::size_t minus_count = members.size() - plus.sentences.size();
  const std::size_t v = phi.lib.size();

  if (index >= minus_count) {
    Structure a = aligned(psi.structure(), b);
    BigInt value = ep_oracle(times(a, b));
    BigInt maximum = pow_big(BigInt(a.size()) * BigInt(b.size()), v);
    if (value > maximum || value < 0) throw OracleInconsistency("oracle answer exceeds the number of assignments");
    return value == maximum ? assignment_count(v, b) : BigInt(0);
  }

  // Anchor C0: psi holds on it and no sentence disjunct does, so on every
  // B x C0 x ... only the phi_af^- terms contribute.
  Structure c0 = psi.structure();
  if (anchor == AnchorChoice::DisjointUnion) {
    std::vector<Structure> parts;
    for (std::size_t i = 0; i < minus_count; ++i) parts.push_back(with_signature(members[i].structure(), phi.signature));
    Structure u = disjoint_union(std::span<const Structure>(parts));
    bool sentence_holds = std::any_of(plus.sentences.begin(), plus.sentences.end(), [&](const PpFormula& theta) {
      return find_homomorphism(with_signature(theta.structure(), phi.signature), u).has_value();
    });
    if (!sentence_holds) c0 = std::move(u);
  }
  c0 = aligned(c0, b);

  std::optional<RecoveryPlan> own;
  if (!minus_plan) own = plan_recovery(plus.minus_sum(), std::nullopt, limits);
  const RecoveryPlan& plan = minus_plan ? *minus_plan : *own;

  Structure bc = times(b, c0);
  auto counts = recover_term_counts(plan, bc, ep_oracle);
  BigInt on_anchor = count_pp(psi, c0);
  if (on_anchor == 0) throw Error("internal: psi does not hold on its anchor structure");
  return exact_divide(counts.at(index), on_anchor, "pp_count_from_ep_oracle");
}

}  // namespace epq
