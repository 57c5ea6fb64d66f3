#include "epq/expansion.hpp"

#include <algorithm>
#include <sstream>

#include "epq/counting.hpp"
#include "epq/equivalence.hpp"
#include "epq/errors.hpp"

namespace epq {

namespace {

struct Keyed {
  BigInt coefficient;
  PpFormula formula;
  std::string text;
};

bool term_order(const Keyed& a, const Keyed& b) {
  auto ka = a.formula.structure().tuple_count();
  auto kb = b.formula.structure().tuple_count();
  if (ka != kb) return ka < kb;
  return a.text < b.text;
}

}  // namespace

WeightedPpSum star_expansion(const DisjunctiveEp& phi) {
  const std::size_t s = phi.disjuncts.size();
  if (s == 0) throw PreconditionViolation("star_expansion needs at least one disjunct");
  if (s >= 20) throw PreconditionViolation("star_expansion: too many disjuncts");
  for (const auto& d : phi.disjuncts) {
    if (!d.is_free()) throw PreconditionViolation("star_expansion needs every disjunct to be free");
  }
  std::vector<Keyed> terms;
  for (std::size_t mask = 1; mask < (std::size_t{1} << s); ++mask) {
    std::vector<PpFormula> parts;
    for (std::size_t i = 0; i < s; ++i) {
      if ((mask >> i) & 1U) parts.push_back(phi.disjuncts[i]);
    }
    PpFormula conj = conjoin_pp(parts);
    BigInt sign = (parts.size() % 2 == 1) ? 1 : -1;
    std::string text = canonical_text(conj);
    bool merged = false;
    for (auto& t : terms) {
      if (counting_equivalent(t.formula, conj).equivalent) {
        t.coefficient += sign;
        if (text < t.text) {
          t.formula = std::move(conj);
          t.text = std::move(text);
        }
        merged = true;
        break;
      }
    }
    if (!merged) terms.push_back({sign, std::move(conj), std::move(text)});
  }
  std::erase_if(terms, [](const Keyed& t) { return t.coefficient == 0; });
  std::sort(terms.begin(), terms.end(), term_order);
  WeightedPpSum out{phi.lib, {}};
  for (auto& t : terms) out.terms.push_back({std::move(t.coefficient), std::move(t.formula)});
  return out;
}

AllFreeSplit all_free_part(const DisjunctiveEp& phi) {
  AllFreeSplit out{{phi.lib, phi.signature, {}}, {}};
  for (const auto& d : phi.disjuncts) {
    if (d.is_free()) {
      out.all_free.disjuncts.push_back(d);
    } else {
      out.sentences.push_back(d);
    }
  }
  return out;
}

WeightedPpSum PlusSet::minus_sum() const {
  WeightedPpSum out{af_star.lib, {}};
  for (std::size_t i = 0; i < af_star.terms.size(); ++i) {
    if (in_minus[i]) out.terms.push_back(af_star.terms[i]);
  }
  return out;
}

std::vector<PpFormula> PlusSet::members() const {
  std::vector<PpFormula> out;
  for (std::size_t i = 0; i < af_star.terms.size(); ++i) {
    if (in_minus[i]) out.push_back(af_star.terms[i].formula);
  }
  out.insert(out.end(), sentences.begin(), sentences.end());
  return out;
}

PlusSet plus_set(const DisjunctiveEp& phi) {
  AllFreeSplit split = all_free_part(phi);
  PlusSet out;
  out.af_star.lib = phi.lib;
  if (!split.all_free.disjuncts.empty()) out.af_star = star_expansion(split.all_free);
  out.sentences = split.sentences;
  for (const auto& term : out.af_star.terms) {
    bool keep = std::none_of(out.sentences.begin(), out.sentences.end(),
                             [&](const PpFormula& theta) { return entails(term.formula, theta); });
    out.in_minus.push_back(keep);
  }
  return out;
}

BigInt evaluate(const WeightedPpSum& sum, const Structure& b) {
  BigInt total = 0;
  for (const auto& t : sum.terms) total += t.coefficient * count_pp(t.formula, b);
  return total;
}

std::string serialize(const WeightedPpSum& sum) {
  std::ostringstream out;
  for (const auto& t : sum.terms) out << t.coefficient << ' ' << canonical_text(t.formula) << '\n';
  return out.str();
}

}  // namespace epq
