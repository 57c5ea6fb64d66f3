#pragma once

#include <string>
#include <vector>

#include "epq/bigint.hpp"
#include "epq/pp_formula.hpp"

namespace epq {

struct WeightedTerm {
  BigInt coefficient;
  PpFormula formula;
};

/// sum_i c_i |phi_i(B)| over pp-formulas sharing one liberal list.
struct WeightedPpSum {
  std::vector<std::string> lib;
  std::vector<WeightedTerm> terms;
};

/// Inclusion-exclusion over all nonempty subsets of disjuncts, with terms
/// merged whenever they are counting equivalent and zero terms dropped.
/// Every disjunct must be free.
WeightedPpSum star_expansion(const DisjunctiveEp& phi);

struct AllFreeSplit {
  DisjunctiveEp all_free;  // may have no disjuncts
  std::vector<PpFormula> sentences;
};

/// Separates the free disjuncts from the sentence disjuncts.
AllFreeSplit all_free_part(const DisjunctiveEp& phi);

struct PlusSet {
  WeightedPpSum af_star;
  /// in_minus[i]: term i of af_star entails no sentence disjunct.
  std::vector<bool> in_minus;
  std::vector<PpFormula> sentences;

  /// The terms of af_star marked in_minus.
  WeightedPpSum minus_sum() const;
  /// phi+: the in_minus formulas followed by the sentence disjuncts.
  std::vector<PpFormula> members() const;
};

/// `phi` should be normalized.
PlusSet plus_set(const DisjunctiveEp& phi);

BigInt evaluate(const WeightedPpSum& sum, const Structure& b);

/// One line per term: `<coefficient> <formula body>`.
std::string serialize(const WeightedPpSum& sum);

}  // namespace epq
