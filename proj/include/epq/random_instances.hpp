#pragma once

#include <cstdint>
#include <random>

#include "epq/formula.hpp"
#include "epq/pp_formula.hpp"
#include "epq/structure.hpp"

namespace epq {

/// Signature with E/2 and F/1.
Signature edge_and_colour_signature();

struct RandomShape {
  std::size_t max_disjuncts = 3;
  std::size_t max_vars = 4;     // liberal plus quantified, per disjunct
  std::size_t max_lib = 3;
  std::size_t max_atoms = 3;    // per disjunct
  double sentence_rate = 0.0;   // chance that a disjunct is a sentence
};

/// A pp-formula with lib size in [1, max_lib] (or 0 if max_lib is 0) and
/// up to max_vars variables.
PpFormula random_pp(const Signature& sig, const RandomShape& shape, std::mt19937_64& rng);

/// A disjunction of pp-formulas over a shared liberal list, as text-level
/// AST. Free disjuncts use a liberal variable in their first atom; sentence
/// disjuncts (at sentence_rate) use only quantified variables.
EpFormula random_disjunctive_ep(const Signature& sig, const RandomShape& shape, std::mt19937_64& rng);

/// An arbitrary nesting of &, | and exists over atoms.
EpFormula random_ep_tree(const Signature& sig, std::size_t lib_size, std::size_t depth, std::mt19937_64& rng);

/// Universe size uniform in [1, max_size], random density.
Structure random_small_structure(const Signature& sig, std::size_t max_size, std::mt19937_64& rng);

}  // namespace epq
