#pragma once

#include "epq/bigint.hpp"
#include "epq/formula.hpp"
#include "epq/pp_formula.hpp"
#include "epq/structure.hpp"

namespace epq {

/// Reference evaluator: walks all assignments lib -> B and evaluates the AST
/// directly (three-valued on partial assignments, so hopeless prefixes are
/// cut and fully decided ones are counted in bulk).
BigInt brute_force_count(const EpFormula& phi, const Structure& b);

/// Product over components: a sentence component contributes 1 or 0, an
/// isolated liberal variable |B|, a liberal component the size of its
/// projected answer set (join-project with min-degree elimination).
BigInt count_pp(const PpFormula& pp, const Structure& b);

/// Counts an EP formula through normalization and the expansion into a
/// weighted sum of pp-formulas.
BigInt count_ep(const EpFormula& phi, const Structure& b);

/// |B|^|lib|.
BigInt assignment_count(std::size_t lib_size, const Structure& b);

}  // namespace epq
