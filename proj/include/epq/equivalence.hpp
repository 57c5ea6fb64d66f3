#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epq/homomorphism.hpp"
#include "epq/pp_formula.hpp"

namespace epq {

enum class EquivalenceKind { Logical, Counting, SemiCounting };

std::string to_string(EquivalenceKind kind);

struct EquivalenceVerdict {
  EquivalenceKind kind = EquivalenceKind::Logical;
  bool equivalent = false;
  /// For equivalent verdicts: homomorphisms between the two structures (for
  /// counting equivalence they are bijective between the liberal sets).
  std::optional<Mapping> forward;
  std::optional<Mapping> backward;
  /// For non-equivalent verdicts, when requested: a structure with
  /// different counts (both positive for semi-counting).
  std::optional<Structure> distinguisher;
  std::string note;
};

/// Bounds for witness searches. Structures are enumerated exhaustively up to
/// `exhaustive_size` elements (skipping sizes with more than `max_slots`
/// candidate tuples), then sampled randomly up to `random_size` elements.
struct SearchLimits {
  std::size_t exhaustive_size = 4;
  std::size_t max_slots = 16;
  std::size_t random_size = 6;
  std::size_t random_trials = 3000;
  std::uint64_t seed = 0x5eed;
  /// Largest universe a constructed structure may have before a search is
  /// tried instead.
  std::size_t max_constructed_size = 64;
};

/// Defaults, with `EPQ_SEARCH_CAP` (if set) overriding exhaustive_size.
SearchLimits default_limits();

/// Same liberal set required; otherwise the verdict is negative with a note.
EquivalenceVerdict logically_equivalent(const PpFormula& p, const PpFormula& q);

EquivalenceVerdict counting_equivalent(const PpFormula& p, const PpFormula& q, bool want_distinguisher = false,
                                       const SearchLimits& limits = default_limits());

/// Both formulas must be liberal.
EquivalenceVerdict semi_counting_equivalent(const PpFormula& p, const PpFormula& q, bool want_distinguisher = false,
                                            const SearchLimits& limits = default_limits());

/// A structure on which count_pp differs, searched in enumeration order,
/// then among the formulas' own structures, then at random.
std::optional<Structure> find_distinguishing_structure(const PpFormula& p, const PpFormula& q,
                                                       const SearchLimits& limits = default_limits());

/// D = B + kI with both counts positive and different, for the least k >= 1
/// that works, where B distinguishes the hat formulas. Throws
/// PreconditionViolation if p and q are semi-counting equivalent.
Structure distinguishing_pair_structure(const PpFormula& p, const PpFormula& q,
                                        const SearchLimits& limits = default_limits());

/// C with |phi(C)| > 0 for every pp-formula and pairwise different counts
/// for formulas from different semi-counting classes.
Structure joint_distinguishing_structure(std::span<const PpFormula> phis,
                                         const SearchLimits& limits = default_limits());

/// Groups indices into semi-counting equivalence classes, in order of first
/// member.
std::vector<std::vector<std::size_t>> semi_counting_classes(std::span<const PpFormula> phis);

/// For pairwise semi-counting equivalent, pairwise non-counting-equivalent
/// formulas: the least index i such that no other structure maps into A_i,
/// together with A_i.
std::pair<std::size_t, Structure> min_hom_order_witness(std::span<const PpFormula> phis);

/// psi entails theta (same liberal set): aug(theta) -> aug(psi).
bool entails(const PpFormula& psi, const PpFormula& theta);

/// Pairs (p-variable, q-variable) of a counting witness `forward`.
std::vector<std::pair<std::string, std::string>> lib_bijection(const PpFormula& p, const PpFormula& q,
                                                               const Mapping& forward);

}  // namespace epq
