#pragma once

#include <span>
#include <string>
#include <vector>

#include "epq/formula.hpp"
#include "epq/structure.hpp"

namespace epq {

/// A prenex pp-formula in structure view: the structure A whose universe is
/// the variables, plus the liberal variables S (a subset of the universe,
/// kept in declaration order).
class PpFormula {
 public:
  PpFormula() = default;
  PpFormula(Structure structure, std::vector<std::string> lib);

  const Structure& structure() const noexcept { return structure_; }
  const Signature& signature() const noexcept { return structure_.signature(); }
  const std::vector<std::string>& lib() const noexcept { return lib_; }
  const std::vector<Element>& lib_elements() const noexcept { return lib_elements_; }

  /// Some liberal variable occurs in an atom.
  bool is_free() const;
  bool is_sentence() const { return !is_free(); }
  /// lib is nonempty.
  bool is_liberal() const noexcept { return !lib_.empty(); }
  bool is_lib(Element e) const;
  std::vector<Element> quantified_elements() const;

 private:
  Structure structure_;
  std::vector<std::string> lib_;
  std::vector<Element> lib_elements_;
};

/// Throws PreconditionViolation if the body contains a disjunction.
PpFormula to_structure_view(const EpFormula& phi);

/// Quantified variables whose names are not identifiers (or that could clash)
/// are renamed to `_q<n>`.
EpFormula to_ep_formula(const PpFormula& pp, const std::string& name = "pp");

/// `query <name> lib(...): exists ... . atoms`, `true` for no atoms.
std::string from_structure_view(const PpFormula& pp, const std::string& name = "pp");

/// Deterministic body text with quantified variables renumbered `_q0, _q1,
/// ...` in universe order. Used for ordering and printing.
std::string canonical_text(const PpFormula& pp);

/// aug(A,S): adds a unary relation `__lib_<a>` = {a} for every a in S.
Structure augment(const PpFormula& pp);

/// Conjunction glued on the shared liberal variables; quantified variables
/// are renamed apart. A single input is returned unchanged.
PpFormula conjoin_pp(std::span<const PpFormula> phis);

/// One formula per connected component of the formula graph, ordered by the
/// smallest element; isolated liberal variables are singleton components.
std::vector<PpFormula> components(const PpFormula& pp);

/// Drops every component without liberal variables. Requires lib nonempty.
PpFormula hat(const PpFormula& pp);

/// A disjunction of prenex pp-formulas sharing one liberal-variable list.
struct DisjunctiveEp {
  std::vector<std::string> lib;
  Signature signature;
  std::vector<PpFormula> disjuncts;
};

/// Renames apart, distributes & over |, pulls quantifiers, orders disjuncts
/// canonically, then deletes every disjunct into which some sentence
/// disjunct maps (keeping the formula logically equivalent) until none is
/// left to delete.
DisjunctiveEp normalize_ep(const EpFormula& phi);

/// True if no sentence disjunct maps homomorphically into another disjunct.
bool is_normalized(const DisjunctiveEp& phi);

EpFormula to_ep_formula(const DisjunctiveEp& phi, const std::string& name = "phi");

}  // namespace epq
