#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "epq/structure.hpp"

namespace epq {

/// A map from source elements (by index) to target elements.
using Mapping = std::vector<Element>;

/// Backtracking homomorphism search with generalized arc consistency on
/// every source tuple and most-constrained-variable branching.
///
/// Extra constraints narrow the search: per-element candidate sets, a set of
/// target elements nothing may map to, an all-different group, and a group
/// of source elements branched on before all others.
class HomomorphismSearch {
 public:
  /// The target signature must include the source signature.
  HomomorphismSearch(const Structure& source, const Structure& target);

  void restrict_domain(Element source_element, std::span<const Element> allowed);
  void forbid_target(Element target_element);
  void prioritize(std::vector<Element> source_elements);
  void require_injective(std::vector<Element> source_elements);

  std::optional<Mapping> find() const;

  /// Visits each distinct restriction to `projection` of a homomorphism
  /// (values listed in `projection` order). Return false from `visit` to stop.
  void for_each_projection(std::span<const Element> projection,
                           const std::function<bool(const std::vector<Element>&)>& visit) const;

 private:
  struct Constraint {
    const std::vector<Tuple>* target_tuples;
    std::vector<Element> vars;
    std::vector<std::size_t> first_occurrence;
    std::vector<Element> distinct_vars;
  };
  class State;

  const Structure& source_;
  const Structure& target_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<std::size_t>> constraints_of_;
  std::vector<std::vector<char>> allowed_;
  std::vector<char> forbidden_;
  std::vector<Element> priority_;
  std::vector<char> injective_;
};

bool is_homomorphism(const Structure& a, const Structure& b, std::span<const Element> h);

std::optional<Mapping> find_homomorphism(const Structure& a, const Structure& b);

/// hom(A, B, S): the maps S -> B that extend to homomorphisms A -> B. Each
/// entry lists the images of `s` in order. S = {} yields {()} iff A -> B.
std::vector<std::vector<Element>> hom_set(const Structure& a, const Structure& b, std::span<const Element> s);

bool hom_equivalent(const Structure& a, const Structure& b);

/// An induced substructure that is a core and homomorphically equivalent to
/// `x`, found by repeatedly mapping `x` into itself minus one element and
/// shrinking to the image.
Structure core(const Structure& x);

/// True when no homomorphism from `x` into `x` minus one element exists.
bool is_core(const Structure& x);

}  // namespace epq
