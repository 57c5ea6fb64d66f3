#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epq/signature.hpp"

namespace epq {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

/// Total order on element names: integers (by value) before other names,
/// other names lexicographically.
bool natural_less(std::string_view a, std::string_view b);

/// A finite relational structure. The universe is kept in natural order of
/// element names; each relation is a sorted, duplicate-free tuple list over
/// element indices. Immutable once built.
class Structure {
 public:
  Structure() = default;

  const Signature& signature() const noexcept { return signature_; }
  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }

  const std::vector<std::string>& elements() const noexcept { return names_; }
  const std::string& name_of(Element e) const { return names_.at(e); }
  std::optional<Element> find(std::string_view name) const;
  Element index_of(std::string_view name) const;

  /// Tuples of `relation`; empty for symbols of the signature without tuples.
  const std::vector<Tuple>& tuples(std::string_view relation) const;
  bool contains(std::string_view relation, std::span<const Element> tuple) const;
  std::size_t tuple_count() const;

  const std::map<std::string, std::vector<Tuple>, std::less<>>& relations() const noexcept {
    return relations_;
  }

  friend bool operator==(const Structure&, const Structure&) = default;

 private:
  friend class StructureBuilder;

  Signature signature_;
  std::vector<std::string> names_;
  std::map<std::string, Element, std::less<>> index_;
  std::map<std::string, std::vector<Tuple>, std::less<>> relations_;
};

/// Accumulates elements and tuples by name or builder-local id, then sorts
/// the universe and deduplicates tuples in `build()`.
class StructureBuilder {
 public:
  explicit StructureBuilder(Signature signature);

  /// Idempotent; returns the builder-local id of `name`.
  Element add_element(const std::string& name);
  bool has_element(std::string_view name) const;
  std::size_t element_count() const noexcept { return names_.size(); }

  /// Throws SignatureMismatch for unknown relations or wrong arity and
  /// PreconditionViolation for names not added beforehand.
  void add_tuple(std::string_view relation, const std::vector<std::string>& names);
  void add_tuple_ids(std::string_view relation, Tuple ids);

  Structure build() &&;

 private:
  std::vector<Tuple>& bucket(std::string_view relation, std::size_t arity);

  Signature signature_;
  std::vector<std::string> names_;
  std::map<std::string, Element, std::less<>> index_;
  std::map<std::string, std::vector<Tuple>, std::less<>> relations_;
};

struct NamedStructure {
  std::string name;
  Structure structure;
};

/// Parses `structure`/`domain`/`rel`/`end` blocks. `sig` lines are also
/// accepted and merged into `signature`. Relation symbols must be known.
std::vector<NamedStructure> parse_structure_file(std::string_view text, const Signature& signature,
                                                 const std::string& source = "<structure>");

/// First structure of `text`; throws ParseError if there is none.
Structure parse_structure(std::string_view text, const Signature& signature,
                          const std::string& source = "<structure>");

/// Canonical text form. Element names that are not identifiers or integers
/// are relabelled 1..n in universe order. Relations without tuples are
/// omitted unless `with_signature` emits the `sig` header.
std::string serialize_structure(const Structure& s, std::string_view name, bool with_signature = false);

/// Structure with every relation symbol of `extended` (which must include the
/// current signature) and the same tuples.
Structure with_signature(const Structure& s, const Signature& extended);

Structure induced_substructure(const Structure& s, std::span<const Element> keep);

/// Categorical product; element names are "(a|b)".
Structure product(const Structure& a, const Structure& b);

/// `s` multiplied with itself `exponent` times; exponent 0 gives I_tau.
Structure power(const Structure& s, std::size_t exponent);

/// B + kI: `b` together with `copies` disjoint copies of `unit`. Copy j of
/// element e is named "e#j".
Structure disjoint_union(const Structure& b, std::size_t copies, const Structure& unit);

/// Plain disjoint union of several structures over one signature. Elements
/// of part i are named "e#i" (i starting at 1).
Structure disjoint_union(std::span<const Structure> parts);

/// I_tau: one element `a`, every relation the all-`a` tuple.
Structure unit_structure(const Signature& signature);

/// Universe {0..n-1}, every relation the full Cartesian power.
Structure full_structure(const Signature& signature, std::size_t n);

}  // namespace epq
