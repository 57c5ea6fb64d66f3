#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "epq/signature.hpp"

namespace epq {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Truth {};
struct Atom {
  std::string relation;
  std::vector<std::string> args;
};
struct Conj {
  NodePtr lhs;
  NodePtr rhs;
};
struct Disj {
  NodePtr lhs;
  NodePtr rhs;
};
struct Exists {
  std::string var;
  NodePtr body;
};

struct Node {
  std::variant<Truth, Atom, Conj, Disj, Exists> value;
};

NodePtr make_truth();
NodePtr make_atom(std::string relation, std::vector<std::string> args);
NodePtr make_and(NodePtr lhs, NodePtr rhs);
NodePtr make_or(NodePtr lhs, NodePtr rhs);
NodePtr make_exists(std::string var, NodePtr body);

std::set<std::string> free_variables(const NodePtr& node);
bool contains_disjunction(const NodePtr& node);

/// An existential positive formula with its declared liberal variables.
///
/// Construction checks that atoms match the signature, that every free
/// variable is liberal, and that no liberal variable is also quantified.
class EpFormula {
 public:
  EpFormula(std::string name, Signature signature, std::vector<std::string> lib, NodePtr body);

  const std::string& name() const noexcept { return name_; }
  const Signature& signature() const noexcept { return signature_; }
  const std::vector<std::string>& lib() const noexcept { return lib_; }
  const NodePtr& body() const noexcept { return body_; }

 private:
  std::string name_;
  Signature signature_;
  std::vector<std::string> lib_;
  NodePtr body_;
};

/// Renames every quantified variable to a fresh `_q<n>` that differs from
/// the liberal variables and from every other binder.
EpFormula rename_bound_apart(const EpFormula& phi);

struct FormulaFile {
  Signature signature;
  std::vector<EpFormula> queries;
};

/// Parses `sig` and `query` statements:
///
///   sig E/2 F/1
///   query phi lib(x,y): E(x,y) & exists z. (E(y,z) | F(z))
///
/// `&` binds tighter than `|`; `exists` extends to the end of the enclosing
/// parenthesis; `true` is the empty conjunction; `#` starts a comment.
/// Quantified variables are renamed apart (see rename_bound_apart).
FormulaFile parse_formula_file(std::string_view text, const std::string& source = "<formula>");

/// The first query of `text`.
EpFormula parse_formula(std::string_view text, const std::string& source = "<formula>");

/// Parses `query` statements against a known signature (further `sig` lines
/// are merged in).
FormulaFile parse_formula_file(std::string_view text, const Signature& signature,
                               const std::string& source = "<formula>");

std::string format_body(const NodePtr& node);
std::string format_query(const EpFormula& phi);
std::string format_signature(const Signature& signature);

}  // namespace epq
