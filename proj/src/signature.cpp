#include "epq/signature.hpp"

#include <cctype>

#include "epq/errors.hpp"

namespace epq {

void Signature::add(const std::string& name, int arity) {
  if (!is_identifier(name)) throw SignatureMismatch("invalid relation name '" + name + "'");
  if (arity < 1) throw SignatureMismatch("relation " + name + " must have arity >= 1");
  auto [it, inserted] = relations_.emplace(name, arity);
  if (!inserted && it->second != arity) {
    throw SignatureMismatch("relation " + name + " declared with arities " + std::to_string(it->second) +
                            " and " + std::to_string(arity));
  }
}

std::optional<int> Signature::arity(std::string_view name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) return std::nullopt;
  return it->second;
}

bool Signature::includes(const Signature& other) const {
  for (const auto& [name, ar] : other.relations_) {
    auto mine = arity(name);
    if (!mine || *mine != ar) return false;
  }
  return true;
}

Signature Signature::merge(const Signature& a, const Signature& b) {
  Signature out = a;
  for (const auto& [name, ar] : b.relations_) out.add(name, ar);
  return out;
}

void require_includes(const Signature& outer, const Signature& inner, std::string_view what) {
  if (!outer.includes(inner)) {
    throw SignatureMismatch(std::string(what) + ": signatures are incompatible");
  }
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto head = static_cast<unsigned char>(text.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return true;
}

}  // namespace epq
