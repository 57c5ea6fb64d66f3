#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace epq {

/// Relation symbols with their arities. Purely relational: no constants,
/// no function symbols, no built-in equality.
class Signature {
 public:
  Signature() = default;

  /// Adds `name/arity`. Re-adding with the same arity is a no-op; a
  /// different arity throws SignatureMismatch.
  void add(const std::string& name, int arity);

  std::optional<int> arity(std::string_view name) const;
  bool contains(std::string_view name) const { return arity(name).has_value(); }
  bool empty() const noexcept { return relations_.empty(); }
  std::size_t size() const noexcept { return relations_.size(); }

  const std::map<std::string, int, std::less<>>& relations() const noexcept { return relations_; }

  /// True when every symbol of `other` is present here with the same arity.
  bool includes(const Signature& other) const;

  static Signature merge(const Signature& a, const Signature& b);

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::map<std::string, int, std::less<>> relations_;
};

/// Throws SignatureMismatch unless `outer` includes `inner`.
void require_includes(const Signature& outer, const Signature& inner, std::string_view what);

bool is_identifier(std::string_view text);

}  // namespace epq
