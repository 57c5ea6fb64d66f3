#include "epq/structure.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "epq/errors.hpp"

namespace epq {

namespace {

bool is_integer_token(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

std::string_view strip_zeros(std::string_view s) {
  while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
  return s;
}

bool is_element_token(std::string_view s) { return is_identifier(s) || is_integer_token(s); }

}  // namespace

bool natural_less(std::string_view a, std::string_view b) {
  const bool ia = is_integer_token(a);
  const bool ib = is_integer_token(b);
  if (ia && ib) {
    auto sa = strip_zeros(a);
    auto sb = strip_zeros(b);
    if (sa.size() != sb.size()) return sa.size() < sb.size();
    if (sa != sb) return sa < sb;
    return a < b;
  }
  if (ia != ib) return ia;
  return a < b;
}

// --- Structure ---------------------------------------------------------------

std::optional<Element> Structure::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Element Structure::index_of(std::string_view name) const {
  auto found = find(name);
  if (!found) throw PreconditionViolation("element '" + std::string(name) + "' is not in the universe");
  return *found;
}

const std::vector<Tuple>& Structure::tuples(std::string_view relation) const {
  static const std::vector<Tuple> kEmpty;
  auto it = relations_.find(relation);
  return it == relations_.end() ? kEmpty : it->second;
}

bool Structure::contains(std::string_view relation, std::span<const Element> tuple) const {
  const auto& ts = tuples(relation);
  auto it = std::lower_bound(ts.begin(), ts.end(), tuple, [](const Tuple& lhs, std::span<const Element> rhs) {
    return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
  });
  return it != ts.end() && std::equal(it->begin(), it->end(), tuple.begin(), tuple.end());
}

std::size_t Structure::tuple_count() const {
  std::size_t total = 0;
  for (const auto& [name, ts] : relations_) total += ts.size();
  return total;
}

// --- StructureBuilder ----------------------------------------------------------

StructureBuilder::StructureBuilder(Signature signature) : signature_(std::move(signature)) {}

Element StructureBuilder::add_element(const std::string& name) {
  auto [it, inserted] = index_.emplace(name, static_cast<Element>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

bool StructureBuilder::has_element(std::string_view name) const { return index_.find(name) != index_.end(); }

std::vector<Tuple>& StructureBuilder::bucket(std::string_view relation, std::size_t arity) {
  auto expected = signature_.arity(relation);
  if (!expected) throw SignatureMismatch("unknown relation '" + std::string(relation) + "'");
  if (static_cast<std::size_t>(*expected) != arity) {
    throw SignatureMismatch("relation " + std::string(relation) + " has arity " + std::to_string(*expected) +
                            ", got a tuple of length " + std::to_string(arity));
  }
  auto it = relations_.find(relation);
  if (it == relations_.end()) it = relations_.emplace(std::string(relation), std::vector<Tuple>{}).first;
  return it->second;
}

void StructureBuilder::add_tuple(std::string_view relation, const std::vector<std::string>& names) {
  Tuple ids;
  ids.reserve(names.size());
  for (const auto& n : names) {
    auto it = index_.find(n);
    if (it == index_.end()) throw PreconditionViolation("tuple entry '" + n + "' is outside the domain");
    ids.push_back(it->second);
  }
  bucket(relation, ids.size()).push_back(std::move(ids));
}

void StructureBuilder::add_tuple_ids(std::string_view relation, Tuple ids) {
  for (Element e : ids) {
    if (e >= names_.size()) throw PreconditionViolation("tuple entry id out of range");
  }
  bucket(relation, ids.size()).push_back(std::move(ids));
}

Structure StructureBuilder::build() && {
  std::vector<Element> order(names_.size());
  std::iota(order.begin(), order.end(), Element{0});
  std::sort(order.begin(), order.end(),
            [this](Element a, Element b) { return natural_less(names_[a], names_[b]); });
  std::vector<Element> remap(names_.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) remap[order[pos]] = static_cast<Element>(pos);

  Structure s;
  s.signature_ = std::move(signature_);
  s.names_.reserve(names_.size());
  for (Element old : order) s.names_.push_back(names_[old]);
  for (std::size_t i = 0; i < s.names_.size(); ++i) s.index_.emplace(s.names_[i], static_cast<Element>(i));

  for (const auto& [name, ar] : s.signature_.relations()) s.relations_[name];
  for (auto& [name, ts] : relations_) {
    auto& out = s.relations_[name];
    out.reserve(ts.size());
    for (auto& t : ts) {
      for (auto& e : t) e = remap[e];
      out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return s;
}

// --- parsing -------------------------------------------------------------------

namespace {

class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no, const std::string& source)
      : line_(line), line_no_(line_no), source_(source) {}

  void skip_ws() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_])) != 0) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= line_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < line_.size() ? line_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  std::string word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < line_.size()) {
      char c = line_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) == 0 && c != '_') break;
      ++pos_;
    }
    if (start == pos_) fail("expected a name");
    return std::string(line_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(source_, line_no_, pos_ + 1, message);
  }
  std::size_t column() const { return pos_ + 1; }

 private:
  std::string_view line_;
  std::size_t line_no_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<NamedStructure> parse_structure_file(std::string_view text, const Signature& signature,
                                                 const std::string& source) {
  Signature sig = signature;
  std::vector<NamedStructure> out;
  std::optional<StructureBuilder> current;
  std::string current_name;
  std::size_t line_no = 0;
  std::size_t open_line = 0;

  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    LineCursor cur(line, line_no, source);
    if (cur.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    std::string keyword = cur.word();
    if (keyword == "sig") {
      if (current) cur.fail("'sig' inside a structure block");
      while (!cur.at_end()) {
        std::string rel = cur.word();
        cur.expect('/');
        std::string ar = cur.word();
        if (!is_integer_token(ar)) cur.fail("arity must be an integer");
        try {
          sig.add(rel, std::stoi(ar));
        } catch (const SignatureMismatch& e) {
          cur.fail(e.what());
        }
      }
    } else if (keyword == "structure") {
      if (current) cur.fail("nested 'structure' (missing 'end')");
      current_name = cur.word();
      if (!cur.at_end()) cur.fail("unexpected text after structure name");
      current.emplace(sig);
      open_line = line_no;
    } else if (keyword == "domain") {
      if (!current) cur.fail("'domain' outside a structure block");
      while (!cur.at_end()) {
        std::string e = cur.word();
        if (!is_element_token(e)) cur.fail("invalid element name '" + e + "'");
        current->add_element(e);
      }
    } else if (keyword == "rel") {
      if (!current) cur.fail("'rel' outside a structure block");
      std::string rel = cur.word();
      auto ar = sig.arity(rel);
      if (!ar) cur.fail("unknown relation '" + rel + "'");
      cur.expect(':');
      while (!cur.at_end()) {
        cur.expect('(');
        std::vector<std::string> entries;
        if (cur.peek() != ')') {
          do {
            std::size_t col = cur.column();
            std::string e = cur.word();
            if (!current->has_element(e)) {
              throw ParseError(source, line_no, col, "tuple entry '" + e + "' is outside the domain");
            }
            entries.push_back(std::move(e));
          } while (cur.accept(','));
        }
        cur.expect(')');
        if (static_cast<int>(entries.size()) != *ar) {
          cur.fail("arity mismatch: " + rel + " has arity " + std::to_string(*ar) + ", tuple has " +
                   std::to_string(entries.size()) + " entries");
        }
        current->add_tuple(rel, entries);
      }
    } else if (keyword == "end") {
      if (!current) cur.fail("'end' without 'structure'");
      if (current->element_count() == 0) cur.fail("structure '" + current_name + "' has an empty domain");
      out.push_back({current_name, std::move(*current).build()});
      current.reset();
    } else {
      cur.fail("unknown keyword '" + keyword + "'");
    }
    if (end == text.size()) break;
  }
  if (current) throw ParseError(source, open_line, 1, "structure '" + current_name + "' is missing 'end'");
  return out;
}

Structure parse_structure(std::string_view text, const Signature& signature, const std::string& source) {
  auto all = parse_structure_file(text, signature, source);
  if (all.empty()) throw ParseError(source, 1, 1, "no structure found");
  return std::move(all.front().structure);
}

std::string serialize_structure(const Structure& s, std::string_view name, bool with_signature) {
  const auto& names = s.elements();
  const bool relabel = !std::all_of(names.begin(), names.end(), [](const std::string& n) { return is_element_token(n); });
  auto label = [&](Element e) { return relabel ? std::to_string(e + 1) : names[e]; };

  std::ostringstream out;
  if (with_signature && !s.signature().empty()) {
    out << "sig";
    for (const auto& [rel, ar] : s.signature().relations()) out << ' ' << rel << '/' << ar;
    out << '\n';
  }
  out << "structure " << name << '\n';
  out << "domain";
  for (Element e = 0; e < s.size(); ++e) out << ' ' << label(e);
  out << '\n';
  for (const auto& [rel, ts] : s.relations()) {
    if (ts.empty()) continue;
    out << "rel " << rel << ':';
    for (const auto& t : ts) {
      out << " (";
      for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << label(t[i]);
      out << ')';
    }
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

// --- algebra -------------------------------------------------------------------

Structure with_signature(const Structure& s, const Signature& extended) {
  require_includes(extended, s.signature(), "with_signature");
  StructureBuilder b(extended);
  for (const auto& n : s.elements()) b.add_element(n);
  for (const auto& [rel, ts] : s.relations()) {
    for (const auto& t : ts) b.add_tuple_ids(rel, t);
  }
  return std::move(b).build();
}

Structure induced_substructure(const Structure& s, std::span<const Element> keep) {
  std::vector<char> kept(s.size(), 0);
  for (Element e : keep) kept.at(e) = 1;
  StructureBuilder b(s.signature());
  std::vector<Element> local(s.size(), 0);
  for (Element e = 0; e < s.size(); ++e) {
    if (kept[e]) local[e] = b.add_element(s.name_of(e));
  }
  for (const auto& [rel, ts] : s.relations()) {
    for (const auto& t : ts) {
      if (!std::all_of(t.begin(), t.end(), [&](Element e) { return kept[e] != 0; })) continue;
      Tuple mapped;
      mapped.reserve(t.size());
      for (Element e : t) mapped.push_back(local[e]);
      b.add_tuple_ids(rel, std::move(mapped));
    }
  }
  return std::move(b).build();
}

Structure product(const Structure& a, const Structure& b) {
  if (!(a.signature() == b.signature())) throw SignatureMismatch("product: signatures differ");
  StructureBuilder out(a.signature());
  const std::size_t nb = b.size();
  for (Element x = 0; x < a.size(); ++x) {
    for (Element y = 0; y < nb; ++y) out.add_element("(" + a.name_of(x) + "|" + b.name_of(y) + ")");
  }
  // builder ids are x * nb + y by insertion order
  for (const auto& [rel, ta] : a.relations()) {
    const auto& tb = b.tuples(rel);
    for (const auto& u : ta) {
      for (const auto& v : tb) {
        Tuple t(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) t[i] = static_cast<Element>(u[i] * nb + v[i]);
        out.add_tuple_ids(rel, std::move(t));
      }
    }
  }
  return std::move(out).build();
}

Structure power(const Structure& s, std::size_t exponent) {
  Structure result = unit_structure(s.signature());
  if (exponent == 0) return result;
  result = s;
  for (std::size_t i = 1; i < exponent; ++i) result = product(result, s);
  return result;
}

Structure disjoint_union(const Structure& b, std::size_t copies, const Structure& unit) {
  if (!(b.signature() == unit.signature())) throw SignatureMismatch("disjoint_union: signatures differ");
  StructureBuilder out(b.signature());
  for (const auto& n : b.elements()) out.add_element(n);
  for (const auto& [rel, ts] : b.relations()) {
    for (const auto& t : ts) out.add_tuple_ids(rel, t);
  }
  std::size_t suffix = 0;
  for (std::size_t copy = 0; copy < copies; ++copy) {
    // pick the next suffix under which no element name collides
    bool clash = true;
    while (clash) {
      ++suffix;
      clash = false;
      for (const auto& n : unit.elements()) {
        if (out.has_element(n + "#" + std::to_string(suffix))) {
          clash = true;
          break;
        }
      }
    }
    std::vector<Element> ids;
    ids.reserve(unit.size());
    for (const auto& n : unit.elements()) ids.push_back(out.add_element(n + "#" + std::to_string(suffix)));
    for (const auto& [rel, ts] : unit.relations()) {
      for (const auto& t : ts) {
        Tuple mapped;
        mapped.reserve(t.size());
        for (Element e : t) mapped.push_back(ids[e]);
        out.add_tuple_ids(rel, std::move(mapped));
      }
    }
  }
  return std::move(out).build();
}

Structure disjoint_union(std::span<const Structure> parts) {
  if (parts.empty()) throw PreconditionViolation("disjoint_union: no parts");
  StructureBuilder out(parts.front().signature());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    if (!(p.signature() == parts.front().signature())) throw SignatureMismatch("disjoint_union: signatures differ");
    std::vector<Element> ids;
    ids.reserve(p.size());
    for (const auto& n : p.elements()) ids.push_back(out.add_element(n + "#" + std::to_string(i + 1)));
    for (const auto& [rel, ts] : p.relations()) {
      for (const auto& t : ts) {
        Tuple mapped;
        mapped.reserve(t.size());
        for (Element e : t) mapped.push_back(ids[e]);
        out.add_tuple_ids(rel, std::move(mapped));
      }
    }
  }
  return std::move(out).build();
}

Structure unit_structure(const Signature& signature) {
  StructureBuilder b(signature);
  Element a = b.add_element("a");
  for (const auto& [rel, ar] : signature.relations()) b.add_tuple_ids(rel, Tuple(static_cast<std::size_t>(ar), a));
  return std::move(b).build();
}

Structure full_structure(const Signature& signature, std::size_t n) {
  StructureBuilder b(signature);
  for (std::size_t i = 0; i < n; ++i) b.add_element(std::to_string(i));
  for (const auto& [rel, ar] : signature.relations()) {
    Tuple t(static_cast<std::size_t>(ar), 0);
    if (n == 0) continue;
    while (true) {
      b.add_tuple_ids(rel, t);
      std::size_t pos = 0;
      while (pos < t.size() && ++t[pos] == n) t[pos++] = 0;
      if (pos == t.size()) break;
    }
  }
  return std::move(b).build();
}

}  // namespace epq
