#include "epq/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "epq/errors.hpp"

namespace epq {

NodePtr make_truth() { return std::make_shared<const Node>(Node{Truth{}}); }
NodePtr make_atom(std::string relation, std::vector<std::string> args) {
  return std::make_shared<const Node>(Node{Atom{std::move(relation), std::move(args)}});
}
NodePtr make_and(NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const Node>(Node{Conj{std::move(lhs), std::move(rhs)}});
}
NodePtr make_or(NodePtr lhs, NodePtr rhs) {
  return std::make_shared<const Node>(Node{Disj{std::move(lhs), std::move(rhs)}});
}
NodePtr make_exists(std::string var, NodePtr body) {
  return std::make_shared<const Node>(Node{Exists{std::move(var), std::move(body)}});
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void collect_free(const NodePtr& node, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(Overloaded{
                 [](const Truth&) {},
                 [&](const Atom& a) {
                   for (const auto& v : a.args) {
                     if (!bound.count(v)) out.insert(v);
                   }
                 },
                 [&](const Conj& c) {
                   collect_free(c.lhs, bound, out);
                   collect_free(c.rhs, bound, out);
                 },
                 [&](const Disj& d) {
                   collect_free(d.lhs, bound, out);
                   collect_free(d.rhs, bound, out);
                 },
                 [&](const Exists& e) {
                   bool fresh = bound.insert(e.var).second;
                   collect_free(e.body, bound, out);
                   if (fresh) bound.erase(e.var);
                 },
             },
             node->value);
}

void collect_binders(const NodePtr& node, std::vector<std::string>& out) {
  std::visit(Overloaded{
                 [](const Truth&) {},
                 [](const Atom&) {},
                 [&](const Conj& c) {
                   collect_binders(c.lhs, out);
                   collect_binders(c.rhs, out);
                 },
                 [&](const Disj& d) {
                   collect_binders(d.lhs, out);
                   collect_binders(d.rhs, out);
                 },
                 [&](const Exists& e) {
                   out.push_back(e.var);
                   collect_binders(e.body, out);
                 },
             },
             node->value);
}

void check_atoms(const NodePtr& node, const Signature& sig) {
  std::visit(Overloaded{
                 [](const Truth&) {},
                 [&](const Atom& a) {
                   auto ar = sig.arity(a.relation);
                   if (!ar) throw SignatureMismatch("unknown relation '" + a.relation + "'");
                   if (static_cast<std::size_t>(*ar) != a.args.size()) {
                     throw SignatureMismatch("arity mismatch: " + a.relation + " has arity " + std::to_string(*ar) +
                                             ", atom has " + std::to_string(a.args.size()) + " arguments");
                   }
                 },
                 [&](const Conj& c) {
                   check_atoms(c.lhs, sig);
                   check_atoms(c.rhs, sig);
                 },
                 [&](const Disj& d) {
                   check_atoms(d.lhs, sig);
                   check_atoms(d.rhs, sig);
                 },
                 [&](const Exists& e) { check_atoms(e.body, sig); },
             },
             node->value);
}

class FreshNames {
 public:
  explicit FreshNames(const std::vector<std::string>& taken) : taken_(taken.begin(), taken.end()) {}
  std::string next() {
    while (true) {
      std::string candidate = "_q" + std::to_string(counter_++);
      if (!taken_.count(candidate)) return candidate;
    }
  }

 private:
  std::set<std::string> taken_;
  std::size_t counter_ = 0;
};

NodePtr rename_node(const NodePtr& node, std::map<std::string, std::string>& scope, FreshNames& fresh) {
  return std::visit(Overloaded{
                        [&](const Truth&) { return node; },
                        [&](const Atom& a) {
                          std::vector<std::string> args;
                          for (const auto& v : a.args) {
                            auto it = scope.find(v);
                            args.push_back(it == scope.end() ? v : it->second);
                          }
                          return make_atom(a.relation, std::move(args));
                        },
                        [&](const Conj& c) {
                          auto l = rename_node(c.lhs, scope, fresh);
                          return make_and(std::move(l), rename_node(c.rhs, scope, fresh));
                        },
                        [&](const Disj& d) {
                          auto l = rename_node(d.lhs, scope, fresh);
                          return make_or(std::move(l), rename_node(d.rhs, scope, fresh));
                        },
                        [&](const Exists& e) {
                          std::string name = fresh.next();
                          auto saved = scope.find(e.var);
                          std::optional<std::string> previous;
                          if (saved != scope.end()) previous = saved->second;
                          scope[e.var] = name;
                          auto body = rename_node(e.body, scope, fresh);
                          if (previous) {
                            scope[e.var] = *previous;
                          } else {
                            scope.erase(e.var);
                          }
                          return make_exists(name, std::move(body));
                        },
                    },
                    node->value);
}

}  // namespace

std::set<std::string> free_variables(const NodePtr& node) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free(node, bound, out);
  return out;
}

bool contains_disjunction(const NodePtr& node) {
  return std::visit(Overloaded{
                        [](const Truth&) { return false; },
                        [](const Atom&) { return false; },
                        [](const Conj& c) { return contains_disjunction(c.lhs) || contains_disjunction(c.rhs); },
                        [](const Disj&) { return true; },
                        [](const Exists& e) { return contains_disjunction(e.body); },
                    },
                    node->value);
}

EpFormula::EpFormula(std::string name, Signature signature, std::vector<std::string> lib, NodePtr body)
    : name_(std::move(name)), signature_(std::move(signature)), lib_(std::move(lib)), body_(std::move(body)) {
  if (!body_) throw PreconditionViolation("formula body is null");
  std::set<std::string> libset(lib_.begin(), lib_.end());
  if (libset.size() != lib_.size()) throw PreconditionViolation("duplicate liberal variable in " + name_);
  check_atoms(body_, signature_);
  for (const auto& v : free_variables(body_)) {
    if (!libset.count(v)) throw PreconditionViolation("free variable '" + v + "' is not in lib of " + name_);
  }
  std::vector<std::string> binders;
  collect_binders(body_, binders);
  for (const auto& v : binders) {
    if (libset.count(v)) throw PreconditionViolation("variable '" + v + "' is both liberal and quantified");
  }
}

EpFormula rename_bound_apart(const EpFormula& phi) {
  FreshNames fresh(phi.lib());
  std::map<std::string, std::string> scope;
  return EpFormula(phi.name(), phi.signature(), phi.lib(), rename_node(phi.body(), scope, fresh));
}

// --- parser ----------------------------------------------------------------------

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view text, const std::string& source) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) != 0 || text[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(text.substr(start, i - start)), line, col});
    } else if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])) != 0) ++i;
      out.push_back({Tok::Int, std::string(text.substr(start, i - start)), line, col});
    } else if (std::string_view("()&|,.:/").find(c) != std::string_view::npos) {
      ++i;
      out.push_back({Tok::Punct, std::string(1, c), line, col});
    } else {
      throw ParseError(source, line, col, std::string("unexpected character '") + c + "'");
    }
    col += i - start;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_reserved(std::string_view word) {
  return word == "exists" || word == "true" || word == "query" || word == "sig";
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string source, Signature signature)
      : tokens_(std::move(tokens)), source_(std::move(source)) {
    file_.signature = std::move(signature);
  }

  FormulaFile run() {
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind == Tok::Ident && t.text == "sig") {
        parse_sig();
      } else if (t.kind == Tok::Ident && t.text == "query") {
        parse_query();
      } else {
        fail(t, "expected 'sig' or 'query'");
      }
    }
    return std::move(file_);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw ParseError(source_, t.line, t.column, message);
  }
  bool accept(std::string_view punct) {
    if (peek().kind == Tok::Punct && peek().text == punct) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail(peek(), "expected '" + std::string(punct) + "'");
  }
  const Token& expect_ident(std::string_view what) {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail(t, "expected " + std::string(what));
    if (is_reserved(t.text)) fail(t, "'" + t.text + "' is a reserved word");
    return take();
  }

  void parse_sig() {
    const Token& kw = take();
    bool any = false;
    while (peek().kind == Tok::Ident && peek().line == kw.line && !is_reserved(peek().text)) {
      const Token& name = take();
      expect("/");
      const Token& ar = peek();
      if (ar.kind != Tok::Int) fail(ar, "expected an arity");
      take();
      try {
        file_.signature.add(name.text, std::stoi(ar.text));
      } catch (const SignatureMismatch& e) {
        fail(name, e.what());
      }
      any = true;
    }
    if (!any) fail(kw, "'sig' needs at least one Name/arity");
  }

  void parse_query() {
    take();
    std::string name = expect_ident("a query name").text;
    const Token& libkw = peek();
    if (libkw.kind != Tok::Ident || libkw.text != "lib") fail(libkw, "expected 'lib('");
    take();
    expect("(");
    lib_.clear();
    if (!accept(")")) {
      do {
        const Token& v = expect_ident("a variable");
        if (std::find(lib_.begin(), lib_.end(), v.text) != lib_.end()) fail(v, "duplicate liberal variable");
        lib_.push_back(v.text);
      } while (accept(","));
      expect(")");
    }
    expect(":");
    fresh_.emplace(lib_);
    scope_.clear();
    NodePtr body = parse_disjunction();
    if (peek().kind != Tok::End && !(peek().kind == Tok::Ident && (peek().text == "query" || peek().text == "sig"))) {
      fail(peek(), "unexpected '" + peek().text + "'");
    }
    file_.queries.emplace_back(std::move(name), file_.signature, lib_, std::move(body));
  }

  NodePtr parse_disjunction() {
    NodePtr lhs = parse_conjunction();
    while (accept("|")) lhs = make_or(lhs, parse_conjunction());
    return lhs;
  }

  NodePtr parse_conjunction() {
    NodePtr lhs = parse_unary();
    while (accept("&")) lhs = make_and(lhs, parse_unary());
    return lhs;
  }

  NodePtr parse_unary() {
    const Token& t = peek();
    if (accept("(")) {
      NodePtr inner = parse_disjunction();
      expect(")");
      return inner;
    }
    if (t.kind != Tok::Ident) fail(t, "expected an atom, 'true', 'exists' or '('");
    if (t.text == "true") {
      take();
      return make_truth();
    }
    if (t.text == "exists") {
      take();
      std::vector<std::string> vars;
      do {
        vars.push_back(expect_ident("a variable").text);
      } while (accept(","));
      expect(".");
      std::vector<std::pair<std::string, std::optional<std::string>>> saved;
      std::vector<std::string> renamed;
      for (const auto& v : vars) {
        auto it = scope_.find(v);
        saved.emplace_back(v, it == scope_.end() ? std::nullopt : std::optional<std::string>(it->second));
        renamed.push_back(fresh_->next());
        scope_[v] = renamed.back();
      }
      NodePtr body = parse_disjunction();
      for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
        if (it->second) {
          scope_[it->first] = *it->second;
        } else {
          scope_.erase(it->first);
        }
      }
      for (auto it = renamed.rbegin(); it != renamed.rend(); ++it) body = make_exists(*it, body);
      return body;
    }
    return parse_atom();
  }

  NodePtr parse_atom() {
    const Token& rel = expect_ident("a relation name");
    auto ar = file_.signature.arity(rel.text);
    if (!ar) fail(rel, "unknown relation '" + rel.text + "'");
    expect("(");
    std::vector<std::string> args;
    if (!accept(")")) {
      do {
        const Token& v = expect_ident("a variable");
        auto it = scope_.find(v.text);
        if (it != scope_.end()) {
          args.push_back(it->second);
        } else {
          if (std::find(lib_.begin(), lib_.end(), v.text) == lib_.end()) {
            fail(v, "free variable '" + v.text + "' is not in the declared lib");
          }
          args.push_back(v.text);
        }
      } while (accept(","));
      expect(")");
    }
    if (static_cast<std::size_t>(*ar) != args.size()) {
      fail(rel, "arity mismatch: " + rel.text + " has arity " + std::to_string(*ar) + ", atom has " +
                    std::to_string(args.size()) + " arguments");
    }
    return make_atom(rel.text, std::move(args));
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string source_;
  FormulaFile file_;
  std::vector<std::string> lib_;
  std::map<std::string, std::string> scope_;
  std::optional<FreshNames> fresh_;
};

}  // namespace

FormulaFile parse_formula_file(std::string_view text, const Signature& signature, const std::string& source) {
  return Parser(tokenize(text, source), source, signature).run();
}

FormulaFile parse_formula_file(std::string_view text, const std::string& source) {
  return parse_formula_file(text, Signature{}, source);
}

EpFormula parse_formula(std::string_view text, const std::string& source) {
  auto file = parse_formula_file(text, source);
  if (file.queries.empty()) throw ParseError(source, 1, 1, "no query found");
  return file.queries.front();
}

// --- formatting --------------------------------------------------------------------

namespace {

enum class Ctx { Top, OrOperand, AndOperand };

void format_node(const NodePtr& node, Ctx ctx, std::ostringstream& out) {
  std::visit(Overloaded{
                 [&](const Truth&) { out << "true"; },
                 [&](const Atom& a) {
                   out << a.relation << '(';
                   for (std::size_t i = 0; i < a.args.size(); ++i) out << (i ? "," : "") << a.args[i];
                   out << ')';
                 },
                 [&](const Conj& c) {
                   format_node(c.lhs, Ctx::AndOperand, out);
                   out << " & ";
                   format_node(c.rhs, Ctx::AndOperand, out);
                 },
                 [&](const Disj& d) {
                   const bool wrap = ctx == Ctx::AndOperand;
                   if (wrap) out << '(';
                   format_node(d.lhs, Ctx::OrOperand, out);
                   out << " | ";
                   format_node(d.rhs, Ctx::OrOperand, out);
                   if (wrap) out << ')';
                 },
                 [&](const Exists& e) {
                   const bool wrap = ctx != Ctx::Top;
                   if (wrap) out << '(';
                   out << "exists " << e.var;
                   const Node* body = e.body.get();
                   while (const auto* inner = std::get_if<Exists>(&body->value)) {
                     out << ',' << inner->var;
                     body = inner->body.get();
                   }
                   out << ". ";
                   NodePtr rest = e.body;
                   while (const auto* inner = std::get_if<Exists>(&rest->value)) rest = inner->body;
                   format_node(rest, Ctx::Top, out);
                   if (wrap) out << ')';
                 },
             },
             node->value);
}

}  // namespace

std::string format_body(const NodePtr& node) {
  std::ostringstream out;
  format_node(node, Ctx::Top, out);
  return out.str();
}

std::string format_query(const EpFormula& phi) {
  std::ostringstream out;
  out << "query " << phi.name() << " lib(";
  for (std::size_t i = 0; i < phi.lib().size(); ++i) out << (i ? "," : "") << phi.lib()[i];
  out << "): " << format_body(phi.body());
  return out.str();
}

std::string format_signature(const Signature& signature) {
  std::ostringstream out;
  out << "sig";
  for (const auto& [rel, ar] : signature.relations()) out << ' ' << rel << '/' << ar;
  return out.str();
}

}  // namespace epq
