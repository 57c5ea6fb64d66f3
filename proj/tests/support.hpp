#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "epq/bigint.hpp"
#include "epq/formula.hpp"
#include "epq/homomorphism.hpp"
#include "epq/pp_formula.hpp"
#include "epq/structure.hpp"

namespace epq::testing {

inline std::string read_data(const std::string& name) {
  std::ifstream in(std::string(EPQ_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Signature sig_of(const std::string& text) {
  Signature sig;
  std::istringstream in(text);
  std::string item;
  while (in >> item) {
    auto slash = item.find('/');
    sig.add(item.substr(0, slash), std::stoi(item.substr(slash + 1)));
  }
  return sig;
}

/// `q` is a body; `lib` a comma list.
inline EpFormula ep(const std::string& sig, const std::string& lib, const std::string& body) {
  return parse_formula("sig " + sig + "\nquery t lib(" + lib + "): " + body);
}

inline PpFormula pp(const std::string& sig, const std::string& lib, const std::string& body) {
  return to_structure_view(ep(sig, lib, body));
}

inline Structure st(const std::string& sig, const std::string& domain, const std::string& rels) {
  return parse_structure("structure s\ndomain " + domain + "\n" + rels + "\nend\n", sig_of(sig));
}

// Textbook evaluation: every assignment of the liberal variables, every
// witness for every quantifier, no pruning.
inline bool naive_holds(const NodePtr& node, std::map<std::string, Element>& env, const Structure& b) {
  if (std::holds_alternative<Truth>(node->value)) return true;
  if (const auto* a = std::get_if<Atom>(&node->value)) {
    Tuple t;
    for (const auto& v : a->args) t.push_back(env.at(v));
    return b.contains(a->relation, t);
  }
  if (const auto* c = std::get_if<Conj>(&node->value)) return naive_holds(c->lhs, env, b) && naive_holds(c->rhs, env, b);
  if (const auto* d = std::get_if<Disj>(&node->value)) return naive_holds(d->lhs, env, b) || naive_holds(d->rhs, env, b);
  const auto& e = std::get<Exists>(node->value);
  auto saved = env.find(e.var) == env.end() ? std::optional<Element>() : std::optional<Element>(env[e.var]);
  bool found = false;
  for (Element x = 0; x < b.size() && !found; ++x) {
    env[e.var] = x;
    found = naive_holds(e.body, env, b);
  }
  if (saved) {
    env[e.var] = *saved;
  } else {
    env.erase(e.var);
  }
  return found;
}

inline std::set<std::vector<Element>> naive_answers(const EpFormula& phi, const Structure& b) {
  std::set<std::vector<Element>> out;
  const std::size_t n = phi.lib().size();
  std::vector<Element> values(n, 0);
  if (b.empty() && n > 0) return out;
  while (true) {
    std::map<std::string, Element> env;
    for (std::size_t i = 0; i < n; ++i) env[phi.lib()[i]] = values[i];
    if (naive_holds(phi.body(), env, b)) out.insert(values);
    std::size_t i = n;
    while (i > 0 && values[i - 1] + 1 == b.size()) values[--i] = 0;
    if (i == 0) break;
    ++values[i - 1];
  }
  return out;
}

inline BigInt naive_count(const EpFormula& phi, const Structure& b) { return BigInt(naive_answers(phi, b).size()); }

inline BigInt naive_count(const PpFormula& p, const Structure& b) { return naive_count(to_ep_formula(p), b); }

/// Every map A -> B that preserves all tuples, by exhaustive enumeration.
inline std::vector<Mapping> all_homomorphisms(const Structure& a, const Structure& b) {
  std::vector<Mapping> out;
  const std::size_t n = a.size();
  if (n == 0) return {Mapping{}};
  if (b.empty()) return out;
  Mapping h(n, 0);
  while (true) {
    bool ok = true;
    for (const auto& [rel, tuples] : a.relations()) {
      for (const auto& t : tuples) {
        Tuple image;
        for (Element e : t) image.push_back(h[e]);
        if (!b.contains(rel, image)) ok = false;
      }
    }
    if (ok) out.push_back(h);
    std::size_t i = n;
    while (i > 0 && h[i - 1] + 1 == b.size()) h[--i] = 0;
    if (i == 0) break;
    ++h[i - 1];
  }
  return out;
}

}  // namespace epq::testing
