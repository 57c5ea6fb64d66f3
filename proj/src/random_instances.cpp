#include "epq/random_instances.hpp"

#include <algorithm>

#include "epq/enumerate.hpp"

namespace epq {

Signature edge_and_colour_signature() {
  Signature sig;
  sig.add("E", 2);
  sig.add("F", 1);
  return sig;
}

namespace {

std::size_t uniform(std::size_t lo, std::size_t hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<std::string> lib_names(std::size_t n) {
  static const char* names[] = {"x", "y", "z", "w", "u", "v", "s", "t"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(i < 8 ? names[i] : "x" + std::to_string(i));
  return out;
}

std::pair<std::string, int> random_relation(const Signature& sig, std::mt19937_64& rng) {
  auto it = sig.relations().begin();
  std::advance(it, static_cast<long>(uniform(0, sig.size() - 1, rng)));
  return *it;
}

// Atoms over `pool`; when `anchor` is set, the first atom mentions it.
NodePtr random_conjunction(const Signature& sig, const std::vector<std::string>& pool, std::size_t atoms,
                           const std::string* anchor, std::mt19937_64& rng) {
  NodePtr body;
  for (std::size_t k = 0; k < atoms; ++k) {
    auto [rel, arity] = random_relation(sig, rng);
    std::vector<std::string> args;
    for (int i = 0; i < arity; ++i) args.push_back(pool[uniform(0, pool.size() - 1, rng)]);
    if (k == 0 && anchor) args[uniform(0, args.size() - 1, rng)] = *anchor;
    NodePtr atom = make_atom(rel, std::move(args));
    body = body ? make_and(body, atom) : atom;
  }
  return body ? body : make_truth();
}

NodePtr quantify(NodePtr body, const std::vector<std::string>& vars) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = make_exists(*it, body);
  return body;
}

}  // namespace

PpFormula random_pp(const Signature& sig, const RandomShape& shape, std::mt19937_64& rng) {
  std::size_t lib_size = shape.max_lib == 0 ? 0 : uniform(1, std::min(shape.max_lib, shape.max_vars), rng);
  std::size_t total = uniform(std::max<std::size_t>(lib_size, 1), shape.max_vars, rng);
  auto lib = lib_names(lib_size);
  std::vector<std::string> quantified;
  for (std::size_t i = lib_size; i < total; ++i) quantified.push_back("q" + std::to_string(i));
  std::vector<std::string> pool = lib;
  pool.insert(pool.end(), quantified.begin(), quantified.end());
  NodePtr body = random_conjunction(sig, pool, uniform(0, shape.max_atoms, rng), nullptr, rng);
  return to_structure_view(EpFormula("pp", sig, lib, quantify(body, quantified)));
}

EpFormula random_disjunctive_ep(const Signature& sig, const RandomShape& shape, std::mt19937_64& rng) {
  std::size_t lib_size = uniform(1, std::min(shape.max_lib, shape.max_vars), rng);
  auto lib = lib_names(lib_size);
  std::bernoulli_distribution sentence(shape.sentence_rate);
  NodePtr body;
  std::size_t disjuncts = uniform(1, shape.max_disjuncts, rng);
  for (std::size_t d = 0; d < disjuncts; ++d) {
    bool is_sentence = sentence(rng);
    std::size_t quantified_count =
        is_sentence ? uniform(1, std::max<std::size_t>(1, shape.max_vars - lib_size), rng)
                    : uniform(0, shape.max_vars - lib_size, rng);
    std::vector<std::string> quantified;
    for (std::size_t i = 0; i < quantified_count; ++i) quantified.push_back("q" + std::to_string(i));
    std::vector<std::string> pool = is_sentence ? quantified : lib;
    if (!is_sentence) pool.insert(pool.end(), quantified.begin(), quantified.end());
    const std::string& anchor = lib[uniform(0, lib.size() - 1, rng)];
    NodePtr part = random_conjunction(sig, pool, uniform(1, shape.max_atoms, rng), is_sentence ? nullptr : &anchor, rng);
    part = quantify(part, quantified);
    body = body ? make_or(body, part) : part;
  }
  return rename_bound_apart(EpFormula("phi", sig, lib, body));
}

namespace {

NodePtr random_tree(const Signature& sig, const std::vector<std::string>& scope, std::size_t depth, std::size_t& fresh,
                    std::mt19937_64& rng) {
  std::size_t choice = depth == 0 ? 0 : uniform(0, 3, rng);
  if (choice == 0 || scope.empty()) {
    if (scope.empty()) return make_truth();
    return random_conjunction(sig, scope, 1, nullptr, rng);
  }
  if (choice == 1) {
    return make_and(random_tree(sig, scope, depth - 1, fresh, rng), random_tree(sig, scope, depth - 1, fresh, rng));
  }
  if (choice == 2) {
    return make_or(random_tree(sig, scope, depth - 1, fresh, rng), random_tree(sig, scope, depth - 1, fresh, rng));
  }
  std::string var = "b" + std::to_string(fresh++);
  auto inner = scope;
  inner.push_back(var);
  return make_exists(var, random_tree(sig, inner, depth - 1, fresh, rng));
}

}  // namespace

EpFormula random_ep_tree(const Signature& sig, std::size_t lib_size, std::size_t depth, std::mt19937_64& rng) {
  auto lib = lib_names(lib_size);
  std::size_t fresh = 0;
  return EpFormula("phi", sig, lib, random_tree(sig, lib, depth, fresh, rng));
}

Structure random_small_structure(const Signature& sig, std::size_t max_size, std::mt19937_64& rng) {
  std::size_t n = uniform(1, max_size, rng);
  double density = std::uniform_real_distribution<double>(0.15, 0.85)(rng);
  return random_structure(sig, n, density, rng);
}

}  // namespace epq
