#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "epq/counting.hpp"
#include "epq/enumerate.hpp"
#include "epq/equivalence.hpp"
#include "epq/errors.hpp"
#include "epq/random_instances.hpp"
#include "support.hpp"

using namespace epq;
using namespace epq::testing;

TEST_CASE("parse a single atom") {
  auto phi = parse_formula("sig E/2\nquery phi lib(x,y): E(x,y)");
  CHECK(phi.name() == "phi");
  CHECK(phi.lib() == std::vector<std::string>{"x", "y"});
  CHECK(format_body(phi.body()) == "E(x,y)");
}

TEST_CASE("parse a nested formula") {
  auto file = parse_formula_file(read_data("nested.query"), "nested.query");
  REQUIRE(file.queries.size() == 1);
  const auto& body = file.queries[0].body();
  const auto* top = std::get_if<Conj>(&body->value);
  REQUIRE(top);
  CHECK(std::holds_alternative<Atom>(top->lhs->value));
  const auto* alt = std::get_if<Disj>(&top->rhs->value);
  REQUIRE(alt);
  CHECK(std::holds_alternative<Atom>(alt->lhs->value));
  CHECK(std::holds_alternative<Conj>(alt->rhs->value));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_formula("sig E/2\nquery bad lib(x): E(x)", "f");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("arity") != std::string::npos);
  }
  try {
    parse_formula("sig E/2\nquery bad lib(x):\n  E(x,y)", "f");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 7);
  }
  CHECK_THROWS_AS(parse_formula("sig E/2\nquery bad lib(x): E(x,x) &"), ParseError);
  CHECK_THROWS_AS(parse_formula("sig E/2\nquery bad lib(x): E(x,x) $"), ParseError);
  CHECK_THROWS_AS(parse_formula("sig E/2\nquery bad lib(x): R(x,x)"), ParseError);
  CHECK_THROWS_AS(parse_formula("sig E/2 E/3"), ParseError);
}

TEST_CASE("bound variables are renamed apart from lib and each other") {
  auto phi = parse_formula("sig E/2\nquery q lib(x): (exists y. E(x,y)) & exists y. E(y,x)");
  std::string text = format_body(phi.body());
  CHECK(text.find("_q0") != std::string::npos);
  CHECK(text.find("_q1") != std::string::npos);
  CHECK(text.find("y") == std::string::npos);
  // A binder may shadow nothing liberal.
  auto shadow = parse_formula("sig E/2\nquery q lib(x): exists x. E(x,x)");
  CHECK(free_variables(shadow.body()).empty());
}

TEST_CASE("format and reparse give the same formula text") {
  std::mt19937_64 rng(11);
  Signature sig = edge_and_colour_signature();
  for (int i = 0; i < 50; ++i) {
    EpFormula phi = rename_bound_apart(random_ep_tree(sig, 2, 4, rng));
    std::string text = format_signature(sig) + "\n" + format_query(phi);
    EpFormula again = parse_formula(text);
    CHECK(format_body(again.body()) == format_body(phi.body()));
  }
}

TEST_CASE("structure view of the four-component formula") {
  auto phi = parse_formula(read_data("four_components.query"));
  PpFormula p = to_structure_view(phi);
  CHECK(p.structure().size() == 8);
  const auto& s = p.structure();
  auto has = [&](const char* rel, const char* a, const char* b) {
    Tuple t{s.index_of(a), s.index_of(b)};
    return s.contains(rel, t);
  };
  CHECK(s.tuples("E").size() == 2);
  CHECK(s.tuples("F").size() == 1);
  CHECK(s.tuples("G").size() == 1);
  CHECK(has("E", "x", "x2"));
  // Binders are renamed apart by the parser.
  CHECK(has("E", "y", "_q0"));
  CHECK(has("F", "_q1", "_q2"));
  CHECK(has("G", "_q1", "_q3"));
  CHECK(p.is_free());
}

TEST_CASE("from_structure_view") {
  PpFormula empty = pp("E/2", "z", "true");
  CHECK(empty.structure().size() == 1);
  CHECK(empty.structure().tuple_count() == 0);
  CHECK(from_structure_view(empty) == "query pp lib(z): true");

  auto phi = parse_formula(read_data("four_components.query"));
  std::string text = from_structure_view(to_structure_view(phi), "phi");
  CHECK(text == "query phi lib(x,x2,y,z): exists _q0,_q1,_q2,_q3. E(x,x2) & E(y,_q0) & F(_q1,_q2) & G(_q1,_q3)");

  PpFormula open = pp("E/2", "x,y", "E(x,y) & E(y,x)");
  CHECK(from_structure_view(open) == "query pp lib(x,y): E(x,y) & E(y,x)");
}

TEST_CASE("structure view round trip is logically equivalent") {
  std::mt19937_64 rng(3);
  Signature sig = edge_and_colour_signature();
  RandomShape shape;
  shape.max_vars = 5;
  shape.max_atoms = 4;
  for (int i = 0; i < 40; ++i) {
    PpFormula p = random_pp(sig, shape, rng);
    std::string text = format_signature(sig) + "\n" + from_structure_view(p);
    PpFormula again = to_structure_view(parse_formula(text));
    CHECK(logically_equivalent(p, again).equivalent);
  }
}

TEST_CASE("to_structure_view rejects disjunctions") {
  CHECK_THROWS_AS(to_structure_view(ep("E/2", "x", "E(x,x) | true")), PreconditionViolation);
}

TEST_CASE("normalize a nested formula") {
  auto phi = parse_formula(read_data("nested.query"));
  DisjunctiveEp d = normalize_ep(phi);
  REQUIRE(d.disjuncts.size() == 2);
  CHECK(canonical_text(d.disjuncts[0]) == "E(w,x) & E(x,y)");
  CHECK(canonical_text(d.disjuncts[1]) == "E(x,y) & E(y,z) & E(z,z)");
  for (const auto& p : d.disjuncts) CHECK(p.lib() == phi.lib());
}

TEST_CASE("normalize keeps an already disjunctive formula") {
  auto phi = parse_formula(read_data("rotated_paths.query"));
  DisjunctiveEp d = normalize_ep(phi);
  CHECK(d.disjuncts.size() == 3);
  CHECK(is_normalized(d));
}

TEST_CASE("normalize keeps a sentence that maps into no other disjunct") {
  auto theta = parse_formula(read_data("paths_and_sentence.query"));
  DisjunctiveEp d = normalize_ep(theta);
  CHECK(d.disjuncts.size() == 4);
  std::size_t sentences = 0;
  for (const auto& p : d.disjuncts) {
    if (p.is_sentence()) {
      ++sentences;
      for (const auto& q : d.disjuncts) {
        if (&q != &p) CHECK_FALSE(find_homomorphism(augment(p), augment(q)));
      }
    }
  }
  CHECK(sentences == 1);
}

TEST_CASE("normalize drops disjuncts that entail a sentence disjunct") {
  auto phi = ep("E/2", "x", "E(x,x) | exists a. E(a,a) | exists a,b. E(a,b)");
  DisjunctiveEp d = normalize_ep(phi);
  // E(x,x) and the loop sentence both entail the edge sentence.
  REQUIRE(d.disjuncts.size() == 1);
  CHECK(canonical_text(d.disjuncts[0]) == "exists _q0,_q1. E(_q0,_q1)");
  CHECK(is_normalized(d));
}

TEST_CASE("normalization preserves counts on all small structures") {
  std::mt19937_64 rng(5);
  Signature e;
  e.add("E", 2);
  std::vector<Structure> all;
  for (std::size_t n = 1; n <= 3; ++n) {
    for_each_structure(e, n, [&](const Structure& s) {
      all.push_back(s);
      return true;
    });
  }
  for (int i = 0; i < 12; ++i) {
    EpFormula phi = random_ep_tree(e, 2, 4, rng);
    EpFormula normal = to_ep_formula(normalize_ep(phi));
    CHECK(is_normalized(normalize_ep(phi)));
    for (const auto& b : all) {
      REQUIRE(brute_force_count(normal, b) == naive_count(phi, b));
    }
  }
}

TEST_CASE("conjoin glues on the liberal variables") {
  auto d = normalize_ep(parse_formula(read_data("nested.query")));
  PpFormula both = conjoin_pp(d.disjuncts);
  CHECK(both.quantified_elements().empty());
  CHECK(canonical_text(both) == "E(w,x) & E(x,y) & E(y,z) & E(z,z)");
  std::vector<PpFormula> one{d.disjuncts[0]};
  CHECK(canonical_text(conjoin_pp(one)) == canonical_text(d.disjuncts[0]));

  PpFormula a = pp("E/2", "x,y", "exists z. E(x,z) & E(z,y)");
  PpFormula b = pp("E/2", "x,y", "exists z. E(y,z)");
  PpFormula c = pp("E/2", "x,y", "exists z. E(z,z) & E(z,x)");
  std::vector<PpFormula> ab{a, b};
  std::vector<PpFormula> ab_c{conjoin_pp(ab), c};
  std::vector<PpFormula> abc{a, b, c};
  CHECK(logically_equivalent(conjoin_pp(ab_c), conjoin_pp(abc)).equivalent);
  CHECK(conjoin_pp(abc).quantified_elements().size() == 3);

  PpFormula other = pp("E/2", "x", "E(x,x)");
  std::vector<PpFormula> bad{a, other};
  CHECK_THROWS_AS(conjoin_pp(bad), PreconditionViolation);
}

TEST_CASE("components of the four-component formula") {
  PpFormula p = to_structure_view(parse_formula(read_data("four_components.query")));
  auto parts = components(p);
  REQUIRE(parts.size() == 4);
  std::vector<std::vector<std::string>> libs;
  for (const auto& c : parts) libs.push_back(c.lib());
  std::vector<std::vector<std::string>> expected{{"x", "x2"}, {"y"}, {"z"}, {}};
  std::sort(libs.begin(), libs.end());
  std::sort(expected.begin(), expected.end());
  CHECK(libs == expected);
  CHECK(components(pp("E/2", "x,y", "E(x,y)")).size() == 1);
}

TEST_CASE("counts multiply over components") {
  std::mt19937_64 rng(9);
  Signature sig = edge_and_colour_signature();
  RandomShape shape;
  shape.max_vars = 5;
  shape.max_atoms = 3;
  for (int i = 0; i < 20; ++i) {
    PpFormula p = random_pp(sig, shape, rng);
    Structure b = random_small_structure(sig, 3, rng);
    BigInt product = 1;
    for (const auto& c : components(p)) product *= naive_count(c, b);
    CHECK(product == naive_count(p, b));
  }
}

TEST_CASE("hat removes the sentence components") {
  PpFormula p = to_structure_view(parse_formula(read_data("four_components.query")));
  PpFormula h = hat(p);
  CHECK(h.lib() == p.lib());
  CHECK(canonical_text(h) == "exists _q0. E(x,x2) & E(y,_q0)");
  PpFormula all_liberal = pp("E/2", "x,y", "exists z. E(x,z) & E(z,y)");
  CHECK(canonical_text(hat(all_liberal)) == canonical_text(all_liberal));
  CHECK_THROWS_AS(hat(pp("E/2", "", "exists z. E(z,z)")), PreconditionViolation);
}

TEST_CASE("a formula has no answers or exactly the answers of its hat") {
  std::mt19937_64 rng(17);
  Signature sig = edge_and_colour_signature();
  RandomShape shape;
  shape.max_vars = 5;
  shape.max_atoms = 4;
  for (int i = 0; i < 20; ++i) {
    PpFormula p = random_pp(sig, shape, rng);
    Structure b = random_small_structure(sig, 3, rng);
    auto answers = naive_answers(to_ep_formula(p), b);
    if (!answers.empty()) CHECK(answers == naive_answers(to_ep_formula(hat(p)), b));
  }
}
