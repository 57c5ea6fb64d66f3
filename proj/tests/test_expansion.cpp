#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "epq/counting.hpp"
#include "epq/equivalence.hpp"
#include "epq/expansion.hpp"
#include "epq/random_instances.hpp"
#include "support.hpp"

using namespace epq;
using namespace epq::testing;

TEST_CASE("three rotated paths collapse to two terms") {
  auto d = normalize_ep(parse_formula(read_data("rotated_paths.query")));
  WeightedPpSum sum = star_expansion(d);
  REQUIRE(sum.terms.size() == 2);
  CHECK(sum.terms[0].coefficient == 3);
  CHECK(sum.terms[1].coefficient == -2);
  CHECK(counting_equivalent(sum.terms[0].formula, d.disjuncts[0]).equivalent);
  auto phi13 = conjoin_pp(std::vector<PpFormula>{d.disjuncts[0], d.disjuncts[2]});
  CHECK(counting_equivalent(sum.terms[1].formula, phi13).equivalent);
  CHECK(serialize(sum) == "3 E(w,x) & E(x,y)\n-2 E(w,x) & E(x,y) & E(y,z)\n");
}

TEST_CASE("first example keeps three terms") {
  auto d = normalize_ep(parse_formula(read_data("nested.query")));
  WeightedPpSum sum = star_expansion(d);
  REQUIRE(sum.terms.size() == 3);
  std::vector<long> coefficients;
  for (const auto& t : sum.terms) coefficients.push_back(static_cast<long>(t.coefficient));
  std::sort(coefficients.begin(), coefficients.end());
  CHECK(coefficients == std::vector<long>{-1, 1, 1});
}

TEST_CASE("plus set with a sentence disjunct") {
  auto d = normalize_ep(parse_formula(read_data("paths_and_sentence.query")));
  AllFreeSplit split = all_free_part(d);
  CHECK(split.all_free.disjuncts.size() == 3);
  REQUIRE(split.sentences.size() == 1);
  PlusSet plus = plus_set(d);
  REQUIRE(plus.af_star.terms.size() == 2);
  // The three-edge path entails the sentence; the two-edge path does not.
  CHECK(plus.in_minus == std::vector<bool>{true, false});
  auto members = plus.members();
  REQUIRE(members.size() == 2);
  CHECK(canonical_text(members[0]) == "E(w,x) & E(x,y)");
  CHECK(members[1].is_sentence());
  CHECK(plus.minus_sum().terms.size() == 1);
  CHECK(plus.minus_sum().terms[0].coefficient == 3);
}

TEST_CASE("expansion identity on random formulas") {
  std::mt19937_64 rng(41);
  Signature sig = edge_and_colour_signature();
  RandomShape shape;
  for (int i = 0; i < 60; ++i) {
    DisjunctiveEp d = normalize_ep(random_disjunctive_ep(sig, shape, rng));
    if (!all_free_part(d).sentences.empty()) continue;
    WeightedPpSum sum = star_expansion(d);
    for (int k = 0; k < 4; ++k) {
      Structure b = random_small_structure(sig, 4, rng);
      REQUIRE(evaluate(sum, b) == naive_count(to_ep_formula(d), b));
    }
    for (std::size_t a = 0; a < sum.terms.size(); ++a) {
      CHECK(sum.terms[a].coefficient != 0);
      for (std::size_t c = a + 1; c < sum.terms.size(); ++c)
        CHECK_FALSE(counting_equivalent(sum.terms[a].formula, sum.terms[c].formula).equivalent);
    }
  }
}

TEST_CASE("expansion rejects sentence disjuncts") {
  auto d = normalize_ep(parse_formula(read_data("paths_and_sentence.query")));
  CHECK_THROWS(star_expansion(d));
}
