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

namespace {

bool counts_differ(const PpFormula& p, const PpFormula& q, const Structure& b) {
  return naive_count(p, b) != naive_count(q, b);
}

}  // namespace

TEST_CASE("renamed edge formulas are counting but not logically equivalent") {
  auto file = parse_formula_file(read_data("renamed_edges.query"));
  PpFormula p = to_structure_view(file.queries[0]);
  PpFormula q = to_structure_view(file.queries[1]);
  auto logical = logically_equivalent(p, q);
  CHECK_FALSE(logical.equivalent);
  CHECK_FALSE(logical.note.empty());
  auto counting = counting_equivalent(p, q);
  REQUIRE(counting.equivalent);
  REQUIRE(counting.forward);
  auto pairs = lib_bijection(p, q, *counting.forward);
  std::vector<std::pair<std::string, std::string>> expected{{"x", "w"}, {"y", "z"}};
  CHECK(pairs == expected);
}

TEST_CASE("logical equivalence through homomorphisms both ways") {
  PpFormula p = pp("E/2", "x,y", "E(x,y)");
  PpFormula q = pp("E/2", "x,y", "exists z. E(x,y) & E(x,z)");
  auto v = logically_equivalent(p, q);
  CHECK(v.equivalent);
  CHECK(v.forward);
  CHECK(v.backward);
  CHECK(counting_equivalent(p, q).equivalent);
  CHECK_FALSE(logically_equivalent(p, pp("E/2", "x,y", "E(y,x)")).equivalent);
  CHECK(entails(q, p));
  CHECK(entails(pp("E/2", "x,y", "E(x,y) & E(y,y)"), p));
  CHECK_FALSE(entails(p, pp("E/2", "x,y", "E(x,y) & E(y,y)")));
}

TEST_CASE("counting distinguishers are genuine") {
  PpFormula p = pp("E/2", "x,y", "E(x,y)");
  PpFormula loops = pp("E/2", "x,y", "E(x,x) & E(y,y)");
  auto v = counting_equivalent(p, loops, true);
  CHECK_FALSE(v.equivalent);
  REQUIRE(v.distinguisher);
  CHECK(counts_differ(p, loops, *v.distinguisher));

  PpFormula three = pp("E/2", "x,y,z", "E(x,y)");
  auto sized = counting_equivalent(p, three, true);
  CHECK_FALSE(sized.equivalent);
  REQUIRE(sized.distinguisher);
  CHECK(counts_differ(p, three, *sized.distinguisher));
}

TEST_CASE("a quantified coloured element breaks counting but not semi-counting equivalence") {
  auto file = parse_formula_file(read_data("coloured_witness.query"));
  PpFormula p = to_structure_view(file.queries[0]);
  PpFormula q = to_structure_view(file.queries[1]);
  CHECK_FALSE(counting_equivalent(p, q).equivalent);
  CHECK(semi_counting_equivalent(p, q).equivalent);
  CHECK_THROWS_AS(distinguishing_pair_structure(p, q), PreconditionViolation);
  CHECK_THROWS_AS(semi_counting_equivalent(pp("E/2", "", "true"), p), PreconditionViolation);

  std::vector<PpFormula> pair{p, q};
  auto [index, a] = min_hom_order_witness(pair);
  CHECK(index == 0);
  CHECK(a == p.structure());
}

TEST_CASE("semi-counting distinguishers have positive different counts") {
  PpFormula p = pp("E/2 F/1", "x,y", "E(x,y)");
  PpFormula q = pp("E/2 F/1", "x,y", "exists z. E(x,z) & E(z,y) & F(z)");
  auto v = semi_counting_equivalent(p, q, true);
  CHECK_FALSE(v.equivalent);
  REQUIRE(v.distinguisher);
  BigInt cp = naive_count(p, *v.distinguisher);
  BigInt cq = naive_count(q, *v.distinguisher);
  CHECK(cp > 0);
  CHECK(cq > 0);
  CHECK(cp != cq);
  Structure d = distinguishing_pair_structure(p, q);
  CHECK(naive_count(p, d) > 0);
  CHECK(naive_count(q, d) > 0);
  CHECK(naive_count(p, d) != naive_count(q, d));
}

TEST_CASE("counting equivalence matches counts on small structures") {
  std::mt19937_64 rng(31);
  Signature e = sig_of("E/2");
  std::vector<Structure> all;
  for (std::size_t n = 1; n <= 2; ++n) {
    for_each_structure(e, n, [&](const Structure& s) {
      all.push_back(s);
      return true;
    });
  }
  RandomShape shape;
  shape.max_vars = 3;
  shape.max_lib = 2;
  shape.max_atoms = 3;
  int equivalent = 0;
  for (int i = 0; i < 60; ++i) {
    PpFormula p = random_pp(e, shape, rng);
    PpFormula q = random_pp(e, shape, rng);
    auto v = counting_equivalent(p, q, true);
    if (v.equivalent) {
      ++equivalent;
      for (const auto& b : all) REQUIRE(count_pp(p, b) == count_pp(q, b));
    } else {
      REQUIRE(v.distinguisher);
      CHECK(counts_differ(p, q, *v.distinguisher));
    }
  }
  CHECK(equivalent > 0);
}

TEST_CASE("semi-counting equivalence is counting equivalence of hats") {
  std::mt19937_64 rng(32);
  Signature sig = edge_and_colour_signature();
  RandomShape shape;
  shape.max_vars = 4;
  shape.max_atoms = 3;
  for (int i = 0; i < 60; ++i) {
    PpFormula p = random_pp(sig, shape, rng);
    PpFormula q = random_pp(sig, shape, rng);
    if (!p.is_liberal() || !q.is_liberal()) continue;
    CHECK(semi_counting_equivalent(p, q).equivalent == counting_equivalent(hat(p), hat(q)).equivalent);
  }
}

TEST_CASE("joint distinguishing structure separates every class") {
  auto d = normalize_ep(parse_formula(read_data("rotated_paths.query")));
  std::vector<PpFormula> phis(d.disjuncts.begin(), d.disjuncts.end());
  phis.push_back(conjoin_pp(std::vector<PpFormula>{d.disjuncts[0], d.disjuncts[2]}));
  phis.push_back(pp("E/2", "w,x,y,z", "E(w,x) & E(x,y) & E(y,z) & E(z,w)"));
  auto classes = semi_counting_classes(phis);
  CHECK(classes.size() == 3);
  Structure c = joint_distinguishing_structure(phis);
  std::set<BigInt> counts;
  for (const auto& cls : classes) {
    BigInt first = count_pp(phis[cls[0]], c);
    CHECK(first > 0);
    for (std::size_t i : cls) CHECK(count_pp(phis[i], c) == first);
    counts.insert(first);
  }
  CHECK(counts.size() == classes.size());

  std::vector<PpFormula> one{phis[0]};
  CHECK(joint_distinguishing_structure(one).size() == 1);
}

TEST_CASE("joint structure on random families") {
  std::mt19937_64 rng(33);
  Signature sig = edge_and_colour_signature();
  RandomShape shape;
  shape.max_vars = 4;
  shape.max_lib = 2;
  shape.max_atoms = 3;
  for (int round = 0; round < 15; ++round) {
    std::vector<PpFormula> phis;
    std::size_t lib = 1 + rng() % 2;
    while (phis.size() < 4) {
      PpFormula p = random_pp(sig, shape, rng);
      if (p.lib().size() == lib) phis.push_back(p);
    }
    for (auto& p : phis) p = PpFormula(p.structure(), phis[0].lib());
    auto classes = semi_counting_classes(phis);
    Structure c = joint_distinguishing_structure(phis);
    std::set<BigInt> counts;
    for (const auto& cls : classes) {
      for (std::size_t i : cls) REQUIRE(count_pp(phis[i], c) > 0);
      counts.insert(count_pp(phis[cls[0]], c));
    }
    CHECK(counts.size() == classes.size());
  }
}
