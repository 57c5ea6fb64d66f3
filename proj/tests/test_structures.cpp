#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "epq/enumerate.hpp"
#include "epq/errors.hpp"
#include "support.hpp"

using namespace epq;
using namespace epq::testing;

namespace {

Structure path(std::size_t edges) {
  Signature e;
  e.add("E", 2);
  StructureBuilder b(e);
  for (std::size_t i = 0; i <= edges; ++i) b.add_element(std::to_string(i));
  for (std::size_t i = 0; i < edges; ++i) b.add_tuple("E", {std::to_string(i), std::to_string(i + 1)});
  return std::move(b).build();
}

Structure cycle(std::size_t n) {
  Signature e;
  e.add("E", 2);
  StructureBuilder b(e);
  for (std::size_t i = 0; i < n; ++i) b.add_element(std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    b.add_tuple("E", {std::to_string(i), std::to_string((i + 1) % n)});
    b.add_tuple("E", {std::to_string((i + 1) % n), std::to_string(i)});
  }
  return std::move(b).build();
}

}  // namespace

TEST_CASE("parse and serialize a structure") {
  Structure c = parse_structure(read_data("path_loop.structure"), sig_of("E/2"));
  CHECK(c.size() == 4);
  CHECK(c.tuples("E").size() == 4);
  CHECK(c.contains("E", Tuple{c.index_of("4"), c.index_of("4")}));
  std::string text = serialize_structure(c, "C", true);
  Structure again = parse_structure(text, Signature{});
  CHECK(again == c);
}

TEST_CASE("universe is in natural order") {
  Structure s = st("E/2", "10 2 b a 1", "");
  CHECK(s.elements() == std::vector<std::string>{"1", "2", "10", "a", "b"});
  CHECK(natural_less("9", "10"));
  CHECK_FALSE(natural_less("a", "10"));
}

TEST_CASE("structure parse errors") {
  CHECK_THROWS_AS(st("E/2", "1 2", "rel E: (1,3)"), ParseError);
  CHECK_THROWS_AS(st("E/2", "1 2", "rel E: (1)"), ParseError);
  CHECK_THROWS_AS(st("E/2", "1 2", "rel R: (1,2)"), ParseError);
  CHECK_THROWS_AS(parse_structure("structure s\ndomain 1\n", sig_of("E/2")), ParseError);
  CHECK_THROWS_AS(parse_structure("", sig_of("E/2")), ParseError);
}

TEST_CASE("product, power and unions") {
  Structure p = path(2);
  Structure sq = product(p, p);
  CHECK(sq.size() == 9);
  CHECK(sq.tuples("E").size() == 4);
  CHECK(sq.find("(0|1)").has_value());
  Structure zero = power(p, 0);
  CHECK(zero == unit_structure(p.signature()));
  CHECK(power(p, 3).size() == 27);

  Structure u = unit_structure(sig_of("E/2 F/1"));
  CHECK(u.size() == 1);
  CHECK(u.tuples("E").size() == 1);
  CHECK(u.tuples("F").size() == 1);

  Structure plus = disjoint_union(p, 2, unit_structure(p.signature()));
  CHECK(plus.size() == 5);
  CHECK(plus.tuples("E").size() == 4);
  CHECK(plus.find("a#1").has_value());

  std::vector<Structure> parts{p, cycle(3)};
  Structure both = disjoint_union(parts);
  CHECK(both.size() == 6);
  CHECK(both.tuples("E").size() == 8);

  Structure full = full_structure(sig_of("E/2 F/1"), 2);
  CHECK(full.tuples("E").size() == 4);
  CHECK(full.tuples("F").size() == 2);
}

TEST_CASE("enumeration covers every structure once") {
  Signature e = sig_of("E/2");
  std::size_t count = 0;
  std::set<std::string> seen;
  for_each_structure(e, 2, [&](const Structure& s) {
    ++count;
    seen.insert(serialize_structure(s, "s"));
    return true;
  });
  CHECK(count == 16);
  CHECK(seen.size() == 16);
  CHECK(tuple_slots(sig_of("E/2 F/1"), 3) == 12);
  std::size_t stopped = 0;
  CHECK_FALSE(for_each_structure(e, 2, [&](const Structure&) { return ++stopped < 3; }));
  CHECK(stopped == 3);
}

TEST_CASE("homomorphism search agrees with exhaustive listing") {
  std::mt19937_64 rng(21);
  Signature sig = sig_of("E/2 F/1");
  for (int i = 0; i < 150; ++i) {
    Structure a = random_structure(sig, 1 + rng() % 4, 0.3, rng);
    Structure b = random_structure(sig, 1 + rng() % 3, 0.5, rng);
    auto all = all_homomorphisms(a, b);
    auto found = find_homomorphism(a, b);
    REQUIRE(found.has_value() == !all.empty());
    if (found) CHECK(is_homomorphism(a, b, *found));
    std::vector<Element> s;
    for (Element e = 0; e < a.size(); e += 2) s.push_back(e);
    std::set<std::vector<Element>> expected;
    for (const auto& h : all) {
      std::vector<Element> img;
      for (Element e : s) img.push_back(h[e]);
      expected.insert(img);
    }
    auto got = hom_set(a, b, s);
    CHECK(std::set<std::vector<Element>>(got.begin(), got.end()) == expected);
    CHECK(got.size() == expected.size());
  }
}

TEST_CASE("hom_set with an empty projection") {
  Structure p = path(3);
  CHECK(hom_set(p, path(2), {}).empty());
  CHECK(hom_set(path(2), p, {}).size() == 1);
}

TEST_CASE("search constraints") {
  Structure c = cycle(4);
  HomomorphismSearch inj(c, c);
  inj.require_injective({0, 1, 2, 3});
  std::size_t autos = 0;
  std::vector<Element> all{0, 1, 2, 3};
  inj.for_each_projection(all, [&](const std::vector<Element>&) {
    ++autos;
    return true;
  });
  CHECK(autos == 8);

  HomomorphismSearch pinned(c, c);
  std::vector<Element> zero{0};
  pinned.restrict_domain(0, zero);
  pinned.forbid_target(1);
  pinned.forbid_target(3);
  CHECK_FALSE(pinned.find().has_value());
}

TEST_CASE("cores") {
  CHECK(core(cycle(4)).size() == 2);
  CHECK(core(cycle(3)).size() == 3);
  CHECK(is_core(cycle(5)));
  CHECK(is_core(path(3)));
  CHECK_FALSE(is_core(cycle(6)));
  CHECK(core(cycle(6)).size() == 2);
  std::mt19937_64 rng(2);
  Signature sig = sig_of("E/2 F/1");
  for (int i = 0; i < 60; ++i) {
    Structure a = random_structure(sig, 1 + rng() % 5, 0.25, rng);
    Structure k = core(a);
    CHECK(is_core(k));
    CHECK(hom_equivalent(a, k));
    CHECK(k.size() <= a.size());
  }
}
