#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include <catch_amalgamated.hpp>

#include "dendro/tree.hpp"
#include "oracles.hpp"

using namespace dendro;

TEST_CASE("parse_tree: grammar examples", "[tree]") {
  const Tree eta = parse_tree("r");
  CHECK(eta.edge_count() == 1);
  CHECK(eta.vertex_count() == 0);

  const Tree c2 = parse_tree("r(a,b)");
  CHECK(c2.vertex_count() == 1);
  CHECK(c2.arity(c2.root()) == 2);
  CHECK(isomorphic(c2, Tree::corolla(2)));

  const Tree t = parse_tree("r(a(x,y),b())");
  CHECK(t.vertex_count() == oracle::count_vertices("r(a(x,y),b())"));
  CHECK(t.edge_count() == oracle::count_edges("r(a(x,y),b())"));
  CHECK(t.vertex_count() == 3);
  CHECK(t.edge_count() == 5);
  CHECK(t.has_vertex(t.id("b")));
  CHECK(t.arity(t.id("b")) == 0);
  CHECK(t.is_leaf(t.id("x")));
}

TEST_CASE("parse_tree: nullary vertex and leaf stay distinct", "[tree]") {
  const Tree leaf = parse_tree("r(a)");
  const Tree nullary = parse_tree("r(a())");
  CHECK_FALSE(leaf == nullary);
  CHECK(leaf.literal() == "r(a)");
  CHECK(nullary.literal() == "r(a())");
  CHECK(parse_tree(nullary.literal()) == nullary);
  CHECK_FALSE(isomorphic(leaf, nullary));
}

TEST_CASE("parse_tree: whitespace and round trip", "[tree]") {
  const Tree t = parse_tree("  root ( b , a ( z ) ,c() )");
  CHECK(t.literal() == "root(a(z),b,c())");
  const Tree again = parse_tree(t.literal());
  CHECK(again == t);
  CHECK(again.names() == t.names());
}

TEST_CASE("parse_tree: errors", "[tree]") {
  CHECK_THROWS_AS(parse_tree(""), ParseError);
  CHECK_THROWS_AS(parse_tree("r(a,"), ParseError);
  CHECK_THROWS_AS(parse_tree("r(a b)"), ParseError);
  CHECK_THROWS_AS(parse_tree("r(a))"), ParseError);
  CHECK_THROWS_AS(parse_tree("r(,a)"), ParseError);
  CHECK_THROWS_AS(parse_tree("r(a,a)"), InvalidArgument);
  try {
    parse_tree("r(a,(b))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("named constructors", "[tree]") {
  CHECK(Tree::eta().vertex_count() == 0);
  CHECK(Tree::corolla(0).literal() == "0()");
  CHECK(Tree::corolla(3).literal() == "0(1,2,3)");
  CHECK(Tree::linear(3).literal() == "0(1(2(3)))");
  CHECK(Tree::linear(0).literal() == "0");
  for (std::size_t n = 0; n <= 5; ++n) {
    CHECK(Tree::linear(n).vertex_count() == n);
    CHECK(Tree::linear(n).edge_count() == n + 1);
  }
}

TEST_CASE("canonicalize: examples", "[tree][canonical]") {
  CHECK(canonicalize(parse_tree("r(a,b)")).code == canonicalize(parse_tree("r(b,a)")).code);

  const auto once = canonicalize(Tree::linear(3));
  const auto twice = canonicalize(once.representative);
  CHECK(once.code == twice.code);
  CHECK(once.representative == twice.representative);
  CHECK(twice.relabel == identity_map(twice.representative.edge_count()));

  const Tree s = parse_tree("r(a(x),b)");
  const Tree t = parse_tree("r(a,b(x))");
  CHECK(canonicalize(s).code == canonicalize(t).code);
  // the explicit bijection r->r, a->b, x->x, b->a is an isomorphism
  std::vector<EdgeId> phi(s.edge_count());
  phi[s.id("r")] = t.id("r");
  phi[s.id("a")] = t.id("b");
  phi[s.id("x")] = t.id("x");
  phi[s.id("b")] = t.id("a");
  CHECK(oracle::is_isomorphism(s, t, phi));
}

TEST_CASE("canonicalize: relabeling is an isomorphism onto the representative", "[tree][canonical]") {
  for (const auto& key : enumerate_trees(4, 3)) {
    const Tree shuffled = oracle::shuffled_copy(key.representative, 17);
    const auto k = canonicalize(shuffled);
    CHECK(k.code == key.code);
    CHECK(k.representative == key.representative);
    CHECK(oracle::is_isomorphism(shuffled, k.representative, k.relabel));
  }
}

TEST_CASE("canonicalize: invariant under random relabel and shuffle", "[tree][canonical][property]") {
  std::mt19937 rng(20261017);
  for (int round = 0; round < 200; ++round) {
    const Tree t = oracle::random_tree(rng, 6, 3);
    const Tree u = oracle::shuffled_copy(t, rng());
    const auto kt = canonicalize(t);
    const auto ku = canonicalize(u);
    CHECK(kt.code == ku.code);
    CHECK(kt.representative == ku.representative);
    CHECK(canonicalize(kt.representative).representative == kt.representative);
  }
}

TEST_CASE("automorphisms: examples", "[tree][aut]") {
  for (std::size_t n = 0; n <= 4; ++n) CHECK(automorphisms(Tree::linear(n)).size() == 1);
  CHECK(automorphisms(Tree::corolla(3)).size() == 6);
  CHECK(oracle::brute_force_automorphisms(Tree::corolla(3)).size() == 6);
  const Tree t = parse_tree("r(a(x,y),b(u,v))");
  CHECK(automorphisms(t).size() == 8);
  CHECK(oracle::brute_force_automorphisms(t).size() == 8);
  for (std::size_t n = 0; n <= 4; ++n) {
    std::size_t fact = 1;
    for (std::size_t k = 2; k <= n; ++k) fact *= k;
    CHECK(automorphisms(Tree::corolla(n)).size() == fact);
  }
}

TEST_CASE("automorphisms: agree with brute force and form a group", "[tree][aut][property]") {
  for (const auto& key : enumerate_trees(4, 3)) {
    const Tree& t = key.representative;
    auto aut = automorphisms(t);
    auto brute = oracle::brute_force_automorphisms(t);
    std::sort(brute.begin(), brute.end());
    REQUIRE(aut == brute);
    const std::set<std::vector<EdgeId>> group(aut.begin(), aut.end());
    CHECK(aut.front() == identity_map(t.edge_count()));
    for (const auto& a : aut) {
      CHECK(group.count(invert_map(a)) == 1);
      for (const auto& b : aut) CHECK(group.count(compose_maps(a, b)) == 1);
    }
  }
}

TEST_CASE("enumerate_trees: small cases", "[tree][enumerate]") {
  for (std::size_t k = 0; k <= 4; ++k) {
    const auto only = enumerate_trees(0, k);
    REQUIRE(only.size() == 1);
    CHECK(only[0].representative.vertex_count() == 0);
  }
  const auto one = enumerate_trees(1, 2);
  REQUIRE(one.size() == 4);
  std::set<std::string> literals;
  for (const auto& k : one) literals.insert(k.representative.literal());
  CHECK(literals == std::set<std::string>{"0", "0()", "0(1)", "0(1,2)"});
}

TEST_CASE("enumerate_trees: matches generate-and-dedupe oracle", "[tree][enumerate]") {
  for (auto [v, a] : {std::pair<std::size_t, std::size_t>{3, 2}, {2, 3}, {3, 3}, {4, 2}}) {
    const auto keys = enumerate_trees(v, a);
    const auto classes = oracle::iso_classes_by_brute_force(v, a);
    CHECK(keys.size() == classes);
  }
}

TEST_CASE("enumerate_trees: no duplicates, bounds respected, deterministic", "[tree][enumerate][property]") {
  const auto keys = enumerate_trees(4, 3);
  std::set<std::string> codes;
  for (const auto& k : keys) {
    CHECK(codes.insert(k.code).second);
    CHECK(k.representative.vertex_count() <= 4);
    CHECK(k.representative.max_arity() <= 3);
    CHECK(canonicalize(k.representative).code == k.code);
  }
  const auto again = enumerate_trees(4, 3);
  REQUIRE(again.size() == keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) CHECK(again[i].code == keys[i].code);
}
