#include <algorithm>

#include <catch_amalgamated.hpp>

#include "dendro/subobject.hpp"
#include "oracles.hpp"

using namespace dendro;

namespace {

std::vector<Tree> corpus() {
  std::vector<Tree> out;
  for (const auto& k : enumerate_trees(4, 3)) out.push_back(k.representative);
  return out;
}

// Ω[F] for a subtree F (no contraction): faces whose vertex set lies in W_F,
// or η-faces on an edge of F.
bool in_subtree_image(const Tree& t, const Subtree& s, const Face& g) {
  if (s.is_edge()) return g.is_edge() && g.edge == s.edge;
  if (g.is_edge()) return has_bit(subtree_edges(t, s.vertices), g.edge);
  return (g.vertices & ~s.vertices) == 0;
}

}  // namespace

TEST_CASE("boundary: examples", "[subobjects]") {
  CHECK(boundary(Tree::eta()).empty());
  const auto b = boundary(Tree::corolla(2));
  CHECK(b.size() == 3);
  for (const Face& f : b.members()) CHECK(f.is_edge());
  CHECK(boundary(Tree::linear(2)).size() == 6);
}

TEST_CASE("external_boundary: examples", "[subobjects]") {
  CHECK(external_boundary(Tree::corolla(2)) == boundary(Tree::corolla(2)));
  const Tree l2 = Tree::linear(2);
  const auto ext = external_boundary(l2);
  CHECK(ext.size() == 5);
  CHECK_FALSE(ext.member(make_face(l2, l2.vertex_mask(), bit(l2.id("1")))));
}

TEST_CASE("external_boundary: union of Ω[F] over proper subtrees", "[subobjects]") {
  for (const Tree& t : corpus()) {
    if (t.vertex_count() == 0) continue;
    std::vector<Face> oracle;
    for (const Face& g : faces(t)) {
      for (const Subtree& s : subtrees(t)) {
        if (s.vertices == t.vertex_mask()) continue;
        if (in_subtree_image(t, s, g)) {
          oracle.push_back(g);
          break;
        }
      }
    }
    CHECK(external_boundary(t).members() == oracle);
  }
}

TEST_CASE("inner_horn: examples and errors", "[subobjects]") {
  const Tree l2 = Tree::linear(2);
  const auto horn = inner_horn(l2, l2.id("1"));
  CHECK(horn.size() == 5);
  CHECK(horn == segal_core(l2));
  CHECK_THROWS_AS(inner_horn(Tree::corolla(3), 0), InvalidArgument);
  CHECK_THROWS_AS(inner_horn(l2, l2.id("2")), InvalidArgument);
  for (const Tree& t : corpus()) {
    for (EdgeId e : t.inner_edges()) CHECK(faces(t).size() - inner_horn(t, e).size() == 2);
  }
}

TEST_CASE("segal_core: examples", "[subobjects]") {
  for (std::size_t n = 0; n <= 4; ++n) CHECK(segal_core(Tree::corolla(n)) == representable(Tree::corolla(n)));
  for (std::size_t n = 0; n <= 4; ++n) CHECK(segal_core(Tree::linear(n)).size() == 2 * n + 1);
  CHECK(segal_core(parse_tree("r(a(x,y),b(u,v))")).size() == 10);
  CHECK(segal_core(Tree::eta()).size() == 1);
}

TEST_CASE("filtration_stage: endpoints and nesting", "[subobjects]") {
  for (const Tree& t : corpus()) {
    const std::size_t n = t.vertex_count();
    if (n == 0) {
      CHECK_THROWS_AS(filtration_stage(t, 1), InvalidArgument);
      continue;
    }
    CHECK(filtration_stage(t, 1) == segal_core(t));
    CHECK(filtration_stage(t, n) == representable(t));
    if (n >= 2) CHECK(filtration_stage(t, n - 1) == external_boundary(t));
    for (std::size_t k = 2; k <= n; ++k) CHECK(contains(filtration_stage(t, k), filtration_stage(t, k - 1)));
    CHECK_THROWS_AS(filtration_stage(t, 0), InvalidArgument);
    CHECK_THROWS_AS(filtration_stage(t, n + 1), InvalidArgument);
  }
}

TEST_CASE("constructions agree with their closed-form predicates", "[subobjects][property]") {
  for (const Tree& t : corpus()) {
    const auto all = faces(t);
    auto filtered = [&](auto pred) {
      std::vector<Face> out;
      std::copy_if(all.begin(), all.end(), std::back_inserter(out), pred);
      return out;
    };
    CHECK(boundary(t).members() == filtered([&](const Face& f) { return in_boundary(t, f); }));
    CHECK(external_boundary(t).members() == filtered([&](const Face& f) { return in_external_boundary(t, f); }));
    CHECK(segal_core(t).members() == filtered([&](const Face& f) { return in_segal_core(t, f); }));
    for (std::size_t n = 1; n <= t.vertex_count(); ++n) {
      CHECK(filtration_stage(t, n).members() ==
            filtered([&](const Face& f) { return in_filtration_stage(t, n, f); }));
    }
    for (EdgeId e : t.inner_edges()) {
      const auto horn = inner_horn(t, e);
      CHECK(horn.members() == filtered([&](const Face& f) { return in_inner_horn(t, e, f); }));
      const Face de{t.vertex_mask(), bit(e), t.root()};
      for (const Face& f : all) CHECK(factors_through_inner_face(t, e, f) == factors_through(t, f, de));
    }
  }
}

TEST_CASE("constructions are downward closed", "[subobjects][property]") {
  for (const Tree& t : corpus()) {
    CHECK(boundary(t).is_downward_closed());
    CHECK(external_boundary(t).is_downward_closed());
    CHECK(segal_core(t).is_downward_closed());
    for (EdgeId e : t.inner_edges()) CHECK(inner_horn(t, e).is_downward_closed());
  }
}

TEST_CASE("sub_ops: union, intersection, containment", "[subobjects]") {
  for (const Tree& t : corpus()) {
    if (t.vertex_count() >= 2) CHECK(unite(segal_core(t), boundary(t)) == boundary(t));
    // two distinct corolla faces meet in nothing or a single η-face
    std::vector<Face> corollas;
    for (EdgeId v : t.vertices()) corollas.push_back(Face{bit(v), 0, v});
    for (std::size_t i = 0; i < corollas.size(); ++i) {
      for (std::size_t j = i + 1; j < corollas.size(); ++j) {
        const auto meet = intersect(generated_by(t, std::span(&corollas[i], 1)), generated_by(t, std::span(&corollas[j], 1)));
        CHECK(meet.size() <= 1);
        for (const Face& f : meet.members()) CHECK(f.is_edge());
      }
    }
  }
  CHECK_THROWS_AS(unite(boundary(Tree::linear(2)), boundary(Tree::linear(3))), InvalidArgument);
  CHECK_THROWS_AS(intersect(boundary(Tree::linear(2)), boundary(Tree::corolla(2))), InvalidArgument);
}

TEST_CASE("inclusion chain Sc ⊆ ∂ext ⊆ Λe ⊊ Ω", "[subobjects]") {
  for (const Tree& t : corpus()) {
    if (t.vertex_count() < 2) continue;
    const auto core = segal_core(t);
    const auto ext = external_boundary(t);
    const auto full = representable(t);
    for (EdgeId e : t.inner_edges()) {
      const auto horn = inner_horn(t, e);
      CHECK(contains(ext, core));
      CHECK(contains(horn, ext));
      CHECK(contains(full, horn));
      CHECK(horn.size() < full.size());
    }
  }
}

TEST_CASE("constructions commute with tree isomorphisms", "[subobjects][property]") {
  for (const Tree& t : corpus()) {
    const Tree u = oracle::shuffled_copy(t, 99);
    const auto isos = isomorphisms(t, u);
    REQUIRE_FALSE(isos.empty());
    const auto& phi = isos.front();
    auto transport = [&](const Subobject& a) {
      std::vector<Face> m;
      for (const Face& f : a.members()) m.push_back(map_face(f, phi));
      return Subobject(u, m);
    };
    CHECK(transport(boundary(t)) == boundary(u));
    CHECK(transport(external_boundary(t)) == external_boundary(u));
    CHECK(transport(segal_core(t)) == segal_core(u));
    for (EdgeId e : t.inner_edges()) CHECK(transport(inner_horn(t, e)) == inner_horn(u, phi[e]));
  }
}
