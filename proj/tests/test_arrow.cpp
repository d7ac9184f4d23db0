#include <catch_amalgamated.hpp>

#include "dendro/arrow.hpp"
#include "oracles.hpp"

using namespace dendro;

namespace {

std::vector<Tree> small_corpus() {
  std::vector<Tree> out;
  for (const auto& k : enumerate_trees(3, 2)) out.push_back(k.representative);
  return out;
}

// The arrow built back from a normal form.
Arrow recompose(const Arrow& a, const NormalForm& nf) {
  Arrow out = face_arrow(a.target, nf.face);
  out = compose(out, Arrow{nf.trees.back(), out.source, nf.iso});
  for (std::size_t i = nf.collapsed.size(); i-- > 0;) out = compose(out, degeneracy_arrow(nf.trees[i], nf.collapsed[i]));
  return out;
}

}  // namespace

TEST_CASE("arrows between linear trees are monotone maps", "[arrow]") {
  // Δ ⊂ Ω is full: |Hom(linear(m), linear(n))| = C(n+m+1, m+1)
  for (std::size_t m = 0; m <= 3; ++m) {
    for (std::size_t n = 0; n <= 3; ++n) {
      CHECK(arrows_between(Tree::linear(m), Tree::linear(n)).size() == oracle::binomial(n + m + 1, m + 1));
    }
  }
}

TEST_CASE("arrows: small examples", "[arrow]") {
  for (const Tree& t : small_corpus()) CHECK(arrows_between(Tree::eta(), t).size() == t.edge_count());
  for (std::size_t n : {0U, 2U, 3U}) {
    std::size_t fact = 1;
    for (std::size_t k = 2; k <= n; ++k) fact *= k;
    CHECK(arrows_between(Tree::corolla(n), Tree::corolla(n)).size() == fact);
  }
  // a nullary vertex cannot go to an identity, nor into a tree without nullary vertices
  CHECK(arrows_between(Tree::corolla(0), Tree::linear(2)).empty());
  CHECK(arrows_between(Tree::corolla(0), parse_tree("r(a())")).size() == 2);
  CHECK_FALSE(is_arrow(Tree::corolla(2), Tree::corolla(2), std::vector<EdgeId>{0, 1, 1}));
  CHECK_THROWS_AS(make_arrow(Tree::corolla(2), Tree::corolla(2), {1, 0, 2}), InvalidArgument);
}

TEST_CASE("face arrows are arrows with the face as image", "[arrow]") {
  for (const Tree& t : small_corpus()) {
    for (const Face& f : faces(t)) {
      const Arrow a = face_arrow(t, f);
      CHECK(is_arrow(a.source, a.target, a.map));
      CHECK(image_face(a) == f);
    }
  }
}

TEST_CASE("degeneracies, sections, and unary insertion", "[arrow]") {
  for (const Tree& t : small_corpus()) {
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
      auto [s, v] = insert_unary(t, e);
      CHECK(collapse(s, v) == t);
      const Arrow sigma = degeneracy_arrow(s, v);
      CHECK(is_arrow(sigma.source, sigma.target, sigma.map));
      const Face sec = section_face(s, v);
      CHECK(domain(s, sec) == t);
      CHECK(compose(sigma, face_arrow(s, sec)) == identity_arrow(t));
    }
  }
  CHECK_THROWS_AS(collapse(Tree::corolla(2), 0), InvalidArgument);
}

TEST_CASE("normal form recomposes to the arrow", "[arrow][property]") {
  const auto trees = small_corpus();
  std::size_t checked = 0;
  for (const Tree& s : trees) {
    for (const Tree& t : trees) {
      for (const auto& m : arrows_between(s, t)) {
        const Arrow a{s, t, m};
        const NormalForm nf = normal_form(a);
        CHECK(nf.trees.front() == s);
        CHECK(oracle::is_isomorphism(nf.trees.back(), domain(t, nf.face), nf.iso));
        CHECK(recompose(a, nf) == a);
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("composites of arrows are arrows", "[arrow][property]") {
  const auto trees = small_corpus();
  for (const Tree& u : trees) {
    for (const Tree& v : trees) {
      const auto uv = arrows_between(u, v);
      if (uv.empty()) continue;
      for (const Tree& w : trees) {
        const auto vw = arrows_between(v, w);
        if (vw.empty()) continue;
        const Arrow c = compose(Arrow{v, w, vw.back()}, Arrow{u, v, uv.front()});
        CHECK(is_arrow(c.source, c.target, c.map));
      }
    }
  }
}
