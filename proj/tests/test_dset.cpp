#include <catch_amalgamated.hpp>

#include "dendro/dendro.hpp"
#include "oracles.hpp"

using namespace dendro;

namespace {

std::vector<Tree> corpus(std::size_t v, std::size_t a, std::size_t min_v = 0) {
  std::vector<Tree> out;
  for (const auto& k : enumerate_trees(v, a)) {
    if (k.representative.vertex_count() >= min_v) out.push_back(k.representative);
  }
  return out;
}

// Strings of n composable arrows in the category, counted directly from the
// operation list (unary operations are arrows source -> target).
std::size_t composable_strings(const ColouredOperad& c, std::size_t n) {
  std::size_t count = 0;
  std::function<void(std::size_t, ColourId)> go = [&](std::size_t left, ColourId at) {
    if (left == 0) {
      ++count;
      return;
    }
    for (const Operation& op : c.operations) {
      if (op.inputs.size() == 1 && op.output == at) go(left - 1, op.inputs[0]);
    }
  };
  for (ColourId o = 0; o < c.colours.size(); ++o) go(n, o);
  return count;
}

}  // namespace

TEST_CASE("Yoneda: maps out of a representable are the dendrices", "[dset][hom]") {
  const std::vector<Tree> trees = corpus(3, 2);
  for (const auto& p : {make_com(3), make_ass(3), make_category(3), make_two_colour()}) {
    const NerveView x(p);
    for (const Tree& s : trees) {
      if (!x.evaluable(s)) continue;
      CHECK(hom_from_subobject(representable(s), x).size() == x.evaluate(s).size());
    }
  }
  const SubobjectView om = representable_view(parse_tree("r(a(x,y),b)"));
  for (const Tree& s : trees) {
    CHECK(hom_from_subobject(representable(s), om).size() == om.evaluate(s).size());
    CHECK(om.evaluate(s).size() == arrows_between(s, om.subobject().ambient()).size());
  }
}

TEST_CASE("maps out of the corolla boundary are families of colours", "[dset][hom]") {
  for (const auto& p : {make_ass(3), make_two_colour()}) {
    const NerveView x(p);
    for (std::size_t n = 0; n <= 3; ++n) {
      std::size_t expect = 1;
      for (std::size_t k = 0; k <= n; ++k) expect *= p.colours.size();
      CHECK(hom_from_subobject(boundary(Tree::corolla(n)), x).size() == expect);
    }
  }
}

TEST_CASE("category nerve: core maps count composable strings", "[dset][segal]") {
  const ColouredOperad cat = make_category(3);
  const NerveView x(cat);
  // adjacency including identities: [[2,2],[0,1]] -> 5, 11, 23, 47
  const std::vector<std::size_t> expect = {5, 11, 23, 47};
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto homs = hom_from_subobject(segal_core(Tree::linear(n)), x);
    CHECK(homs.size() == composable_strings(cat, n));
    CHECK(homs.size() == expect[n - 1]);
  }
}

TEST_CASE("segal_map: nerves are Segal", "[dset][segal]") {
  for (const auto& p : {make_com(3), make_ass(3), make_category(3), make_two_colour()}) {
    const NerveView x(p);
    const auto rep = segal_char_check(x, 3);
    INFO(p.name);
    CHECK(rep.ok());
    CHECK(rep.results.size() > 5);
  }
  CHECK_THROWS_AS(segal_map(NerveView(make_com(3)), Tree::eta()), InvalidArgument);
}

TEST_CASE("segal_map: representables and horns", "[dset][segal]") {
  // Ω[T] is Segal (it is the nerve of a free operad)
  const SubobjectView om = representable_view(parse_tree("r(a(x,y),b)"));
  CHECK(segal_char_check(om, 3).ok());
  // the Segal core of linear(2) as a dendroidal set is not Segal: its 2-simplex is missing
  const SubobjectView sc(segal_core(Tree::linear(2)), "Sc");
  const auto r = segal_map(sc, Tree::linear(2));
  CHECK_FALSE(r.surjective);
  CHECK(r.missed.has_value());
}

TEST_CASE("simplicial restriction of representables", "[dset][simplicial]") {
  for (std::size_t n = 0; n <= 3; ++n) {
    const SubobjectView om = representable_view(Tree::linear(n));
    const auto s = simplicial_restriction(om, 4);
    CHECK(s.ok());
    for (std::size_t k = 0; k <= 4; ++k) {
      CHECK(s.levels[k].size() == oracle::binomial(n + k + 1, k + 1));
      CHECK(s.nondegenerate[k] == oracle::binomial(n + 1, k + 1));
    }
  }
  const auto pt = simplicial_restriction(representable_view(Tree::eta()), 3);
  for (std::size_t k = 0; k <= 3; ++k) CHECK(pt.levels[k].size() == 1);
  const auto cat = simplicial_restriction(NerveView(make_category(3)), 3);
  CHECK(cat.ok());
  CHECK(cat.nondegenerate[1] == 3);
}

TEST_CASE("inner Kan: nerves fill uniquely, horns fail their own horn", "[dset][kan]") {
  for (const auto& p : {make_com(3), make_ass(3), make_category(3), make_two_colour()}) {
    const NerveView x(p);
    const auto rep = inner_kan_check(x, 3);
    INFO(p.name);
    CHECK(rep.ok());
    CHECK(rep.unique());
    CHECK_FALSE(rep.results.empty());
  }
  std::size_t pairs = 0;
  for (const Tree& t : corpus(3, 2, 2)) {
    for (EdgeId e : t.inner_edges()) {
      const SubobjectView h(inner_horn(t, e), "Λ");
      const auto r = horn_check(h, t, e);
      CHECK_FALSE(r.ok());
      CHECK_FALSE(r.unfillable.empty());
      ++pairs;
    }
  }
  CHECK(pairs >= 5);
}

TEST_CASE("normality", "[dset][normal]") {
  for (const Tree& t : corpus(3, 3)) CHECK(normality_check(representable_view(t), 3).ok());
  const auto com = normality_at(NerveView(make_com(3)), Tree::corolla(2));
  REQUIRE(com.fixed.size() == 1);
  CHECK(com.fixed.front().second == std::vector<EdgeId>{0, 2, 1});
  CHECK(normality_check(NerveView(make_two_colour()), 3).ok());
  CHECK(normality_check(NerveView(make_ass(3)), 3).ok());  // Ass is Σ-free
  CHECK(normality_check(NerveView(make_category(3)), 3).ok());
}

TEST_CASE("tabulated sets reproduce the nerve", "[dset][tabulated]") {
  for (const auto& p : {make_com(3), make_category(3), make_two_colour()}) {
    const NerveView x(p);
    const TabulatedData d = tabulate(x, 3, 3, p.name);
    const TabulatedSet y = load_tabulated(d);
    std::size_t covered = 0;
    for (const Tree& t : corpus(3, 3)) {
      if (!y.evaluable(t)) continue;  // some face domain exceeds the truncation
      ++covered;
      CHECK(y.evaluate(t).size() == x.evaluate(t).size());
      const Tree u = oracle::shuffled_copy(t, 11);
      CHECK(y.evaluate(u).size() == x.evaluate(u).size());
      // names agree through restriction along every face
      for (const Face& f : faces(u)) {
        const Tree dom = domain(u, f);
        if (!x.evaluable(dom)) continue;
        const auto xs = x.evaluate(u);
        const auto ys = y.evaluate(u);
        for (std::size_t k = 0; k < xs.size(); ++k) {
          const std::string lhs = x.show(dom, x.restrict(u, f, xs[k]));
          // find the tabulated element with the same name
          for (const Dendrex& v : ys) {
            if (y.show(u, v) == x.show(u, xs[k])) CHECK(y.show(dom, y.restrict(u, f, v)) == lhs);
          }
        }
      }
    }
    CHECK(covered > 5);
    CHECK(segal_char_check(y, 3).ok());
    CHECK(inner_kan_check(y, 3).ok());
  }
}

TEST_CASE("tabulated mutants fail the Segal condition", "[dset][tabulated][segal]") {
  const NerveView x(make_category(3));
  const TabulatedData d = tabulate(x, 3, 1, "Cat2");
  const std::string l2 = canonicalize(Tree::linear(2)).code;
  const std::string l3 = canonicalize(Tree::linear(3)).code;
  const auto& tt = d.trees.at(l2);
  // a nondegenerate 2-simplex
  std::size_t k = 0;
  const TabulatedSet full(d);
  for (; k < tt.elements.size(); ++k) {
    if (!is_degenerate(full, tt.tree, {static_cast<std::int32_t>(k)})) break;
  }
  REQUIRE(k < tt.elements.size());
  const TabulatedSet del = load_tabulated(delete_element(d, l2, k));
  const auto r = segal_map(del, tt.tree);
  CHECK_FALSE(r.surjective);
  CHECK(r.missed.has_value());
  CHECK_FALSE(segal_char_check(del, 3).ok());

  const TabulatedSet dup = load_tabulated(duplicate_element(d, l3, 0));
  const auto r3 = segal_map(dup, Tree::linear(3));
  CHECK_FALSE(r3.injective);
  CHECK(r3.collision.has_value());
  CHECK_THROWS_AS(duplicate_element(d, l2, 0), InvalidArgument);
}

TEST_CASE("load_tabulated rejects non-functorial tables", "[dset][tabulated]") {
  const NerveView x(make_category(3));
  TabulatedData d = tabulate(x, 2, 1, "Cat2");
  auto& tt = d.trees.at(canonicalize(Tree::linear(2)).code);
  // point one face of one element at a different arrow
  auto& m = tt.faces.front().second;
  const std::size_t n_targets = d.trees.at(canonicalize(domain(tt.tree, tt.faces.front().first)).code).elements.size();
  m[0] = (m[0] + 1) % n_targets;
  CHECK_THROWS_AS(load_tabulated(d), ValidationError);
}

TEST_CASE("JSON round trips", "[io]") {
  for (const auto& p : {make_com(3), make_ass(3), make_category(3), make_two_colour()}) {
    const Json j = to_json(p);
    const ColouredOperad q = operad_from_json(parse_json_text(j.dump()));
    CHECK(to_json(q).dump() == j.dump());
    CHECK(validate_operad(q).ok());
  }
  const TabulatedData d = tabulate(NerveView(make_two_colour()), 2, 3, "Bin2");
  const Json jd = to_json(d);
  CHECK(to_json(dset_data_from_json(parse_json_text(jd.dump()))).dump() == jd.dump());

  const Tree t = parse_tree("r(a(x,y),b)");
  const auto res = certify_inner_anodyne(segal_core(t), representable(t));
  REQUIRE(res.certificate);
  const Json jc = to_json(*res.certificate);
  const Certificate c = certificate_from_json(parse_json_text(jc.dump()));
  CHECK(verify_certificate(c).ok);
  CHECK(to_json(c).dump() == jc.dump());

  CHECK_THROWS_AS(parse_json_text("{\"format\": "), ParseError);
  Json bad = jc;
  bad["format"] = "nope";
  CHECK_THROWS_AS(certificate_from_json(bad), ValidationError);
  Json bad2 = to_json(make_com(3));
  bad2["operations"][0]["output"] = "nope";
  CHECK_THROWS_AS(operad_from_json(bad2), ValidationError);
}

namespace {

// The value of a sieve map on an arbitrary arrow a: S -> T landing in A,
// forced through the maximal face `k` (a must factor through it).
Dendrex forced_value(const Subobject& a, const DendroidalSetView& x, const SieveMap& h, std::size_t k, const Arrow& arr) {
  const Tree& t = a.ambient();
  const Arrow inc = face_arrow(t, h.faces[k]);
  std::vector<EdgeId> lifted(arr.source.edge_count());
  for (EdgeId e = 0; e < arr.source.edge_count(); ++e) {
    lifted[e] = static_cast<EdgeId>(std::find(inc.map.begin(), inc.map.end(), arr.map[e]) - inc.map.begin());
  }
  return act(x, Arrow{arr.source, inc.source, lifted}, h.values[k]);
}

}  // namespace

TEST_CASE("sieve maps on face inclusions force consistent values on all arrows", "[dset][hom][property]") {
  // SieveMaps record values on the maximal faces only (monic part). Every
  // arrow into A, degenerate ones included, factors through a maximal face;
  // the forced value must not depend on the face chosen, and for the
  // restriction of a dendrex it must be the dendrex acted on by the arrow.
  std::vector<Tree> sources;
  for (const auto& k : enumerate_trees(3, 2)) sources.push_back(k.representative);
  std::size_t checked = 0;
  for (const auto& p : {make_ass(3), make_category(3), make_two_colour()}) {
    const NerveView x(p);
    for (const Tree& t : {parse_tree("r(a(b))"), parse_tree("r(a(x,y),b)"), parse_tree("r(a(b(c)))")}) {
      for (const Subobject& a : {segal_core(t), inner_horn(t, t.inner_edges().front())}) {
        for (const Dendrex& v : x.evaluate(t)) {
          const SieveMap h = restrict_to(a, x, v);
          for (const Tree& s : sources) {
            if (!x.evaluable(s)) continue;
            for (const auto& m : arrows_between(s, t)) {
              const Arrow arr{s, t, m};
              const Face img = image_face(arr);
              if (!a.member(img)) continue;
              const Dendrex direct = act(x, arr, v);
              for (std::size_t k = 0; k < h.faces.size(); ++k) {
                if (!factors_through(t, img, h.faces[k])) continue;
                CHECK(forced_value(a, x, h, k, arr) == direct);
                ++checked;
              }
            }
          }
        }
      }
    }
  }
  CHECK(checked > 1000);

  // every map out of a horn or core, restriction or not, is consistent
  std::size_t families = 0;
  for (const auto& p : {make_ass(3), make_category(3)}) {
    const NerveView x(p);
    for (const Tree& t : {parse_tree("r(a(b(c)))"), parse_tree("r(a(x,y),b)")}) {
      const Subobject a = inner_horn(t, t.inner_edges().front());
      for (const SieveMap& h : hom_from_subobject(a, x)) {
        ++families;
        for (const Tree& s : sources) {
          if (!x.evaluable(s)) continue;
          for (const auto& m : arrows_between(s, t)) {
            const Arrow arr{s, t, m};
            const Face img = image_face(arr);
            if (!a.member(img)) continue;
            std::optional<Dendrex> first;
            for (std::size_t k = 0; k < h.faces.size(); ++k) {
              if (!factors_through(t, img, h.faces[k])) continue;
              const Dendrex val = forced_value(a, x, h, k, arr);
              if (first) CHECK(val == *first);
              else first = val;
            }
            CHECK(first.has_value());
          }
        }
      }
    }
  }
  CHECK(families > 10);
}
