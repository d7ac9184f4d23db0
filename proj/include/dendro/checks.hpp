#pragma once

// Maps out of sieves and the checks built on them: the Segal map
// X(T) -> Hom(Sc[T], X), inner-horn filling, normality, and the underlying
// simplicial set.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dendro/arrow.hpp"
#include "dendro/dset.hpp"
#include "dendro/subobject.hpp"

namespace dendro {

// A natural transformation A -> X, A ⊆ Ω[T]. Monic part only: it is given by
// its values on the maximal faces of A (values elsewhere are forced by
// restriction, and on degenerate arrows by the splitting of degeneracies).
struct SieveMap {
  std::vector<Face> faces;      // maximal faces of A, in A's order
  std::vector<Dendrex> values;  // values[i] ∈ X(domain(T, faces[i]))

  friend bool operator==(const SieveMap&, const SieveMap&) = default;
  friend auto operator<=>(const SieveMap& a, const SieveMap& b) { return a.values <=> b.values; }
};

// Value of a sieve map at any member g of A.
inline Dendrex sieve_value(const Subobject& a, const DendroidalSetView& x, const SieveMap& m, const Face& g) {
  const Tree& t = a.ambient();
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    const Tree dom = domain(t, m.faces[i]);
    if (auto lift = factor_face(t, m.faces[i], g, dom)) return x.restrict(dom, *lift, m.values[i]);
  }
  throw InvalidArgument("face " + face_string(t, g) + " is not in the sieve");
}

// The restriction of x ∈ X(T) to A.
inline SieveMap restrict_to(const Subobject& a, const DendroidalSetView& x, const Dendrex& value) {
  SieveMap m;
  m.faces = a.maximal_faces();
  for (const Face& f : m.faces) m.values.push_back(x.restrict(a.ambient(), f, value));
  return m;
}

// Whether every face domain of A is evaluable. Maps out of A only read the
// maximal faces, but the agreement conditions restrict to common faces, and a
// truncated view is a presheaf only on face-closed sets of trees.
inline bool sieve_evaluable(const Subobject& a, const DendroidalSetView& x) {
  for (const Face& f : a.members()) {
    if (!x.evaluable(domain(a.ambient(), f))) return false;
  }
  return true;
}

// All natural transformations A -> X: values on the maximal faces of A,
// chosen in order and pruned by agreement on the maximal common faces of each
// pair (enough, since A is the union of the representables of its maximal
// faces and their pairwise intersections are again sieves generated by faces).
inline std::vector<SieveMap> hom_from_subobject(const Subobject& a, const DendroidalSetView& x) {
  const Tree& t = a.ambient();
  const auto maxf = a.maximal_faces();
  const std::size_t n = maxf.size();
  std::vector<Tree> doms;
  std::vector<std::vector<Dendrex>> cands;
  for (const Face& f : maxf) {
    doms.push_back(domain(t, f));
    cands.push_back(x.evaluate(doms.back()));
  }
  // constraints[j]: (i < j, lift in dom i, lift in dom j) for each maximal common face
  struct Constraint {
    std::size_t i;
    std::vector<std::vector<Dendrex>> left;   // left[c] = restriction of cands[i][c]
    std::vector<std::vector<Dendrex>> right;  // right[c] = restriction of cands[j][c]
  };
  std::vector<std::vector<Constraint>> constraints(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto below_j = faces_below(t, maxf[j]);
    for (std::size_t i = 0; i < j; ++i) {
      std::vector<Face> common;
      for (const Face& g : below_j) {
        if (factors_through(t, g, maxf[i])) common.push_back(g);
      }
      std::vector<Face> top;
      for (const Face& g : common) {
        bool dominated = false;
        for (const Face& h : common) {
          if (h != g && factors_through(t, g, h)) {
            dominated = true;
            break;
          }
        }
        if (!dominated) top.push_back(g);
      }
      if (top.empty()) continue;
      Constraint c{i, std::vector<std::vector<Dendrex>>(cands[i].size()), std::vector<std::vector<Dendrex>>(cands[j].size())};
      for (const Face& g : top) {
        const Face li = *factor_face(t, maxf[i], g, doms[i]);
        const Face lj = *factor_face(t, maxf[j], g, doms[j]);
        for (std::size_t k = 0; k < cands[i].size(); ++k) c.left[k].push_back(x.restrict(doms[i], li, cands[i][k]));
        for (std::size_t k = 0; k < cands[j].size(); ++k) c.right[k].push_back(x.restrict(doms[j], lj, cands[j][k]));
      }
      constraints[j].push_back(std::move(c));
    }
  }
  std::vector<SieveMap> out;
  std::vector<std::size_t> choice(n);
  std::function<void(std::size_t)> go = [&](std::size_t j) {
    if (j == n) {
      SieveMap m{maxf, {}};
      for (std::size_t k = 0; k < n; ++k) m.values.push_back(cands[k][choice[k]]);
      out.push_back(std::move(m));
      return;
    }
    for (std::size_t c = 0; c < cands[j].size(); ++c) {
      bool ok = true;
      for (const Constraint& con : constraints[j]) {
        if (con.left[choice[con.i]] != con.right[c]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      choice[j] = c;
      go(j + 1);
    }
  };
  go(0);
  return out;
}

// ---------------------------------------------------------------------------
// Segal map

struct SegalResult {
  Tree tree;
  std::size_t dendrices = 0;
  std::size_t core_maps = 0;
  bool injective = true;
  bool surjective = true;
  std::optional<std::pair<Dendrex, Dendrex>> collision;  // two dendrices with the same core restriction
  std::optional<SieveMap> missed;                        // a core family with no dendrex over it

  bool bijective() const { return injective && surjective; }
};

inline SegalResult segal_map(const DendroidalSetView& x, const Tree& t) {
  if (t.vertex_count() == 0) throw InvalidArgument("the Segal map needs a tree with at least one vertex");
  SegalResult r;
  r.tree = t;
  const Subobject core = segal_core(t);
  const auto xs = x.evaluate(t);
  const auto homs = hom_from_subobject(core, x);
  r.dendrices = xs.size();
  r.core_maps = homs.size();
  std::map<std::vector<Dendrex>, Dendrex> image;
  for (const Dendrex& v : xs) {
    auto fam = restrict_to(core, x, v).values;
    auto [it, fresh] = image.emplace(fam, v);
    if (!fresh && !r.collision) {
      r.injective = false;
      r.collision = std::pair(it->second, v);
    }
  }
  for (const SieveMap& h : homs) {
    if (!image.count(h.values)) {
      r.surjective = false;
      r.missed = h;
      break;
    }
  }
  return r;
}

struct SegalReport {
  std::string view;
  std::vector<SegalResult> results;  // every tree checked
  std::vector<std::string> skipped;  // trees the view cannot evaluate
  bool ok() const {
    return std::all_of(results.begin(), results.end(), [](const SegalResult& r) { return r.bijective(); });
  }
};

// Canonical trees with 1..max_vertices vertices and arities within the view's
// bound.
inline std::vector<Tree> check_trees(const DendroidalSetView& x, std::size_t max_vertices, std::size_t min_vertices = 1) {
  std::vector<Tree> out;
  for (const auto& key : enumerate_trees(max_vertices, x.max_arity())) {
    if (key.representative.vertex_count() >= min_vertices) out.push_back(key.representative);
  }
  return out;
}

inline SegalReport segal_char_check(const DendroidalSetView& x, std::size_t max_vertices) {
  SegalReport rep;
  rep.view = x.describe();
  for (const Tree& t : check_trees(x, max_vertices)) {
    if (!x.evaluable(t) || !sieve_evaluable(segal_core(t), x)) {
      rep.skipped.push_back(t.literal());
      continue;
    }
    rep.results.push_back(segal_map(x, t));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Inner horns

struct HornResult {
  Tree tree;
  EdgeId edge = 0;
  std::size_t horn_maps = 0;
  std::size_t fillable = 0;
  std::size_t max_fillers = 0;
  std::vector<SieveMap> unfillable;  // witnesses, capped
  bool unique() const { return max_fillers <= 1; }
  bool ok() const { return fillable == horn_maps; }
};

inline HornResult horn_check(const DendroidalSetView& x, const Tree& t, EdgeId e, std::size_t max_witnesses = 3) {
  HornResult r;
  r.tree = t;
  r.edge = e;
  const Subobject horn = inner_horn(t, e);
  std::map<std::vector<Dendrex>, std::size_t> fillers;
  for (const Dendrex& v : x.evaluate(t)) ++fillers[restrict_to(horn, x, v).values];
  for (const SieveMap& h : hom_from_subobject(horn, x)) {
    ++r.horn_maps;
    auto it = fillers.find(h.values);
    if (it == fillers.end()) {
      if (r.unfillable.size() < max_witnesses) r.unfillable.push_back(h);
      continue;
    }
    ++r.fillable;
    r.max_fillers = std::max(r.max_fillers, it->second);
  }
  return r;
}

struct InnerKanReport {
  std::string view;
  std::vector<HornResult> results;
  std::vector<std::pair<std::string, std::string>> skipped;  // (tree, edge) needing an unevaluable face
  bool ok() const {
    return std::all_of(results.begin(), results.end(), [](const HornResult& r) { return r.ok(); });
  }
  bool unique() const {
    return std::all_of(results.begin(), results.end(), [](const HornResult& r) { return r.unique(); });
  }
};

inline InnerKanReport inner_kan_check(const DendroidalSetView& x, std::size_t max_vertices) {
  InnerKanReport rep;
  rep.view = x.describe();
  for (const Tree& t : check_trees(x, max_vertices, 2)) {
    for (EdgeId e : t.inner_edges()) {
      if (!x.evaluable(t) || !sieve_evaluable(inner_horn(t, e), x)) {
        rep.skipped.emplace_back(t.literal(), t.name(e));
        continue;
      }
      rep.results.push_back(horn_check(x, t, e));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Normality: Aut(T) acts freely on the nondegenerate dendrices.

struct NormalityResult {
  Tree tree;
  std::size_t nondegenerate = 0;
  std::size_t automorphisms = 0;
  std::vector<std::pair<Dendrex, std::vector<EdgeId>>> fixed;  // (dendrex, non-identity automorphism fixing it)
  bool ok() const { return fixed.empty(); }
};

struct NormalityReport {
  std::string view;
  std::vector<NormalityResult> results;
  std::vector<std::string> skipped;
  bool ok() const {
    return std::all_of(results.begin(), results.end(), [](const NormalityResult& r) { return r.ok(); });
  }
};

inline NormalityResult normality_at(const DendroidalSetView& x, const Tree& t) {
  NormalityResult r;
  r.tree = t;
  const auto aut = automorphisms(t);
  r.automorphisms = aut.size();
  for (const Dendrex& v : x.evaluate(t)) {
    if (is_degenerate(x, t, v)) continue;
    ++r.nondegenerate;
    for (std::size_t k = 1; k < aut.size(); ++k) {  // aut[0] is the identity
      if (x.transport(t, t, aut[k], v) == v) {
        r.fixed.emplace_back(v, aut[k]);
        break;
      }
    }
  }
  return r;
}

inline NormalityReport normality_check(const DendroidalSetView& x, std::size_t max_vertices) {
  NormalityReport rep;
  rep.view = x.describe();
  for (const Tree& t : check_trees(x, max_vertices, 0)) {
    if (!x.evaluable(t)) {
      rep.skipped.push_back(t.literal());
      continue;
    }
    rep.results.push_back(normality_at(x, t));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Simplicial restriction i^*X: level n is X(linear(n)); faces and
// degeneracies are the actions of the coface/codegeneracy arrows between
// linear trees, with edge k of linear(n) playing the object k of [n].

struct SimplicialData {
  std::size_t max_n = 0;
  std::vector<std::vector<Dendrex>> levels;                       // levels[n] = X(linear(n))
  std::vector<std::vector<std::vector<std::size_t>>> face;        // face[n][i]: X_n -> X_{n-1}, n >= 1
  std::vector<std::vector<std::vector<std::size_t>>> degeneracy;  // degeneracy[n][i]: X_n -> X_{n+1}, n < max_n
  std::vector<std::size_t> nondegenerate;                         // per level
  std::vector<std::string> identity_failures;
  bool ok() const { return identity_failures.empty(); }
};

// d^i: linear(n-1) -> linear(n), missing the edge i.
inline Arrow coface(std::size_t n, std::size_t i) {
  const Tree s = Tree::linear(n - 1);
  const Tree t = Tree::linear(n);
  std::vector<EdgeId> m(n);
  for (std::size_t k = 0; k < n; ++k) m[k] = t.id(std::to_string(k < i ? k : k + 1));
  return make_arrow(s, t, std::move(m));
}

// s^i: linear(n+1) -> linear(n), hitting the edge i twice.
inline Arrow codegeneracy(std::size_t n, std::size_t i) {
  const Tree s = Tree::linear(n + 1);
  const Tree t = Tree::linear(n);
  std::vector<EdgeId> m(n + 2);
  for (std::size_t k = 0; k < n + 2; ++k) m[s.id(std::to_string(k))] = t.id(std::to_string(k <= i ? k : k - 1));
  return make_arrow(s, t, std::move(m));
}

inline SimplicialData simplicial_restriction(const DendroidalSetView& x, std::size_t max_n) {
  SimplicialData s;
  s.max_n = max_n;
  for (std::size_t n = 0; n <= max_n; ++n) s.levels.push_back(x.evaluate(Tree::linear(n)));
  s.face.resize(max_n + 1);
  s.degeneracy.resize(max_n + 1);
  for (std::size_t n = 0; n <= max_n; ++n) {
    if (n >= 1) {
      for (std::size_t i = 0; i <= n; ++i) {
        const Arrow d = coface(n, i);
        std::vector<std::size_t> m;
        for (const Dendrex& v : s.levels[n]) m.push_back(index_of(s.levels[n - 1], act(x, d, v)));
        s.face[n].push_back(std::move(m));
      }
    }
    if (n < max_n) {
      for (std::size_t i = 0; i <= n; ++i) {
        const Arrow sg = codegeneracy(n, i);
        std::vector<std::size_t> m;
        for (const Dendrex& v : s.levels[n]) m.push_back(index_of(s.levels[n + 1], act(x, sg, v)));
        s.degeneracy[n].push_back(std::move(m));
      }
    }
  }
  for (std::size_t n = 0; n <= max_n; ++n) {
    std::vector<bool> degenerate(s.levels[n].size(), false);
    if (n >= 1) {
      for (const auto& m : s.degeneracy[n - 1]) {
        for (std::size_t j : m) degenerate[j] = true;
      }
    }
    s.nondegenerate.push_back(static_cast<std::size_t>(std::count(degenerate.begin(), degenerate.end(), false)));
  }
  auto fail = [&](const std::string& what, std::size_t n, std::size_t i, std::size_t j) {
    s.identity_failures.push_back(what + " at level " + std::to_string(n) + " (i=" + std::to_string(i) +
                                  ", j=" + std::to_string(j) + ")");
  };
  // maps applied to element k: d(n,i)(k) = face[n][i][k], s(n,i)(k) = degeneracy[n][i][k]
  for (std::size_t n = 0; n <= max_n; ++n) {
    for (std::size_t k = 0; k < s.levels[n].size(); ++k) {
      // d_i d_j = d_{j-1} d_i (i < j), on X_n, n >= 2
      if (n >= 2) {
        for (std::size_t j = 1; j <= n; ++j) {
          for (std::size_t i = 0; i < j; ++i) {
            if (s.face[n - 1][i][s.face[n][j][k]] != s.face[n - 1][j - 1][s.face[n][i][k]]) fail("d_i d_j", n, i, j);
          }
        }
      }
      if (n < max_n) {
        for (std::size_t j = 0; j <= n; ++j) {
          const std::size_t up = s.degeneracy[n][j][k];  // in X_{n+1}
          for (std::size_t i = 0; i <= n + 1; ++i) {
            const std::size_t lhs = s.face[n + 1][i][up];
            if (i == j || i == j + 1) {
              if (lhs != k) fail("d_i s_j = id", n, i, j);
            } else if (i < j) {
              if (lhs != s.degeneracy[n - 1][j - 1][s.face[n][i][k]]) fail("d_i s_j = s_{j-1} d_i", n, i, j);
            } else {
              if (lhs != s.degeneracy[n - 1][j][s.face[n][i - 1][k]]) fail("d_i s_j = s_j d_{i-1}", n, i, j);
            }
          }
          if (n + 1 < max_n) {
            for (std::size_t i = 0; i <= j; ++i) {
              if (s.degeneracy[n + 1][i][up] != s.degeneracy[n + 1][j + 1][s.degeneracy[n][i][k]]) {
                fail("s_i s_j = s_{j+1} s_i", n, i, j);
              }
            }
          }
        }
      }
    }
  }
  return s;
}

}  // namespace dendro
