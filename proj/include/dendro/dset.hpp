#pragma once

// Evaluatable finite dendroidal sets. A view evaluates X(T) for concretely
// named trees and acts by the generating arrows of Ω: faces, isomorphisms and
// degeneracies. act() extends this to every arrow through its normal form.
//
// Dendrices are opaque integer vectors whose meaning is fixed by the view and
// by the concrete tree they live on.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dendro/arrow.hpp"
#include "dendro/error.hpp"
#include "dendro/faces.hpp"
#include "dendro/operad.hpp"
#include "dendro/subobject.hpp"
#include "dendro/tree.hpp"

namespace dendro {

using Dendrex = std::vector<std::int32_t>;

class DendroidalSetView {
 public:
  virtual ~DendroidalSetView() = default;

  virtual std::string describe() const = 0;
  // Largest vertex arity the view can evaluate (bounds enumeration in checks).
  virtual std::size_t max_arity() const = 0;
  virtual bool evaluable(const Tree& t) const = 0;
  // X(t), sorted and without duplicates. Throws EvaluationError if !evaluable(t).
  virtual std::vector<Dendrex> evaluate(const Tree& t) const = 0;
  // f^*(x) ∈ X(domain(t, f)) for x ∈ X(t).
  virtual Dendrex restrict(const Tree& t, const Face& f, const Dendrex& x) const = 0;
  // φ^*(x) ∈ X(s) for an isomorphism φ: s -> t and x ∈ X(t).
  virtual Dendrex transport(const Tree& s, const Tree& t, std::span<const EdgeId> phi, const Dendrex& x) const = 0;
  // σ_v^*(y) ∈ X(t) for y ∈ X(collapse(t, v)).
  virtual Dendrex degenerate(const Tree& t, EdgeId v, const Dendrex& y) const = 0;
  // Human-readable rendering of a dendrex of X(t).
  virtual std::string show(const Tree& t, const Dendrex& x) const = 0;
};

// a^*(x) for an arbitrary arrow a: S -> T and x ∈ X(T), via
// a = face ∘ iso ∘ degeneracies.
inline Dendrex act(const DendroidalSetView& x, const Arrow& a, const Dendrex& value) {
  const NormalForm nf = normal_form(a);
  Dendrex y = x.restrict(a.target, nf.face, value);
  const Tree d = domain(a.target, nf.face);
  y = x.transport(nf.trees.back(), d, nf.iso, y);
  for (std::size_t i = nf.collapsed.size(); i-- > 0;) y = x.degenerate(nf.trees[i], nf.collapsed[i], y);
  return y;
}

inline bool is_degenerate(const DendroidalSetView& x, const Tree& t, const Dendrex& value) {
  for (EdgeId v : t.vertices()) {
    if (t.arity(v) != 1) continue;
    const Dendrex y = x.restrict(t, section_face(t, v), value);
    if (x.degenerate(t, v, y) == value) return true;
  }
  return false;
}

inline std::size_t index_of(const std::vector<Dendrex>& xs, const Dendrex& x) {
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.end() || *it != x) throw EvaluationError("dendrex is not an element of the evaluated set");
  return static_cast<std::size_t>(it - xs.begin());
}

// ---------------------------------------------------------------------------
// Nerve of a coloured operad. A dendrex of N(P)(t) stores the colour of each
// edge followed by the operation on each edge carrying a vertex (-1 on
// leaves). The operation on v has its inputs in the order of t.inputs(v).

class NerveView : public DendroidalSetView {
 public:
  explicit NerveView(ColouredOperad p) : p_(std::move(p)) {
    check_structure(p_);
    for (OpId a = 0; a < p_.operations.size(); ++a) {
      by_signature_[{p_.operations[a].output, p_.operations[a].arity()}].push_back(a);
    }
  }

  const ColouredOperad& operad() const { return p_; }

  std::string describe() const override { return "nerve(" + p_.name + ")"; }
  std::size_t max_arity() const override { return p_.max_arity; }
  bool evaluable(const Tree& t) const override { return t.max_arity() <= p_.max_arity; }

  std::vector<Dendrex> evaluate(const Tree& t) const override {
    require(t);
    const std::size_t n = t.edge_count();
    std::vector<Dendrex> out;
    Dendrex cur(2 * n, -1);
    const auto verts = t.vertices();
    std::function<void(std::size_t)> go = [&](std::size_t k) {
      if (k == verts.size()) {
        out.push_back(cur);
        return;
      }
      const EdgeId v = verts[k];
      auto it = by_signature_.find({static_cast<ColourId>(cur[v]), t.arity(v)});
      if (it == by_signature_.end()) return;
      for (OpId a : it->second) {
        cur[n + v] = static_cast<std::int32_t>(a);
        const auto ins = t.inputs(v);
        for (std::size_t i = 0; i < ins.size(); ++i) cur[ins[i]] = static_cast<std::int32_t>(p_.operations[a].inputs[i]);
        go(k + 1);
      }
      cur[n + v] = -1;
    };
    for (ColourId c = 0; c < p_.colours.size(); ++c) {
      cur[t.root()] = static_cast<std::int32_t>(c);
      go(0);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Dendrex restrict(const Tree& t, const Face& f, const Dendrex& x) const override {
    const Tree d = domain(t, f);
    if (!evaluable(d)) throw EvaluationError("face domain " + d.literal() + " exceeds the arity truncation of " + p_.name);
    const std::size_t tn = t.edge_count();
    const auto ids = embed_ids(t, d);
    Dendrex y(2 * d.edge_count(), -1);
    for (EdgeId e = 0; e < d.edge_count(); ++e) y[e] = x[ids[e]];
    for (EdgeId w : d.vertices()) {
      auto [op, slots] = composite(t, f.contracted, ids[w], x, tn);
      Perm sigma(d.arity(w));
      for (std::size_t i = 0; i < sigma.size(); ++i) {
        const EdgeId want = ids[d.inputs(w)[i]];
        sigma[i] = static_cast<std::size_t>(std::find(slots.begin(), slots.end(), want) - slots.begin());
      }
      y[d.edge_count() + w] = static_cast<std::int32_t>(act_op(op, sigma));
    }
    return y;
  }

  Dendrex transport(const Tree& s, const Tree& t, std::span<const EdgeId> phi, const Dendrex& x) const override {
    const std::size_t sn = s.edge_count();
    const std::size_t tn = t.edge_count();
    Dendrex y(2 * sn, -1);
    for (EdgeId e = 0; e < sn; ++e) y[e] = x[phi[e]];
    for (EdgeId v : s.vertices()) {
      const auto tin = t.inputs(phi[v]);
      Perm sigma(s.arity(v));
      for (std::size_t i = 0; i < sigma.size(); ++i) {
        sigma[i] = static_cast<std::size_t>(std::find(tin.begin(), tin.end(), phi[s.inputs(v)[i]]) - tin.begin());
      }
      y[sn + v] = static_cast<std::int32_t>(act_op(static_cast<OpId>(x[tn + phi[v]]), sigma));
    }
    return y;
  }

  Dendrex degenerate(const Tree& t, EdgeId v, const Dendrex& y) const override {
    const Tree u = collapse(t, v);
    const EdgeId c = t.inputs(v)[0];
    const std::size_t n = t.edge_count();
    const std::size_t un = u.edge_count();
    Dendrex x(2 * n, -1);
    for (EdgeId e = 0; e < n; ++e) {
      const EdgeId ue = u.id(t.name(e == c ? v : e));
      x[e] = y[ue];
      if (e == v) {
        x[n + e] = static_cast<std::int32_t>(p_.identities[static_cast<ColourId>(y[ue])]);
      } else if (t.has_vertex(e)) {
        x[n + e] = y[un + ue];
      }
    }
    return x;
  }

  std::string show(const Tree& t, const Dendrex& x) const override {
    const std::size_t n = t.edge_count();
    std::string s;
    for (EdgeId e = 0; e < n; ++e) {
      if (e) s += ",";
      s += t.name(e) + ":" + p_.colours[static_cast<ColourId>(x[e])];
      if (x[n + e] >= 0) s += "=" + p_.operations[static_cast<OpId>(x[n + e])].name;
    }
    return s;
  }

 private:
  void require(const Tree& t) const {
    if (!evaluable(t)) {
      throw EvaluationError("tree " + t.literal() + " has a vertex of arity above the truncation " +
                            std::to_string(p_.max_arity) + " of " + p_.name);
    }
  }

  OpId act_op(OpId a, const Perm& sigma) const {
    const auto r = p_.act(a, sigma);
    if (!r) throw EvaluationError(p_.name + ": action of " + p_.operations[a].name + " by " + perm_string(sigma) + " is undefined");
    return *r;
  }

  OpId compose_op(OpId a, std::size_t i, OpId b) const {
    const auto r = p_.compose(a, i, b);
    if (!r) {
      throw EvaluationError(p_.name + ": composite " + p_.operations[a].name + " ∘_" + std::to_string(i) + " " +
                            p_.operations[b].name + " is undefined");
    }
    return *r;
  }

  // The composite of the operations on the contraction class rooted at v,
  // with its inputs listed as edges of t. Smaller pieces are plugged in first
  // so that no intermediate composite exceeds the final arity.
  std::pair<OpId, std::vector<EdgeId>> composite(const Tree& t, EdgeMask contracted, EdgeId v, const Dendrex& x,
                                                 std::size_t tn) const {
    OpId op = static_cast<OpId>(x[tn + v]);
    std::vector<EdgeId> slots(t.inputs(v).begin(), t.inputs(v).end());
    std::vector<std::tuple<std::size_t, EdgeId, OpId, std::vector<EdgeId>>> subs;
    for (EdgeId c : t.inputs(v)) {
      if (!has_bit(contracted, c)) continue;
      auto [sop, sslots] = composite(t, contracted, c, x, tn);
      subs.emplace_back(sslots.size(), c, sop, std::move(sslots));
    }
    std::sort(subs.begin(), subs.end());
    for (auto& [k, c, sop, sslots] : subs) {
      const auto pos = static_cast<std::size_t>(std::find(slots.begin(), slots.end(), c) - slots.begin());
      op = compose_op(op, pos, sop);
      slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(pos));
      slots.insert(slots.begin() + static_cast<std::ptrdiff_t>(pos), sslots.begin(), sslots.end());
    }
    return {op, slots};
  }

  ColouredOperad p_;
  std::map<std::pair<ColourId, std::size_t>, std::vector<OpId>> by_signature_;
};

// ---------------------------------------------------------------------------
// A sieve A ⊆ Ω[T] as a dendroidal set: X(S) = arrows S -> T whose image face
// lies in A. Dendrices are edge maps into T. Ω[T] itself is the full sieve.

class SubobjectView : public DendroidalSetView {
 public:
  explicit SubobjectView(Subobject a, std::string label = "") : a_(std::move(a)), label_(std::move(label)) {
    if (!a_.is_downward_closed()) throw InvalidArgument("subobject view needs a downward-closed set of faces");
  }

  const Subobject& subobject() const { return a_; }

  std::string describe() const override {
    return label_.empty() ? "sieve of Ω[" + a_.ambient().literal() + "] with " + std::to_string(a_.size()) + " faces"
                          : label_;
  }
  std::size_t max_arity() const override { return std::max<std::size_t>(a_.ambient().max_arity(), 1); }
  bool evaluable(const Tree&) const override { return true; }

  std::vector<Dendrex> evaluate(const Tree& s) const override {
    const Tree& t = a_.ambient();
    std::vector<Dendrex> out;
    for (auto& m : arrows_between(s, t)) {
      if (!a_.member(image_face(Arrow{s, t, m}))) continue;
      out.emplace_back(m.begin(), m.end());
    }
    return out;  // arrows_between is sorted and the conversion is monotone
  }

  Dendrex restrict(const Tree& s, const Face& f, const Dendrex& x) const override {
    const Tree d = domain(s, f);
    Dendrex y(d.edge_count());
    for (EdgeId e = 0; e < d.edge_count(); ++e) y[e] = x[s.id(d.name(e))];
    return y;
  }

  Dendrex transport(const Tree& s, const Tree&, std::span<const EdgeId> phi, const Dendrex& x) const override {
    Dendrex y(s.edge_count());
    for (EdgeId e = 0; e < s.edge_count(); ++e) y[e] = x[phi[e]];
    return y;
  }

  Dendrex degenerate(const Tree& t, EdgeId v, const Dendrex& y) const override {
    const Tree u = collapse(t, v);
    const EdgeId c = t.inputs(v)[0];
    Dendrex x(t.edge_count());
    for (EdgeId e = 0; e < t.edge_count(); ++e) x[e] = y[u.id(t.name(e == c ? v : e))];
    return x;
  }

  std::string show(const Tree& s, const Dendrex& x) const override {
    std::string out = "{";
    for (EdgeId e = 0; e < s.edge_count(); ++e) {
      if (e) out += ",";
      out += s.name(e) + "->" + a_.ambient().name(static_cast<EdgeId>(x[e]));
    }
    return out + "}";
  }

 private:
  Subobject a_;
  std::string label_;
};

inline SubobjectView representable_view(const Tree& t) {
  return SubobjectView(representable(t), "Ω[" + t.literal() + "]");
}

// ---------------------------------------------------------------------------
// Tabulated dendroidal sets, stored on canonical representatives.
//
// For a canonical tree R with key κ_t: t -> R for any t ≅ R, the dendrex k of
// X(t) denotes κ_t^*(x_k), where x_0..x_{n-1} are the elements listed at R.
// Tables:
//   faces[g][k]        = j with g^*(x_k) = κ^*(y_j), κ the canonical key of
//                        domain(R, g) and y_j listed at its representative;
//   automorphisms[α][k] = j with α^*(x_k) = x_j;
//   degeneracies[v][j]  = k with σ_v^*(κ^*(y_j)) = x_k, κ the canonical key
//                        of collapse(R, v), y_j listed at its representative.

struct TabulatedTree {
  Tree tree;
  std::vector<std::string> elements;
  std::vector<std::pair<Face, std::vector<std::size_t>>> faces;                  // every elementary face
  std::vector<std::pair<std::vector<EdgeId>, std::vector<std::size_t>>> automorphisms;  // every automorphism
  std::vector<std::pair<EdgeId, std::vector<std::size_t>>> degeneracies;         // every unary vertex
};

struct TabulatedData {
  std::string name;
  std::size_t max_vertices = 0;
  std::size_t max_arity = 0;
  std::map<std::string, TabulatedTree> trees;  // keyed by canonical shape code
};

namespace detail {

inline std::string canonical_code(const Tree& t) { return canonicalize(t).code; }

// Structural checks: every tree is canonical and face-closed in the table,
// and every table has the right shape.
inline void check_tabulated_shape(const TabulatedData& d) {
  auto bad = [&](const std::string& why) { throw ValidationError("tabulated set '" + d.name + "': " + why); };
  for (const auto& [code, tt] : d.trees) {
    const auto key = canonicalize(tt.tree);
    if (key.code != code || !(key.representative == tt.tree)) bad("tree " + tt.tree.literal() + " is not canonical");
    if (tt.tree.vertex_count() > d.max_vertices || tt.tree.max_arity() > d.max_arity) {
      bad("tree " + tt.tree.literal() + " exceeds the declared bounds");
    }
    const std::size_t n = tt.elements.size();
    std::set<std::string> names(tt.elements.begin(), tt.elements.end());
    if (names.size() != n) bad("duplicate element names at " + tt.tree.literal());
    auto in_range = [&](const std::vector<std::size_t>& m, std::size_t len, std::size_t bound, const std::string& what) {
      if (m.size() != len) bad(what + " at " + tt.tree.literal() + " has the wrong length");
      for (std::size_t j : m) {
        if (j >= bound) bad(what + " at " + tt.tree.literal() + " points outside the target set");
      }
    };
    const auto elem = elementary_faces(tt.tree);
    if (tt.faces.size() != elem.size()) bad("face tables at " + tt.tree.literal() + " do not cover the elementary faces");
    for (const auto& [g, m] : tt.faces) {
      if (std::find(elem.begin(), elem.end(), g) == elem.end()) bad("non-elementary face in table at " + tt.tree.literal());
      const auto dom = canonical_code(domain(tt.tree, g));
      auto it = d.trees.find(dom);
      if (it == d.trees.end()) bad("face domain of " + face_string(tt.tree, g) + " at " + tt.tree.literal() + " is not tabulated");
      in_range(m, n, it->second.elements.size(), "face table " + face_string(tt.tree, g));
    }
    const auto aut = automorphisms(tt.tree);
    if (tt.automorphisms.size() != aut.size()) bad("automorphism tables at " + tt.tree.literal() + " are incomplete");
    for (const auto& [a, m] : tt.automorphisms) {
      if (std::find(aut.begin(), aut.end(), a) == aut.end()) bad("non-automorphism in table at " + tt.tree.literal());
      in_range(m, n, n, "automorphism table");
    }
    std::size_t unary = 0;
    for (EdgeId v : tt.tree.vertices()) unary += tt.tree.arity(v) == 1 ? 1 : 0;
    if (tt.degeneracies.size() != unary) bad("degeneracy tables at " + tt.tree.literal() + " are incomplete");
    for (const auto& [v, m] : tt.degeneracies) {
      if (!is_unary_vertex(tt.tree, v)) bad("degeneracy at a non-unary vertex of " + tt.tree.literal());
      auto it = d.trees.find(canonical_code(collapse(tt.tree, v)));
      if (it == d.trees.end()) bad("collapse of " + tt.tree.literal() + " is not tabulated");
      in_range(m, it->second.elements.size(), n, "degeneracy table");
    }
  }
}

}  // namespace detail

class TabulatedSet : public DendroidalSetView {
 public:
  // Checks the table shapes; the functoriality audit is separate
  // (functoriality_audit / load_tabulated).
  explicit TabulatedSet(TabulatedData d) : d_(std::move(d)) {
    detail::check_tabulated_shape(d_);
    for (const auto& [code, tt] : d_.trees) {
      auto& fi = face_index_[code];
      for (std::size_t k = 0; k < tt.faces.size(); ++k) fi[tt.faces[k].first] = k;
      auto& ai = aut_index_[code];
      for (std::size_t k = 0; k < tt.automorphisms.size(); ++k) ai[tt.automorphisms[k].first] = k;
    }
  }

  const TabulatedData& data() const { return d_; }

  std::string describe() const override { return "tabulated(" + d_.name + ")"; }
  std::size_t max_arity() const override { return d_.max_arity; }
  bool evaluable(const Tree& t) const override { return d_.trees.count(detail::canonical_code(t)) != 0; }

  std::vector<Dendrex> evaluate(const Tree& t) const override {
    const auto& tt = at(canonicalize(t).code, t);
    std::vector<Dendrex> out;
    for (std::size_t k = 0; k < tt.elements.size(); ++k) out.push_back({static_cast<std::int32_t>(k)});
    return out;
  }

  Dendrex restrict(const Tree& t, const Face& f, const Dendrex& x) const override {
    Tree cur = t;
    std::size_t value = element(x);
    for (const Face& g : decompose(t, f)) {
      const auto key = canonicalize(cur);
      const auto& tt = at(key.code, cur);
      const Face g_rep = map_face(g, key.relabel);
      const auto fit = face_index_.at(key.code).find(g_rep);
      if (fit == face_index_.at(key.code).end()) throw EvaluationError("missing face table");
      const std::size_t y = tt.faces[fit->second].second[value];
      const Tree dom_rep = domain(tt.tree, g_rep);
      const auto dom_key = canonicalize(dom_rep);
      const Tree next = domain(cur, g);
      const auto next_key = canonicalize(next);
      // ψ: next -> dom_rep by names through key.relabel
      std::vector<EdgeId> psi(next.edge_count());
      for (EdgeId e = 0; e < next.edge_count(); ++e) psi[e] = dom_rep.id(tt.tree.name(key.relabel[cur.id(next.name(e))]));
      // κ_{g'} ∘ ψ = α ∘ κ_next
      const auto alpha = compose_maps(compose_maps(dom_key.relabel, psi), invert_map(next_key.relabel));
      value = act_aut(next_key.code, alpha, y);
      cur = next;
    }
    return {static_cast<std::int32_t>(value)};
  }

  Dendrex transport(const Tree& s, const Tree& t, std::span<const EdgeId> phi, const Dendrex& x) const override {
    const auto ks = canonicalize(s);
    const auto kt = canonicalize(t);
    const auto alpha = compose_maps(compose_maps(kt.relabel, phi), invert_map(ks.relabel));
    return {static_cast<std::int32_t>(act_aut(kt.code, alpha, element(x)))};
  }

  Dendrex degenerate(const Tree& t, EdgeId v, const Dendrex& y) const override {
    const Tree u = collapse(t, v);
    const auto kt = canonicalize(t);
    const auto& tt = at(kt.code, t);
    const EdgeId rv = kt.relabel[v];
    const Tree ru = collapse(tt.tree, rv);
    std::vector<EdgeId> chi(u.edge_count());  // u -> ru by names through κ_t
    for (EdgeId e = 0; e < u.edge_count(); ++e) chi[e] = ru.id(tt.tree.name(kt.relabel[t.id(u.name(e))]));
    const Dendrex w = transport(ru, u, invert_map(chi), y);
    for (const auto& [dv, m] : tt.degeneracies) {
      if (dv == rv) return {static_cast<std::int32_t>(m[element(w)])};
    }
    throw EvaluationError("missing degeneracy table at " + tt.tree.literal());
  }

  std::string show(const Tree& t, const Dendrex& x) const override {
    return at(canonicalize(t).code, t).elements[element(x)];
  }

 private:
  static std::size_t element(const Dendrex& x) { return static_cast<std::size_t>(x.at(0)); }

  const TabulatedTree& at(const std::string& code, const Tree& t) const {
    auto it = d_.trees.find(code);
    if (it == d_.trees.end()) throw EvaluationError("tree " + t.literal() + " is not tabulated in " + d_.name);
    return it->second;
  }

  std::size_t act_aut(const std::string& code, const std::vector<EdgeId>& alpha, std::size_t k) const {
    const auto& idx = aut_index_.at(code);
    auto it = idx.find(alpha);
    if (it == idx.end()) throw EvaluationError("missing automorphism table");
    return d_.trees.at(code).automorphisms[it->second].second[k];
  }

  TabulatedData d_;
  std::map<std::string, std::map<Face, std::size_t>> face_index_;
  std::map<std::string, std::map<std::vector<EdgeId>, std::size_t>> aut_index_;
};

// Trees a tabulation over (max_vertices, max_arity) covers: canonical trees
// within the bounds all of whose face domains stay within them and are
// evaluable by x.
inline std::vector<Tree> tabulation_trees(const DendroidalSetView& x, std::size_t max_vertices, std::size_t max_arity) {
  std::vector<Tree> out;
  for (const auto& key : enumerate_trees(max_vertices, max_arity)) {
    const Tree& t = key.representative;
    bool ok = true;
    for (const Face& f : faces(t)) {
      const Tree d = domain(t, f);
      if (d.max_arity() > max_arity || !x.evaluable(d)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(t);
  }
  return out;
}

// Tabulates x on the canonical trees within the bounds (see
// tabulation_trees). Element names are x's renderings.
inline TabulatedData tabulate(const DendroidalSetView& x, std::size_t max_vertices, std::size_t max_arity,
                              std::string name) {
  TabulatedData d;
  d.name = std::move(name);
  d.max_vertices = max_vertices;
  d.max_arity = max_arity;
  std::map<std::string, std::vector<Dendrex>> values;
  for (const Tree& t : tabulation_trees(x, max_vertices, max_arity)) {
    const auto code = canonicalize(t).code;
    values[code] = x.evaluate(t);
    TabulatedTree tt;
    tt.tree = t;
    for (const Dendrex& v : values[code]) tt.elements.push_back(x.show(t, v));
    d.trees[code] = std::move(tt);
  }
  // an element y of X(u), u = dom or collapse, as an index at u's representative
  auto canonical_index = [&](const Tree& u, const Dendrex& y) {
    const auto k = canonicalize(u);
    const Dendrex rep = x.transport(k.representative, u, invert_map(k.relabel), y);
    return index_of(values.at(k.code), rep);
  };
  for (auto& [code, tt] : d.trees) {
    const Tree& t = tt.tree;
    const auto& xs = values.at(code);
    for (const Face& g : elementary_faces(t)) {
      const Tree dom = domain(t, g);
      std::vector<std::size_t> m;
      for (const Dendrex& v : xs) m.push_back(canonical_index(dom, x.restrict(t, g, v)));
      tt.faces.emplace_back(g, std::move(m));
    }
    for (const auto& a : automorphisms(t)) {
      std::vector<std::size_t> m;
      for (const Dendrex& v : xs) m.push_back(index_of(xs, x.transport(t, t, a, v)));
      tt.automorphisms.emplace_back(a, std::move(m));
    }
    for (EdgeId v : t.vertices()) {
      if (t.arity(v) != 1) continue;
      const Tree u = collapse(t, v);
      const auto ku = canonicalize(u);
      std::vector<std::size_t> m;
      for (const Dendrex& y : values.at(ku.code)) {
        const Dendrex w = x.transport(u, ku.representative, ku.relabel, y);
        m.push_back(index_of(xs, x.degenerate(t, v, w)));
      }
      tt.degeneracies.emplace_back(v, std::move(m));
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Functoriality audit: for every canonical tree W in `trees`, every pair of
// composable generating arrows a: U -> V, b: V -> W (elementary faces,
// automorphisms, degeneracies whose source is evaluable), and every x ∈ X(W):
// a^*(b^*(x)) = (b∘a)^*(x).

struct AuditFailure {
  std::string tree;
  std::string first;   // b
  std::string second;  // a
  std::string element;
  std::string detail;
};

struct AuditReport {
  std::size_t pairs_checked = 0;
  std::vector<AuditFailure> failures;
  bool ok() const { return failures.empty(); }
};

inline std::vector<std::pair<Arrow, std::string>> generating_arrows_into(const DendroidalSetView& x, const Tree& w,
                                                                         std::size_t max_vertices) {
  std::vector<std::pair<Arrow, std::string>> out;
  for (const auto& a : automorphisms(w)) {
    std::string label = "aut[";
    for (std::size_t i = 0; i < a.size(); ++i) label += (i ? "," : "") + w.name(a[i]);
    out.emplace_back(Arrow{w, w, a}, label + "]");
  }
  for (const Face& g : elementary_faces(w)) out.emplace_back(face_arrow(w, g), "face " + face_string(w, g));
  if (w.vertex_count() < max_vertices) {
    for (EdgeId e = 0; e < w.edge_count(); ++e) {
      auto [s, v] = insert_unary(w, e);
      if (!x.evaluable(s)) continue;
      out.emplace_back(degeneracy_arrow(s, v), "degeneracy at " + w.name(e));
    }
  }
  return out;
}

inline AuditReport functoriality_audit(const DendroidalSetView& x, const std::vector<Tree>& trees,
                                       std::size_t max_vertices, std::size_t max_failures = 20) {
  AuditReport rep;
  for (const Tree& w : trees) {
    if (!x.evaluable(w)) continue;
    const auto xs = x.evaluate(w);
    for (const auto& [b, bl] : generating_arrows_into(x, w, max_vertices)) {
      std::vector<Dendrex> after_b;
      for (const Dendrex& v : xs) after_b.push_back(act(x, b, v));
      for (const auto& [a, al] : generating_arrows_into(x, b.source, max_vertices)) {
        if (!x.evaluable(a.source)) continue;
        const Arrow ba = compose(b, a);
        ++rep.pairs_checked;
        for (std::size_t k = 0; k < xs.size(); ++k) {
          const Dendrex lhs = act(x, a, after_b[k]);
          const Dendrex rhs = act(x, ba, xs[k]);
          if (lhs != rhs) {
            if (rep.failures.size() < max_failures) {
              rep.failures.push_back({w.literal(), bl, al, x.show(w, xs[k]),
                                      "stepwise gives " + x.show(a.source, lhs) + ", composite gives " +
                                          x.show(a.source, rhs)});
            }
            break;
          }
        }
      }
    }
  }
  return rep;
}

inline std::vector<Tree> tabulated_trees(const TabulatedData& d) {
  std::vector<Tree> out;
  for (const auto& [code, tt] : d.trees) out.push_back(tt.tree);
  std::stable_sort(out.begin(), out.end(), [](const Tree& a, const Tree& b) {
    return std::pair(a.vertex_count(), canonicalize(a).code) < std::pair(b.vertex_count(), canonicalize(b).code);
  });
  return out;
}

// Builds the view and rejects tables that are not functorial.
inline TabulatedSet load_tabulated(TabulatedData d) {
  TabulatedSet x(std::move(d));
  const auto rep = functoriality_audit(x, tabulated_trees(x.data()), x.data().max_vertices, 1);
  if (!rep.ok()) {
    const auto& f = rep.failures.front();
    throw ValidationError("tabulated set '" + x.data().name + "' is not functorial at " + f.tree + ": " + f.first +
                          " then " + f.second + " on " + f.element + ": " + f.detail);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Mutations of tabulated sets (used to exercise the checks)

// Removes the elements listed by `doomed` (per tree code) and renumbers tables.
inline TabulatedData remove_elements(const TabulatedData& d, const std::map<std::string, std::set<std::size_t>>& doomed) {
  TabulatedData out = d;
  std::map<std::string, std::vector<std::size_t>> renumber;  // old -> new, or npos
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  for (const auto& [code, tt] : d.trees) {
    auto& r = renumber[code];
    const auto it = doomed.find(code);
    std::size_t next = 0;
    for (std::size_t k = 0; k < tt.elements.size(); ++k) {
      r.push_back(it != doomed.end() && it->second.count(k) ? npos : next++);
    }
  }
  for (auto& [code, tt] : out.trees) {
    const auto& r = renumber.at(code);
    auto keep = [&](auto& vec) {
      std::remove_reference_t<decltype(vec)> kept;
      for (std::size_t k = 0; k < vec.size(); ++k) {
        if (r[k] != npos) kept.push_back(vec[k]);
      }
      vec = std::move(kept);
    };
    keep(tt.elements);
    for (auto& [g, m] : tt.faces) {
      keep(m);
      const auto& rd = renumber.at(detail::canonical_code(domain(tt.tree, g)));
      for (auto& j : m) {
        if (rd[j] == npos) throw InvalidArgument("removal is not closed upward under faces");
        j = rd[j];
      }
    }
    for (auto& [a, m] : tt.automorphisms) {
      keep(m);
      for (auto& j : m) {
        if (r[j] == npos) throw InvalidArgument("removal is not closed under automorphisms");
        j = r[j];
      }
    }
    for (auto& [v, m] : tt.degeneracies) {
      const auto& ru = renumber.at(detail::canonical_code(collapse(tt.tree, v)));
      std::vector<std::size_t> kept;
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (ru[j] == npos) continue;
        if (r[m[j]] == npos) throw InvalidArgument("removal deletes a degenerate element");
        kept.push_back(r[m[j]]);
      }
      m = std::move(kept);
    }
  }
  return out;
}

// Deletes the nondegenerate element k at the canonical tree `code`, together
// with its automorphism orbit and everything whose faces reach a deleted
// element, so that the result is again a dendroidal set.
inline TabulatedData delete_element(const TabulatedData& d, const std::string& code, std::size_t k) {
  const auto& tt = d.trees.at(code);
  for (const auto& [v, m] : tt.degeneracies) {
    if (std::find(m.begin(), m.end(), k) != m.end()) throw InvalidArgument("cannot delete a degenerate element");
  }
  std::map<std::string, std::set<std::size_t>> doomed;
  for (const auto& [a, m] : tt.automorphisms) doomed[code].insert(m[k]);
  std::vector<const TabulatedTree*> order;
  for (const auto& [c, t] : d.trees) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return a->tree.vertex_count() < b->tree.vertex_count(); });
  for (const TabulatedTree* t : order) {
    const auto c = canonicalize(t->tree).code;
    for (std::size_t j = 0; j < t->elements.size(); ++j) {
      for (const auto& [g, m] : t->faces) {
        const auto dc = detail::canonical_code(domain(t->tree, g));
        auto it = doomed.find(dc);
        if (it != doomed.end() && it->second.count(m[j])) {
          doomed[c].insert(j);
          break;
        }
      }
    }
  }
  TabulatedData out = remove_elements(d, doomed);
  out.name = d.name + "-del";
  return out;
}

// Adds a copy x' of element k (and of its automorphism orbit) at a tree of
// maximal size, with the same faces as the original.
inline TabulatedData duplicate_element(const TabulatedData& d, const std::string& code, std::size_t k) {
  TabulatedData out = d;
  out.name = d.name + "-dup";
  auto& tt = out.trees.at(code);
  if (tt.tree.vertex_count() != d.max_vertices) {
    throw InvalidArgument("duplication is only supported at trees of the maximal size");
  }
  std::set<std::size_t> orbit;
  for (const auto& [a, m] : tt.automorphisms) orbit.insert(m[k]);
  std::map<std::size_t, std::size_t> copy_of;
  for (std::size_t j : orbit) {
    copy_of[j] = tt.elements.size();
    tt.elements.push_back(tt.elements[j] + "'");
  }
  for (auto& [g, m] : tt.faces) {
    for (std::size_t j : orbit) m.push_back(m[j]);
  }
  for (auto& [a, m] : tt.automorphisms) {
    for (std::size_t j : orbit) m.push_back(copy_of.at(m[j]));
  }
  return out;
}

}  // namespace dendro
