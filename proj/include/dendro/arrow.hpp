#pragma once

// General arrows of Ω, represented by their edge maps. An arrow S -> T is a
// map of the free operads Ω(S) -> Ω(T); it is determined by where it sends
// edges, and an edge map is an arrow iff each vertex of S goes either to an
// identity (unary vertices only) or to the unique operation of Ω(T) with the
// image inputs and output, i.e. a subtree of T with exactly those leaves.
//
// Faces remain the primary calculus (faces.hpp); this header adds the
// degeneracies and the normal form degeneracies -> iso -> face, which the
// dendroidal-set module uses for full presheaf functoriality.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/faces.hpp"
#include "dendro/tree.hpp"

namespace dendro {

struct Arrow {
  Tree source;
  Tree target;
  std::vector<EdgeId> map;  // indexed by source ids, values are target ids

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

// Vertex set of the operation of Ω(t) with output `out` and the given inputs:
// the vertices above `out` and not above any input. nullopt if there is no
// such operation. The empty mask means the identity (one input equal to out).
inline std::optional<EdgeMask> operation_region(const Tree& t, EdgeId out, std::span<const EdgeId> inputs) {
  if (inputs.size() == 1 && inputs[0] == out) return EdgeMask{0};
  EdgeMask wanted = 0;
  for (EdgeId e : inputs) {
    if (e >= t.edge_count() || has_bit(wanted, e)) return std::nullopt;
    wanted |= bit(e);
  }
  EdgeMask region = 0;
  EdgeMask found = 0;
  bool ok = true;
  std::function<void(EdgeId)> walk = [&](EdgeId e) {
    if (has_bit(wanted, e)) {
      found |= bit(e);
      return;
    }
    if (!t.has_vertex(e)) {
      ok = false;  // a leaf of the region that is not an input
      return;
    }
    region |= bit(e);
    for (EdgeId c : t.inputs(e)) walk(c);
  };
  if (has_bit(wanted, out)) return std::nullopt;
  walk(out);
  if (!ok || found != wanted || region == 0) return std::nullopt;
  return region;
}

inline bool is_arrow(const Tree& s, const Tree& t, std::span<const EdgeId> map) {
  if (map.size() != s.edge_count()) return false;
  for (EdgeId e : map) {
    if (e >= t.edge_count()) return false;
  }
  for (EdgeId v : s.vertices()) {
    std::vector<EdgeId> ins;
    for (EdgeId c : s.inputs(v)) ins.push_back(map[c]);
    if (!operation_region(t, map[v], ins)) return false;
  }
  return true;
}

inline Arrow make_arrow(Tree s, Tree t, std::vector<EdgeId> map) {
  if (!is_arrow(s, t, map)) throw InvalidArgument("edge map is not an arrow " + s.literal() + " -> " + t.literal());
  return Arrow{std::move(s), std::move(t), std::move(map)};
}

inline Arrow identity_arrow(const Tree& t) { return Arrow{t, t, identity_map(t.edge_count())}; }

// outer ∘ inner
inline Arrow compose(const Arrow& outer, const Arrow& inner) {
  if (!(inner.target == outer.source)) throw InvalidArgument("arrows are not composable");
  return Arrow{inner.source, outer.target, compose_maps(outer.map, inner.map)};
}

// The inclusion domain(t, f) -> t.
inline Arrow face_arrow(const Tree& t, const Face& f) {
  Tree d = domain(t, f);
  auto m = embed_ids(t, d);
  return Arrow{std::move(d), t, std::move(m)};
}

inline bool is_unary_vertex(const Tree& t, EdgeId v) {
  return v < t.edge_count() && t.has_vertex(v) && t.arity(v) == 1;
}

// t with the unary vertex on v removed: the edges v and its input c are
// identified under the name of v, which takes over c's vertex (if any).
inline Tree collapse(const Tree& t, EdgeId v) {
  if (!is_unary_vertex(t, v)) throw InvalidArgument("edge is not a unary vertex of " + t.literal());
  const EdgeId c = t.inputs(v)[0];
  std::function<TreeNode(EdgeId)> build = [&](EdgeId e) {
    const EdgeId src = e == v ? c : e;
    TreeNode n{t.name(e), t.has_vertex(src), {}};
    for (EdgeId i : t.inputs(src)) n.inputs.push_back(build(i));
    return n;
  };
  return Tree(build(t.root()));
}

// The degeneracy σ_v: t -> collapse(t, v).
inline Arrow degeneracy_arrow(const Tree& t, EdgeId v) {
  Tree target = collapse(t, v);
  const EdgeId c = t.inputs(v)[0];
  std::vector<EdgeId> m(t.edge_count());
  for (EdgeId e = 0; e < t.edge_count(); ++e) m[e] = target.id(t.name(e == c ? v : e));
  return Arrow{t, std::move(target), std::move(m)};
}

// A face s of t with domain(t, s) == collapse(t, v) and σ_v ∘ s = id.
inline Face section_face(const Tree& t, EdgeId v) {
  if (!is_unary_vertex(t, v)) throw InvalidArgument("edge is not a unary vertex of " + t.literal());
  const EdgeId c = t.inputs(v)[0];
  if (t.has_vertex(c)) return Face{t.vertex_mask(), bit(c), t.root()};
  const EdgeMask rest = t.vertex_mask() & ~bit(v);
  if (rest == 0) return edge_face(v);  // t is linear(1)
  return Face{rest, 0, v == t.root() ? c : t.root()};
}

// A fresh edge name derived from `base`.
inline std::string fresh_name(const Tree& t, const std::string& base) {
  for (std::size_t k = 0;; ++k) {
    std::string n = base + "_" + std::to_string(k);
    if (!t.find(n)) return n;
  }
}

// A tree s with a unary vertex inserted on edge e of t, and that vertex's
// edge (named like e), so that collapse(s, v) == t.
inline std::pair<Tree, EdgeId> insert_unary(const Tree& t, EdgeId e) {
  const std::string below = fresh_name(t, t.name(e));
  std::function<TreeNode(EdgeId)> build = [&](EdgeId x) {
    TreeNode n{t.name(x), t.has_vertex(x), {}};
    for (EdgeId i : t.inputs(x)) n.inputs.push_back(build(i));
    if (x == e) {
      TreeNode lower{below, n.vertex, std::move(n.inputs)};
      n.vertex = true;
      n.inputs = {std::move(lower)};
    }
    return n;
  };
  Tree s(build(t.root()));
  const EdgeId v = s.id(t.name(e));
  return {std::move(s), v};
}

// The face of the target through which a factors monically.
inline Face image_face(const Arrow& a) {
  EdgeMask region = 0;
  EdgeMask image = 0;
  for (EdgeId e : a.map) image |= bit(e);
  for (EdgeId v : a.source.vertices()) {
    std::vector<EdgeId> ins;
    for (EdgeId c : a.source.inputs(v)) ins.push_back(a.map[c]);
    const auto r = operation_region(a.target, a.map[v], ins);
    if (!r) throw InvalidArgument("edge map is not an arrow");
    region |= *r;
  }
  const EdgeId root = a.map[a.source.root()];
  if (region == 0) return edge_face(root);
  return Face{region, subtree_inner(a.target, region) & ~image, root};
}

// a = face ∘ iso ∘ σ_{k-1} ∘ ... ∘ σ_0, where σ_i collapses `collapsed[i]` in
// trees[i] (so trees[i+1] = collapse(trees[i], collapsed[i])) and iso maps
// trees.back() onto domain(target, face).
struct NormalForm {
  std::vector<Tree> trees;
  std::vector<EdgeId> collapsed;
  std::vector<EdgeId> iso;
  Face face;
};

inline NormalForm normal_form(const Arrow& a) {
  NormalForm nf;
  nf.face = image_face(a);
  Tree cur = a.source;
  std::vector<EdgeId> m = a.map;
  nf.trees.push_back(cur);
  for (;;) {
    std::optional<EdgeId> pick;
    for (EdgeId v : cur.vertices()) {
      if (cur.arity(v) == 1 && m[cur.inputs(v)[0]] == m[v]) {
        pick = v;
        break;
      }
    }
    if (!pick) break;
    Tree next = collapse(cur, *pick);
    std::vector<EdgeId> nm(next.edge_count());
    for (EdgeId e = 0; e < next.edge_count(); ++e) nm[e] = m[cur.id(next.name(e))];
    nf.collapsed.push_back(*pick);
    nf.trees.push_back(next);
    cur = std::move(next);
    m = std::move(nm);
  }
  const Tree d = domain(a.target, nf.face);
  nf.iso.resize(cur.edge_count());
  if (cur.edge_count() != d.edge_count()) throw Error("normal form: degeneracy part does not reach the image");
  for (EdgeId e = 0; e < cur.edge_count(); ++e) nf.iso[e] = d.id(a.target.name(m[e]));
  return nf;
}

// Every arrow s -> t, as edge maps in lexicographic order.
inline std::vector<std::vector<EdgeId>> arrows_between(const Tree& s, const Tree& t) {
  std::map<EdgeId, std::vector<std::pair<EdgeMask, std::vector<EdgeId>>>> ops_at;  // root -> (region, leaves)
  for (const Subtree& w : subtrees(t)) {
    if (w.is_edge()) continue;
    std::vector<EdgeId> leaves = bits_of(subtree_edges(t, w.vertices) & ~w.vertices & ~bit(w.edge));
    // the root edge is a vertex of W, so the mask above already excludes it
    ops_at[w.edge].emplace_back(w.vertices, std::move(leaves));
  }
  std::vector<std::vector<EdgeId>> out;
  std::vector<EdgeId> m(s.edge_count(), kNoEdge);
  const auto verts = s.vertices();  // ascending ids = preorder, parents first
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == verts.size()) {
      out.push_back(m);
      return;
    }
    const EdgeId v = verts[k];
    const auto ins = s.inputs(v);
    if (ins.size() == 1) {
      m[ins[0]] = m[v];
      go(k + 1);
    }
    auto it = ops_at.find(m[v]);
    if (it == ops_at.end()) return;
    for (const auto& [region, leaves] : it->second) {
      if (leaves.size() != ins.size()) continue;
      std::vector<EdgeId> perm = leaves;
      do {
        for (std::size_t i = 0; i < ins.size(); ++i) m[ins[i]] = perm[i];
        go(k + 1);
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    for (EdgeId c : ins) m[c] = kNoEdge;
  };
  for (EdgeId r = 0; r < t.edge_count(); ++r) {
    m[s.root()] = r;
    go(0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dendro
