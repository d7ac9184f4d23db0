#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/tree.hpp"

namespace dendro {

// A subtree of T: a single edge (vertices == 0) or a connected nonempty set
// of vertices together with every edge incident to them.
struct Subtree {
  EdgeMask vertices = 0;
  EdgeId edge = 0;  // the edge of an η-subtree; the root edge otherwise

  bool is_edge() const { return vertices == 0; }
  friend auto operator<=>(const Subtree&, const Subtree&) = default;
};

// A monomorphism F/D -> T, up to isomorphism of its domain: a subtree F of T
// and a set D of inner edges of F to contract.
struct Face {
  EdgeMask vertices = 0;    // vertex set of F (empty for an η-face)
  EdgeMask contracted = 0;  // D
  EdgeId edge = 0;          // the edge of an η-face; the root edge of F otherwise

  bool is_edge() const { return vertices == 0; }
  Subtree subtree() const { return {vertices, edge}; }

  friend bool operator==(const Face&, const Face&) = default;
  friend std::strong_ordering operator<=>(const Face& a, const Face& b) {
    return std::tuple(popcount(a.vertices), a.vertices, a.contracted, a.edge) <=>
           std::tuple(popcount(b.vertices), b.vertices, b.contracted, b.edge);
  }
};

// ---------------------------------------------------------------------------
// Subtree geometry

// Lowest vertex of W, i.e. the one whose output is not an input of W.
inline EdgeId root_of(const Tree& t, EdgeMask w) {
  for (EdgeId v : bits_of(w)) {
    EdgeId p = t.parent(v);
    if (p == kNoEdge || !has_bit(w, p)) return v;
  }
  throw InvalidArgument("empty vertex set has no root");
}

inline bool is_connected(const Tree& t, EdgeMask w) {
  if (w == 0 || (w & ~t.vertex_mask()) != 0) return false;
  int roots = 0;
  for (EdgeId v : bits_of(w)) {
    EdgeId p = t.parent(v);
    if (p == kNoEdge || !has_bit(w, p)) ++roots;
  }
  return roots == 1;
}

// Edges incident to the vertices of W.
inline EdgeMask subtree_edges(const Tree& t, EdgeMask w) {
  EdgeMask m = w;
  for (EdgeId v : bits_of(w)) {
    for (EdgeId i : t.inputs(v)) m |= bit(i);
  }
  return m;
}

// Edges joining two vertices of W.
inline EdgeMask subtree_inner(const Tree& t, EdgeMask w) {
  EdgeMask m = 0;
  for (EdgeId v : bits_of(w)) {
    for (EdgeId i : t.inputs(v)) {
      if (has_bit(w, i)) m |= bit(i);
    }
  }
  return m;
}

inline EdgeMask subtree_edges(const Tree& t, const Subtree& s) {
  return s.is_edge() ? bit(s.edge) : subtree_edges(t, s.vertices);
}

// Edges of the domain F/D.
inline EdgeMask face_edges(const Tree& t, const Face& f) {
  return f.is_edge() ? bit(f.edge) : subtree_edges(t, f.vertices) & ~f.contracted;
}

inline std::size_t codimension(const Tree& t, const Face& f) {
  return t.vertex_count() - static_cast<std::size_t>(popcount(f.vertices)) +
         static_cast<std::size_t>(popcount(f.contracted));
}

inline Face identity_face(const Tree& t) {
  if (t.vertex_count() == 0) return Face{0, 0, t.root()};
  return Face{t.vertex_mask(), 0, t.root()};
}

inline bool is_identity(const Tree& t, const Face& f) { return f == identity_face(t); }

inline Face edge_face(EdgeId e) { return Face{0, 0, e}; }

// Human-readable form: "{r,a}/{a}" for a vertex face, "|e|" for an η-face.
inline std::string face_string(const Tree& t, const Face& f) {
  if (f.is_edge()) return "|" + t.name(f.edge) + "|";
  auto names = [&](EdgeMask m) {
    std::string s = "{";
    bool first = true;
    for (EdgeId e : bits_of(m)) {
      if (!first) s += ',';
      s += t.name(e);
      first = false;
    }
    return s + "}";
  };
  std::string s = names(f.vertices);
  if (f.contracted != 0) s += "/" + names(f.contracted);
  return s;
}

inline Face make_face(const Tree& t, EdgeMask vertices, EdgeMask contracted) {
  return Face{vertices, contracted, root_of(t, vertices)};
}

inline bool is_valid_face(const Tree& t, const Face& f) {
  if (f.is_edge()) return f.contracted == 0 && f.edge < t.edge_count();
  if (!is_connected(t, f.vertices)) return false;
  if (f.edge != root_of(t, f.vertices)) return false;
  return (f.contracted & ~subtree_inner(t, f.vertices)) == 0;
}

// ---------------------------------------------------------------------------
// Enumeration

inline std::vector<Subtree> subtrees(const Tree& t) {
  std::vector<Subtree> out;
  for (EdgeId e = 0; e < t.edge_count(); ++e) out.push_back(Subtree{0, e});
  // Connected vertex sets rooted at v: v plus, for each input vertex, either
  // nothing or a connected set rooted there.
  std::function<std::vector<EdgeMask>(EdgeId)> rooted = [&](EdgeId v) {
    std::vector<EdgeMask> acc{bit(v)};
    for (EdgeId c : t.inputs(v)) {
      if (!t.has_vertex(c)) continue;
      auto sub = rooted(c);
      std::vector<EdgeMask> next = acc;
      for (EdgeMask a : acc) {
        for (EdgeMask s : sub) next.push_back(a | s);
      }
      acc = std::move(next);
    }
    return acc;
  };
  for (EdgeId v : t.vertices()) {
    for (EdgeMask w : rooted(v)) out.push_back(Subtree{w, v});
  }
  std::sort(out.begin(), out.end(), [](const Subtree& a, const Subtree& b) {
    return std::tuple(popcount(a.vertices), a.vertices, a.edge) <
           std::tuple(popcount(b.vertices), b.vertices, b.edge);
  });
  return out;
}

// All faces of t, sorted; includes the identity.
inline std::vector<Face> faces(const Tree& t) {
  std::vector<Face> out;
  for (const Subtree& s : subtrees(t)) {
    if (s.is_edge()) {
      out.push_back(edge_face(s.edge));
      continue;
    }
    const EdgeMask inner = subtree_inner(t, s.vertices);
    // every submask of inner
    for (EdgeMask d = inner;; d = (d - 1) & inner) {
      out.push_back(Face{s.vertices, d, s.edge});
      if (d == 0) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Vertices of W that can be pruned by one external face: those adjacent to
// exactly one other vertex of W (top vertices, and a root vertex with a
// single inner edge). Only meaningful when |W| >= 2.
inline std::vector<EdgeId> prunable_vertices(const Tree& t, EdgeMask w) {
  std::vector<EdgeId> out;
  for (EdgeId v : bits_of(w)) {
    int degree = 0;
    EdgeId p = t.parent(v);
    if (p != kNoEdge && has_bit(w, p)) ++degree;
    for (EdgeId i : t.inputs(v)) {
      if (has_bit(w, i)) ++degree;
    }
    if (degree == 1) out.push_back(v);
  }
  return out;
}

struct Codim1Faces {
  std::vector<Face> internal;
  std::vector<Face> external;
};

inline Codim1Faces classify_codim1(const Tree& t) {
  Codim1Faces out;
  const EdgeMask all = t.vertex_mask();
  if (t.vertex_count() == 0) return out;
  for (EdgeId e : t.inner_edges()) out.internal.push_back(Face{all, bit(e), t.root()});
  if (t.vertex_count() == 1) {
    for (EdgeId e = 0; e < t.edge_count(); ++e) out.external.push_back(edge_face(e));
  } else {
    for (EdgeId v : prunable_vertices(t, all)) out.external.push_back(make_face(t, all & ~bit(v), 0));
  }
  std::sort(out.external.begin(), out.external.end());
  return out;
}

inline std::vector<Face> elementary_faces(const Tree& t) {
  auto c = classify_codim1(t);
  std::vector<Face> out = c.internal;
  out.insert(out.end(), c.external.begin(), c.external.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Domains

// The tree F/D, with edge names inherited from t. A contracted vertex class
// is named by its output edge.
inline Tree domain(const Tree& t, const Face& f) {
  if (!is_valid_face(t, f)) throw InvalidArgument("not a face of " + t.literal());
  if (f.is_edge()) return Tree::eta(t.name(f.edge));
  std::function<void(EdgeId, TreeNode&)> expand;
  std::function<TreeNode(EdgeId)> edge_node = [&](EdgeId e) {
    TreeNode n{t.name(e), false, {}};
    if (has_bit(f.vertices, e)) {
      n.vertex = true;
      expand(e, n);
    }
    return n;
  };
  expand = [&](EdgeId v, TreeNode& n) {
    for (EdgeId i : t.inputs(v)) {
      if (has_bit(f.contracted, i)) {
        expand(i, n);
      } else {
        n.inputs.push_back(edge_node(i));
      }
    }
  };
  return Tree(edge_node(f.edge));
}

// ids in t of the edges of `sub`, matched by name.
inline std::vector<EdgeId> embed_ids(const Tree& t, const Tree& sub) {
  std::vector<EdgeId> m(sub.edge_count());
  for (EdgeId e = 0; e < sub.edge_count(); ++e) m[e] = t.id(sub.name(e));
  return m;
}

// Translates a mask over `from`'s ids to `to`'s ids, matching by name.
inline EdgeMask embed_mask(const Tree& to, const Tree& from, EdgeMask m) {
  EdgeMask out = 0;
  for (EdgeId e : bits_of(m)) out |= bit(to.id(from.name(e)));
  return out;
}

// Image of a face of s under an isomorphism phi: s -> t (edge map by s ids).
inline Face map_face(const Face& f, std::span<const EdgeId> phi) {
  auto map_mask = [&](EdgeMask m) {
    EdgeMask out = 0;
    for (EdgeId e : bits_of(m)) out |= bit(phi[e]);
    return out;
  };
  return Face{map_mask(f.vertices), map_mask(f.contracted), phi[f.edge]};
}

// The D-class of each vertex of F: the vertex of F/D it is collapsed into,
// named by the output edge of the class.
inline EdgeId class_of(const Tree& t, const Face& f, EdgeId v) {
  while (has_bit(f.contracted, v)) v = t.parent(v);
  return v;
}

// ---------------------------------------------------------------------------
// Composition and factorization

// Composite of `outer` (a face of t) with `inner` (a face of domain(t, outer)).
inline Face compose_faces(const Tree& t, const Face& outer, const Face& inner, const Tree& outer_domain) {
  if (!is_valid_face(outer_domain, inner)) {
    throw InvalidArgument("inner face is not a face of the domain " + outer_domain.literal());
  }
  const auto ids = embed_ids(t, outer_domain);
  if (inner.is_edge()) return edge_face(ids[inner.edge]);
  EdgeMask classes = 0;
  for (EdgeId v : bits_of(inner.vertices)) classes |= bit(ids[v]);
  // lift: all vertices of F whose class is among the chosen classes
  EdgeMask w = 0;
  for (EdgeId v : bits_of(outer.vertices)) {
    if (has_bit(classes, class_of(t, outer, v))) w |= bit(v);
  }
  EdgeMask d = outer.contracted & subtree_inner(t, w);
  for (EdgeId e : bits_of(inner.contracted)) d |= bit(ids[e]);
  return make_face(t, w, d);
}

inline Face compose_faces(const Tree& t, const Face& outer, const Face& inner) {
  return compose_faces(t, outer, inner, domain(t, outer));
}

// Closed form of "g factors through f" (g <= f in the face poset of t):
// W_g is a union of D_f-classes of W_f and every D_f-edge inside W_g is
// contracted in g.
inline bool factors_through(const Tree& t, const Face& g, const Face& f) {
  if (f.is_edge()) return g == f;
  if (g.is_edge()) return has_bit(face_edges(t, f), g.edge);
  if ((g.vertices & ~f.vertices) != 0) return false;
  for (EdgeId d : bits_of(f.contracted)) {
    const bool below_in = has_bit(g.vertices, t.parent(d));
    const bool above_in = has_bit(g.vertices, d);
    if (below_in != above_in) return false;  // cuts a class
    if (below_in && !has_bit(g.contracted, d)) return false;
  }
  return true;
}

// g expressed as a face of domain(t, f), or nullopt if g does not factor
// through f.
inline std::optional<Face> factor_face(const Tree& t, const Face& f, const Face& g, const Tree& f_domain) {
  if (!factors_through(t, g, f)) return std::nullopt;
  if (g.is_edge()) return edge_face(f_domain.id(t.name(g.edge)));
  if (f.is_edge()) return std::nullopt;
  EdgeMask w = 0;
  for (EdgeId v : bits_of(g.vertices)) w |= bit(f_domain.id(t.name(class_of(t, f, v))));
  EdgeMask d = 0;
  for (EdgeId e : bits_of(g.contracted & ~f.contracted)) d |= bit(f_domain.id(t.name(e)));
  return make_face(f_domain, w, d);
}

inline std::optional<Face> factor_face(const Tree& t, const Face& f, const Face& g) {
  return factor_face(t, f, g, domain(t, f));
}

// All faces of t lying below f, computed by composing f with every face of
// its domain.
inline std::vector<Face> faces_below(const Tree& t, const Face& f) {
  const Tree dom = domain(t, f);
  std::vector<Face> out;
  for (const Face& g : faces(dom)) out.push_back(compose_faces(t, f, g, dom));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition into elementary faces

// A chain e_1, ..., e_k with e_1 a codimension-one face of t, e_{i+1} a
// codimension-one face of domain(e_i), whose composite is f; k = codim(f).
// External prunings come first, then contractions, then (for an η-face) the
// final edge inclusion of a corolla.
inline std::vector<Face> decompose(const Tree& t, const Face& f) {
  if (!is_valid_face(t, f)) throw InvalidArgument("not a face of " + t.literal());
  std::vector<Face> chain;
  if (t.vertex_count() == 0) return chain;
  EdgeMask target = f.vertices;
  if (f.is_edge()) target = t.has_vertex(f.edge) ? bit(f.edge) : bit(t.parent(f.edge));
  Tree cur = t;
  EdgeMask w = t.vertex_mask();
  while (w != target) {
    EdgeId victim = kNoEdge;
    for (EdgeId v : prunable_vertices(t, w)) {
      if (!has_bit(target, v)) {
        victim = v;
        break;
      }
    }
    w &= ~bit(victim);
    const Tree next = domain(t, make_face(t, w, 0));
    chain.push_back(make_face(cur, embed_mask(cur, t, w), 0));
    cur = next;
  }
  EdgeMask done = 0;
  for (EdgeId d : bits_of(f.contracted)) {
    // cur is domain(t, (w, done)); contract d there
    chain.push_back(Face{cur.vertex_mask(), bit(cur.id(t.name(d))), cur.root()});
    done |= bit(d);
    cur = domain(t, Face{w, done, root_of(t, w)});
  }
  if (f.is_edge()) chain.push_back(edge_face(cur.id(t.name(f.edge))));
  return chain;
}

}  // namespace dendro
