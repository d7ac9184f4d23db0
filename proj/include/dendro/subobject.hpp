#pragma once

#include <algorithm>
#include <iterator>
#include <span>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/faces.hpp"
#include "dendro/tree.hpp"

namespace dendro {

// A sieve on a representable: a downward-closed set of faces of a fixed tree.
class Subobject {
 public:
  Subobject() = default;

  // members need not be sorted; they must be faces of `ambient`. Downward
  // closure is not enforced here (certificates may carry arbitrary start
  // sets); see is_downward_closed().
  Subobject(Tree ambient, std::vector<Face> members) : ambient_(std::move(ambient)), members_(std::move(members)) {
    for (const Face& f : members_) {
      if (!is_valid_face(ambient_, f)) throw InvalidArgument("member is not a face of " + ambient_.literal());
    }
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  }

  const Tree& ambient() const { return ambient_; }
  const std::vector<Face>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  bool member(const Face& f) const { return std::binary_search(members_.begin(), members_.end(), f); }

  bool is_proper() const { return !member(identity_face(ambient_)); }

  bool is_downward_closed() const {
    for (const Face& f : members_) {
      for (const Face& g : faces_below(ambient_, f)) {
        if (!member(g)) return false;
      }
    }
    return true;
  }

  // Members not strictly below another member.
  std::vector<Face> maximal_faces() const {
    std::vector<Face> out;
    for (const Face& f : members_) {
      bool dominated = false;
      for (const Face& g : members_) {
        if (g != f && factors_through(ambient_, f, g)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) out.push_back(f);
    }
    return out;
  }

  friend bool operator==(const Subobject& a, const Subobject& b) {
    return a.ambient_ == b.ambient_ && a.members_ == b.members_;
  }

 private:
  Tree ambient_;
  std::vector<Face> members_;
};

// Union of the images Ω[domain(g)] -> Ω[t] over the generators.
inline Subobject generated_by(const Tree& t, std::span<const Face> generators) {
  std::vector<Face> members;
  for (const Face& g : generators) {
    auto below = faces_below(t, g);
    members.insert(members.end(), below.begin(), below.end());
  }
  return Subobject(t, std::move(members));
}

inline Subobject representable(const Tree& t) { return Subobject(t, faces(t)); }

inline Subobject empty_subobject(const Tree& t) { return Subobject(t, {}); }

// ∂Ω[T]: union of the elementary faces.
inline Subobject boundary(const Tree& t) { return generated_by(t, elementary_faces(t)); }

// ∂^ext Ω[T]: union of the external elementary faces.
inline Subobject external_boundary(const Tree& t) { return generated_by(t, classify_codim1(t).external); }

inline void require_inner_edge(const Tree& t, EdgeId e) {
  if (e >= t.edge_count() || !t.is_inner(e)) {
    throw InvalidArgument("'" + (e < t.edge_count() ? t.name(e) : std::string("?")) +
                          "' is not an inner edge of " + t.literal());
  }
}

// Λ^e[T]: union of the elementary faces other than ∂_e.
inline Subobject inner_horn(const Tree& t, EdgeId e) {
  require_inner_edge(t, e);
  const Face skipped{t.vertex_mask(), bit(e), t.root()};
  std::vector<Face> gens;
  for (const Face& f : elementary_faces(t)) {
    if (f != skipped) gens.push_back(f);
  }
  return generated_by(t, gens);
}

// Sc[T]: union of the corollas around each vertex; Sc[η] = η.
inline Subobject segal_core(const Tree& t) {
  if (t.vertex_count() == 0) return representable(t);
  std::vector<Face> gens;
  for (EdgeId v : t.vertices()) gens.push_back(Face{bit(v), 0, v});
  return generated_by(t, gens);
}

// Ω[T]_n: union of Ω[F] over subtrees F with at most n vertices.
inline Subobject filtration_stage(const Tree& t, std::size_t n) {
  if (t.vertex_count() == 0 || n < 1 || n > t.vertex_count()) {
    throw InvalidArgument("filtration stage " + std::to_string(n) + " out of range for " + t.literal());
  }
  std::vector<Face> gens;
  for (const Subtree& s : subtrees(t)) {
    if (!s.is_edge() && static_cast<std::size_t>(popcount(s.vertices)) <= n) gens.push_back(Face{s.vertices, 0, s.edge});
  }
  return generated_by(t, gens);
}

// ---------------------------------------------------------------------------
// Closed-form membership, independent of the generator route above.

inline bool in_boundary(const Tree& t, const Face& f) { return !is_identity(t, f); }

inline bool in_external_boundary(const Tree& t, const Face& f) {
  if (f.is_edge()) return t.vertex_count() > 0;
  return f.vertices != t.vertex_mask();
}

inline bool in_inner_horn(const Tree& t, EdgeId e, const Face& f) {
  return !is_identity(t, f) && f != Face{t.vertex_mask(), bit(e), t.root()};
}

inline bool in_segal_core(const Tree& t, const Face& f) {
  if (t.vertex_count() == 0) return true;
  return f.is_edge() || (popcount(f.vertices) == 1 && f.contracted == 0);
}

inline bool in_filtration_stage(const Tree&, std::size_t n, const Face& f) {
  return static_cast<std::size_t>(popcount(f.vertices)) <= n;
}

// Factors through ∂_e: e is not an edge of the subtree, or e is contracted.
inline bool factors_through_inner_face(const Tree& t, EdgeId e, const Face& f) {
  if (f.is_edge()) return f.edge != e;
  return !has_bit(subtree_edges(t, f.vertices), e) || has_bit(f.contracted, e);
}

// ---------------------------------------------------------------------------
// Boolean operations

inline void require_same_ambient(const Subobject& a, const Subobject& b) {
  if (!(a.ambient() == b.ambient())) {
    throw InvalidArgument("ambient mismatch: " + a.ambient().literal() + " vs " + b.ambient().literal());
  }
}

inline Subobject unite(const Subobject& a, const Subobject& b) {
  require_same_ambient(a, b);
  std::vector<Face> m;
  std::set_union(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                 std::back_inserter(m));
  return Subobject(a.ambient(), std::move(m));
}

inline Subobject intersect(const Subobject& a, const Subobject& b) {
  require_same_ambient(a, b);
  std::vector<Face> m;
  std::set_intersection(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                        std::back_inserter(m));
  return Subobject(a.ambient(), std::move(m));
}

// a ⊆ b
inline bool contains(const Subobject& b, const Subobject& a) {
  require_same_ambient(a, b);
  return std::includes(b.members().begin(), b.members().end(), a.members().begin(), a.members().end());
}

inline Subobject difference(const Subobject& a, const Subobject& b) {
  require_same_ambient(a, b);
  std::vector<Face> m;
  std::set_difference(a.members().begin(), a.members().end(), b.members().begin(), b.members().end(),
                      std::back_inserter(m));
  return Subobject(a.ambient(), std::move(m));
}

}  // namespace dendro
