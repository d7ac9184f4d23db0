#pragma once

// Test-only brute-force oracles. Nothing here calls into the code paths it is
// used to check (shape codes, canonical keys, face composition).

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dendro/tree.hpp"

namespace oracle {

using dendro::EdgeId;
using dendro::Tree;
using dendro::TreeNode;

inline std::size_t count_vertices(std::string_view literal) {
  return static_cast<std::size_t>(std::count(literal.begin(), literal.end(), '('));
}

inline std::size_t count_edges(std::string_view literal) {
  std::size_t n = 0;
  bool in_name = false;
  for (char c : literal) {
    const bool name_char = c != '(' && c != ')' && c != ',' && c != ' ';
    if (name_char && !in_name) ++n;
    in_name = name_char;
  }
  return n;
}

// phi: s -> t preserves root, vertices, and the parent relation.
inline bool is_isomorphism(const Tree& s, const Tree& t, const std::vector<EdgeId>& phi) {
  if (s.edge_count() != t.edge_count() || phi.size() != s.edge_count()) return false;
  std::vector<bool> hit(t.edge_count(), false);
  for (EdgeId e = 0; e < s.edge_count(); ++e) {
    if (phi[e] >= t.edge_count() || hit[phi[e]]) return false;
    hit[phi[e]] = true;
  }
  if (phi[s.root()] != t.root()) return false;
  for (EdgeId e = 0; e < s.edge_count(); ++e) {
    if (s.has_vertex(e) != t.has_vertex(phi[e])) return false;
    const EdgeId p = s.parent(e);
    if (p != dendro::kNoEdge && t.parent(phi[e]) != phi[p]) return false;
  }
  return true;
}

// Every isomorphism found by trying all child assignments at every vertex.
inline std::vector<std::vector<EdgeId>> brute_force_isomorphisms(const Tree& s, const Tree& t) {
  std::vector<std::vector<EdgeId>> out;
  if (s.edge_count() != t.edge_count()) return out;
  std::vector<EdgeId> phi(s.edge_count(), dendro::kNoEdge);
  std::vector<std::pair<EdgeId, EdgeId>> pending{{s.root(), t.root()}};
  std::function<void()> go = [&]() {
    if (pending.empty()) {
      if (is_isomorphism(s, t, phi)) out.push_back(phi);
      return;
    }
    auto [a, b] = pending.back();
    pending.pop_back();
    if (s.has_vertex(a) == t.has_vertex(b) && s.arity(a) == t.arity(b)) {
      phi[a] = b;
      std::vector<std::size_t> perm(t.arity(b));
      std::iota(perm.begin(), perm.end(), 0);
      do {
        const auto saved = pending.size();
        for (std::size_t i = 0; i < perm.size(); ++i) pending.emplace_back(s.inputs(a)[i], t.inputs(b)[perm[i]]);
        go();
        pending.resize(saved);
      } while (std::next_permutation(perm.begin(), perm.end()));
      phi[a] = dendro::kNoEdge;
    }
    pending.push_back({a, b});
  };
  go();
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<std::vector<EdgeId>> brute_force_automorphisms(const Tree& t) {
  return brute_force_isomorphisms(t, t);
}

inline bool brute_force_isomorphic(const Tree& s, const Tree& t) {
  return !brute_force_isomorphisms(s, t).empty();
}

// Copy of t with fresh names and children given in random order.
inline Tree shuffled_copy(const Tree& t, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<std::size_t> names(t.edge_count());
  std::iota(names.begin(), names.end(), 0);
  std::shuffle(names.begin(), names.end(), rng);
  std::function<TreeNode(EdgeId)> build = [&](EdgeId e) {
    TreeNode n{"e" + std::to_string(names[e]), t.has_vertex(e), {}};
    for (EdgeId c : t.inputs(e)) n.inputs.push_back(build(c));
    std::shuffle(n.inputs.begin(), n.inputs.end(), rng);
    return n;
  };
  return Tree(build(t.root()));
}

inline Tree random_tree(std::mt19937& rng, std::size_t max_vertices, std::size_t max_arity) {
  std::size_t budget = std::uniform_int_distribution<std::size_t>(0, max_vertices)(rng);
  std::size_t next = 0;
  std::function<TreeNode(bool)> build = [&](bool force_vertex) {
    TreeNode n{"n" + std::to_string(next++), false, {}};
    if (budget == 0 || (!force_vertex && rng() % 3 == 0)) return n;
    --budget;
    n.vertex = true;
    const std::size_t arity = std::uniform_int_distribution<std::size_t>(0, max_arity)(rng);
    for (std::size_t i = 0; i < arity; ++i) n.inputs.push_back(build(false));
    return n;
  };
  return Tree(build(true));
}

// All planar trees (ordered children) with at most v vertices of arity <= a.
inline std::vector<TreeNode> planar_trees(std::size_t v, std::size_t a) {
  // by_count[k]: planar trees with exactly k vertices (names filled later)
  std::vector<std::vector<TreeNode>> by_count(v + 1);
  by_count[0].push_back(TreeNode{"", false, {}});
  for (std::size_t k = 1; k <= v; ++k) {
    for (std::size_t arity = 0; arity <= a; ++arity) {
      // sequences of `arity` planar trees with vertex counts summing to k-1
      std::vector<TreeNode> kids;
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t remaining) {
        if (i == arity) {
          if (remaining == 0) by_count[k].push_back(TreeNode{"", true, kids});
          return;
        }
        for (std::size_t c = 0; c <= remaining; ++c) {
          for (const auto& child : by_count[c]) {
            kids.push_back(child);
            go(i + 1, remaining - c);
            kids.pop_back();
          }
        }
      };
      go(0, k - 1);
    }
  }
  std::vector<TreeNode> out;
  for (auto& level : by_count) out.insert(out.end(), level.begin(), level.end());
  return out;
}

inline Tree name_tree(TreeNode n) {
  std::size_t next = 0;
  std::function<void(TreeNode&)> go = [&](TreeNode& x) {
    x.name = "e" + std::to_string(next++);
    for (auto& c : x.inputs) go(c);
  };
  go(n);
  return Tree(n);
}

inline std::size_t iso_classes_by_brute_force(std::size_t v, std::size_t a) {
  std::vector<Tree> reps;
  for (const auto& p : planar_trees(v, a)) {
    Tree t = name_tree(p);
    bool seen = false;
    for (const auto& r : reps) {
      if (r.edge_count() == t.edge_count() && r.vertex_count() == t.vertex_count() && brute_force_isomorphic(r, t)) {
        seen = true;
        break;
      }
    }
    if (!seen) reps.push_back(std::move(t));
  }
  return reps.size();
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
