#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dendro/error.hpp"

namespace dendro {

using EdgeId = std::uint32_t;
using EdgeMask = std::uint64_t;

inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);
inline constexpr std::size_t kMaxEdges = 64;

constexpr EdgeMask bit(EdgeId e) { return EdgeMask{1} << e; }
constexpr bool has_bit(EdgeMask m, EdgeId e) { return (m >> e) & 1U; }
constexpr int popcount(EdgeMask m) { return std::popcount(m); }

// Ids of the set bits of m, ascending.
inline std::vector<EdgeId> bits_of(EdgeMask m) {
  std::vector<EdgeId> out;
  while (m != 0) {
    out.push_back(static_cast<EdgeId>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

// Shortlex order on edge names: "2" < "10", so numeric names sort numerically.
inline bool name_less(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline bool is_name_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',';
}

inline bool is_valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_name_char);
}

// Recursive, order-carrying description of a tree; the input to Tree.
// An edge either is a leaf (vertex == false) or carries a vertex whose
// inputs are `inputs` (possibly none: a nullary vertex).
struct TreeNode {
  std::string name;
  bool vertex = false;
  std::vector<TreeNode> inputs;
};

// A finite rooted non-planar tree with named edges.
//
// Vertices are identified with their output edge, so a set of vertices is an
// EdgeMask. Children are stored in shortlex order of their names and edge
// ids are assigned in preorder, which makes the representation independent
// of the order children were given in: two trees with the same names and the
// same shape compare equal and share ids.
class Tree {
 public:
  Tree() : Tree(TreeNode{"0", false, {}}) {}

  explicit Tree(const TreeNode& root) {
    TreeNode sorted = root;
    sort_node(sorted);
    add(sorted, kNoEdge);
    if (names_.size() > kMaxEdges) {
      throw InvalidArgument("tree has " + std::to_string(names_.size()) + " edges; at most " +
                            std::to_string(kMaxEdges) + " are supported");
    }
    for (EdgeId e = 0; e < names_.size(); ++e) {
      if (!is_valid_name(names_[e])) throw InvalidArgument("invalid edge name '" + names_[e] + "'");
      if (!index_.emplace(names_[e], e).second) {
        throw InvalidArgument("duplicate edge name '" + names_[e] + "'");
      }
      if (vertex_[e]) {
        vertex_mask_ |= bit(e);
        if (parent_[e] != kNoEdge) inner_mask_ |= bit(e);
      }
    }
  }

  static Tree eta(std::string name = "0") { return Tree(TreeNode{std::move(name), false, {}}); }

  // C_n with root "0" and leaves "1".."n".
  static Tree corolla(std::size_t n) {
    TreeNode root{"0", true, {}};
    for (std::size_t i = 1; i <= n; ++i) root.inputs.push_back(TreeNode{std::to_string(i), false, {}});
    return Tree(root);
  }

  // i[n]: edges "0" (root) .. "n" (leaf); vertex k has output k and input k+1.
  static Tree linear(std::size_t n) {
    TreeNode node{std::to_string(n), false, {}};
    for (std::size_t k = n; k-- > 0;) node = TreeNode{std::to_string(k), true, {std::move(node)}};
    return Tree(node);
  }

  std::size_t edge_count() const { return names_.size(); }
  std::size_t vertex_count() const { return static_cast<std::size_t>(popcount(vertex_mask_)); }
  EdgeId root() const { return 0; }

  const std::string& name(EdgeId e) const { return names_.at(e); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<EdgeId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  EdgeId id(std::string_view name) const {
    if (auto e = find(name)) return *e;
    throw InvalidArgument("no edge named '" + std::string(name) + "'");
  }

  bool has_vertex(EdgeId e) const { return vertex_.at(e); }
  std::span<const EdgeId> inputs(EdgeId v) const { return inputs_.at(v); }
  std::size_t arity(EdgeId v) const { return inputs_.at(v).size(); }
  // Output edge of the vertex having e as an input, or kNoEdge for the root.
  EdgeId parent(EdgeId e) const { return parent_.at(e); }

  bool is_inner(EdgeId e) const { return has_bit(inner_mask_, e); }
  bool is_leaf(EdgeId e) const { return !vertex_.at(e); }

  EdgeMask vertex_mask() const { return vertex_mask_; }
  EdgeMask inner_mask() const { return inner_mask_; }
  EdgeMask all_edges() const {
    return names_.size() == 64 ? ~EdgeMask{0} : (EdgeMask{1} << names_.size()) - 1;
  }
  std::vector<EdgeId> vertices() const { return bits_of(vertex_mask_); }
  std::vector<EdgeId> inner_edges() const { return bits_of(inner_mask_); }

  std::size_t max_arity() const {
    std::size_t a = 0;
    for (EdgeId v : vertices()) a = std::max(a, arity(v));
    return a;
  }

  TreeNode node(EdgeId e = 0) const {
    TreeNode n{names_[e], vertex_[e], {}};
    for (EdgeId c : inputs_[e]) n.inputs.push_back(node(c));
    return n;
  }

  // The literal grammar: edge [ "(" tree ("," tree)* ")" ], "e()" nullary.
  std::string literal(EdgeId e = 0) const {
    std::string out = names_[e];
    if (!vertex_[e]) return out;
    out += '(';
    for (std::size_t i = 0; i < inputs_[e].size(); ++i) {
      if (i != 0) out += ',';
      out += literal(inputs_[e][i]);
    }
    out += ')';
    return out;
  }

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.names_ == b.names_ && a.vertex_ == b.vertex_ && a.parent_ == b.parent_;
  }

 private:
  static void sort_node(TreeNode& n) {
    for (auto& c : n.inputs) sort_node(c);
    std::sort(n.inputs.begin(), n.inputs.end(),
              [](const TreeNode& a, const TreeNode& b) { return name_less(a.name, b.name); });
  }

  EdgeId add(const TreeNode& n, EdgeId parent) {
    if (!n.vertex && !n.inputs.empty()) {
      throw InvalidArgument("edge '" + n.name + "' has inputs but no vertex");
    }
    const auto e = static_cast<EdgeId>(names_.size());
    names_.push_back(n.name);
    vertex_.push_back(n.vertex);
    parent_.push_back(parent);
    inputs_.emplace_back();
    for (const auto& c : n.inputs) {
      EdgeId child = add(c, e);
      inputs_[e].push_back(child);
    }
    return e;
  }

  std::vector<std::string> names_;
  std::vector<bool> vertex_;
  std::vector<EdgeId> parent_;
  std::vector<std::vector<EdgeId>> inputs_;
  std::unordered_map<std::string, EdgeId> index_;
  EdgeMask vertex_mask_ = 0;
  EdgeMask inner_mask_ = 0;
};

namespace detail {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view text) : text_(text) {}

  TreeNode parse() {
    TreeNode n = tree();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return n;
  }

 private:
  TreeNode tree() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) {
      if (pos_ == text_.size()) fail("expected edge name, got end of input");
      fail("expected edge name, got '" + std::string(1, text_[pos_]) + "'");
    }
    TreeNode n{std::string(text_.substr(start, pos_ - start)), false, {}};
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      n.vertex = true;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
        return n;
      }
      for (;;) {
        n.inputs.push_back(tree());
        skip_ws();
        if (pos_ >= text_.size()) fail("expected ',' or ')', got end of input");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')', got '" + std::string(1, text_[pos_]) + "'");
      }
    }
    return n;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses a tree literal. Throws ParseError on syntax errors and
// InvalidArgument on duplicate edge names.
inline Tree parse_tree(std::string_view literal) {
  return Tree(detail::LiteralParser(literal).parse());
}

// ---------------------------------------------------------------------------
// Canonical forms

// Shape code of the subtree above edge e: "o" for a leaf, "(" + sorted child
// codes + ")" for a vertex. Two edge-rooted subtrees are isomorphic iff their
// codes agree.
inline std::vector<std::string> shape_codes(const Tree& t) {
  std::vector<std::string> code(t.edge_count());
  for (EdgeId e = static_cast<EdgeId>(t.edge_count()); e-- > 0;) {  // children have larger ids
    if (!t.has_vertex(e)) {
      code[e] = "o";
      continue;
    }
    std::vector<std::string> parts;
    for (EdgeId c : t.inputs(e)) parts.push_back(code[c]);
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (auto& p : parts) s += p;
    s += ')';
    code[e] = std::move(s);
  }
  return code;
}

struct CanonicalKey {
  // Stable text encoding of the isomorphism class; safe in file names.
  std::string code;
  // Representative: root "0", remaining edges numbered breadth-first with
  // siblings visited in code order.
  Tree representative;
  // relabel[e] = id in `representative` of the image of edge e.
  std::vector<EdgeId> relabel;
};

inline CanonicalKey canonicalize(const Tree& t) {
  const auto code = shape_codes(t);
  std::vector<std::size_t> number(t.edge_count(), 0);
  std::queue<EdgeId> queue;
  queue.push(t.root());
  std::size_t next = 1;
  while (!queue.empty()) {
    EdgeId e = queue.front();
    queue.pop();
    std::vector<EdgeId> kids(t.inputs(e).begin(), t.inputs(e).end());
    std::stable_sort(kids.begin(), kids.end(), [&](EdgeId a, EdgeId b) { return code[a] < code[b]; });
    for (EdgeId c : kids) {
      number[c] = next++;
      queue.push(c);
    }
  }
  std::function<TreeNode(EdgeId)> build = [&](EdgeId e) {
    TreeNode n{std::to_string(number[e]), t.has_vertex(e), {}};
    for (EdgeId c : t.inputs(e)) n.inputs.push_back(build(c));
    return n;
  };
  CanonicalKey key{code[t.root()], Tree(build(t.root())), {}};
  key.relabel.resize(t.edge_count());
  for (EdgeId e = 0; e < t.edge_count(); ++e) key.relabel[e] = key.representative.id(std::to_string(number[e]));
  return key;
}

inline bool isomorphic(const Tree& a, const Tree& b) {
  return a.edge_count() == b.edge_count() && shape_codes(a)[0] == shape_codes(b)[0];
}

namespace detail {

struct IsoSearch {
  const Tree& s;
  const Tree& t;
  std::vector<std::string> code_s = shape_codes(s);
  std::vector<std::string> code_t = shape_codes(t);

  // All isomorphisms from the subtree above a (in s) to the subtree above b
  // (in t), as maps over s's edge ids (kNoEdge outside the subtree).
  std::vector<std::vector<EdgeId>> isos(EdgeId a, EdgeId b) const {
    std::vector<std::vector<EdgeId>> out;
    if (code_s[a] != code_t[b]) return out;
    std::vector<EdgeId> base(s.edge_count(), kNoEdge);
    base[a] = b;
    if (!s.has_vertex(a)) {
      out.push_back(std::move(base));
      return out;
    }
    auto ka = s.inputs(a);
    auto kb = t.inputs(b);
    std::vector<bool> used(kb.size(), false);
    std::function<void(std::size_t, std::vector<EdgeId>&)> go = [&](std::size_t i, std::vector<EdgeId>& cur) {
      if (i == ka.size()) {
        out.push_back(cur);
        return;
      }
      for (std::size_t j = 0; j < kb.size(); ++j) {
        if (used[j] || code_s[ka[i]] != code_t[kb[j]]) continue;
        used[j] = true;
        for (const auto& sub : isos(ka[i], kb[j])) {
          std::vector<EdgeId> next = cur;
          for (EdgeId e = 0; e < sub.size(); ++e) {
            if (sub[e] != kNoEdge) next[e] = sub[e];
          }
          go(i + 1, next);
        }
        used[j] = false;
      }
    };
    go(0, base);
    return out;
  }
};

}  // namespace detail

// Every isomorphism s -> t as an edge map indexed by s's edge ids, in
// lexicographic order.
inline std::vector<std::vector<EdgeId>> isomorphisms(const Tree& s, const Tree& t) {
  if (s.edge_count() != t.edge_count()) return {};
  detail::IsoSearch search{s, t};
  auto out = search.isos(s.root(), t.root());
  std::sort(out.begin(), out.end());
  return out;
}

// Aut(t) as explicit edge bijections; the identity comes first.
inline std::vector<std::vector<EdgeId>> automorphisms(const Tree& t) { return isomorphisms(t, t); }

inline std::vector<EdgeId> identity_map(std::size_t n) {
  std::vector<EdgeId> m(n);
  for (EdgeId e = 0; e < n; ++e) m[e] = e;
  return m;
}

inline std::vector<EdgeId> compose_maps(std::span<const EdgeId> outer, std::span<const EdgeId> inner) {
  std::vector<EdgeId> m(inner.size());
  for (std::size_t e = 0; e < inner.size(); ++e) m[e] = outer[inner[e]];
  return m;
}

inline std::vector<EdgeId> invert_map(std::span<const EdgeId> m) {
  std::vector<EdgeId> inv(m.size(), kNoEdge);
  for (EdgeId e = 0; e < m.size(); ++e) inv.at(m[e]) = e;
  return inv;
}

// Builds the tree denoted by a shape code, naming edges breadth-first.
inline Tree tree_from_code(std::string_view code) {
  std::size_t pos = 0;
  std::function<TreeNode()> read = [&]() {
    if (pos >= code.size()) throw ParseError("truncated shape code", pos);
    if (code[pos] == 'o') {
      ++pos;
      return TreeNode{"", false, {}};
    }
    if (code[pos] != '(') throw ParseError("invalid shape code", pos);
    ++pos;
    TreeNode n{"", true, {}};
    while (pos < code.size() && code[pos] != ')') n.inputs.push_back(read());
    if (pos >= code.size()) throw ParseError("unterminated shape code", pos);
    ++pos;
    return n;
  };
  TreeNode root = read();
  if (pos != code.size()) throw ParseError("trailing characters in shape code", pos);
  std::size_t next = 0;
  std::queue<TreeNode*> queue;
  queue.push(&root);
  while (!queue.empty()) {
    TreeNode* n = queue.front();
    queue.pop();
    n->name = std::to_string(next++);
    for (auto& c : n->inputs) queue.push(&c);
  }
  return canonicalize(Tree(root)).representative;
}

inline std::size_t code_vertex_count(std::string_view code) {
  return static_cast<std::size_t>(std::count(code.begin(), code.end(), '('));
}

// One canonical representative per isomorphism class of trees with at most
// max_vertices vertices, each of arity at most max_arity. Ordered by vertex
// count, then by shape code.
inline std::vector<CanonicalKey> enumerate_trees(std::size_t max_vertices, std::size_t max_arity) {
  // by_count[k]: codes of edge-rooted trees with exactly k vertices.
  std::vector<std::set<std::string>> by_count(max_vertices + 1);
  by_count[0].insert("o");
  for (std::size_t k = 1; k <= max_vertices; ++k) {
    std::vector<std::pair<std::size_t, std::string>> pool;
    for (std::size_t j = 0; j < k; ++j) {
      for (const auto& c : by_count[j]) pool.emplace_back(j, c);
    }
    // Multisets (non-decreasing index sequences) over pool whose vertex
    // counts sum to k - 1.
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, std::size_t)> go = [&](std::size_t from, std::size_t remaining) {
      if (remaining == 0) {
        std::vector<std::string> parts;
        for (auto i : chosen) parts.push_back(pool[i].second);
        std::sort(parts.begin(), parts.end());
        std::string code = "(";
        for (auto& p : parts) code += p;
        code += ')';
        by_count[k].insert(std::move(code));
      }
      if (chosen.size() == max_arity) return;
      for (std::size_t i = from; i < pool.size(); ++i) {
        if (pool[i].first > remaining) continue;
        chosen.push_back(i);
        go(i, remaining - pool[i].first);
        chosen.pop_back();
      }
    };
    go(0, k - 1);
  }
  std::vector<CanonicalKey> out;
  for (const auto& level : by_count) {
    for (const auto& code : level) out.push_back(canonicalize(tree_from_code(code)));
  }
  return out;
}

}  // namespace dendro
