#pragma once

// Finite coloured symmetric operads given by explicit tables, truncated at a
// maximum arity. Conventions:
//   * a permutation σ of n inputs is a vector with σ[i] in [0, n);
//   * right action: input i of p·σ is input σ[i] of p, so
//     (p·σ)·τ = p·(σ∘τ) with (σ∘τ)[i] = σ[τ[i]];
//   * partial composition p ∘_i q plugs q into input i of p; the inputs of
//     the composite are p's inputs before i, then q's, then p's after i.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dendro/error.hpp"

namespace dendro {

using Perm = std::vector<std::size_t>;

inline Perm identity_perm(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline bool is_perm(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  for (std::size_t x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

// (a∘b)[i] = a[b[i]]
inline Perm compose_perms(const Perm& a, const Perm& b) {
  Perm out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

inline Perm invert_perm(const Perm& p) {
  Perm out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[p[i]] = i;
  return out;
}

inline std::vector<Perm> all_perms(std::size_t n) {
  std::vector<Perm> out;
  Perm p = identity_perm(n);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// σ' with (p·σ) ∘_i q = (p ∘_{σ[i]} q)·σ', for |p| = n, |q| = m.
inline Perm block_perm_outer(const Perm& sigma, std::size_t i, std::size_t m) {
  const std::size_t j = sigma[i];
  auto pos = [&](std::size_t pin) { return pin < j ? pin : pin + m - 1; };
  Perm out;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    if (k == i) {
      for (std::size_t r = 0; r < m; ++r) out.push_back(j + r);
    } else {
      out.push_back(pos(sigma[k]));
    }
  }
  return out;
}

// τ'' with p ∘_i (q·τ) = (p ∘_i q)·τ'', for |p| = n.
inline Perm block_perm_inner(std::size_t n, std::size_t i, const Perm& tau) {
  const std::size_t m = tau.size();
  Perm out = identity_perm(n + m - 1);
  for (std::size_t r = 0; r < m; ++r) out[i + r] = i + tau[r];
  return out;
}

using OpId = std::size_t;
using ColourId = std::size_t;

struct Operation {
  std::string name;
  std::vector<ColourId> inputs;
  ColourId output = 0;

  std::size_t arity() const { return inputs.size(); }
};

struct ColouredOperad {
  std::string name;
  std::size_t max_arity = 0;
  std::vector<std::string> colours;
  std::vector<Operation> operations;
  std::vector<OpId> identities;                                    // indexed by colour
  std::map<std::pair<OpId, Perm>, OpId> action;                    // (p, σ) -> p·σ
  std::map<std::tuple<OpId, std::size_t, OpId>, OpId> composition;  // (p, i, q) -> p ∘_i q

  std::optional<OpId> act(OpId p, const Perm& sigma) const {
    auto it = action.find({p, sigma});
    if (it == action.end()) return std::nullopt;
    return it->second;
  }
  std::optional<OpId> compose(OpId p, std::size_t i, OpId q) const {
    auto it = composition.find({p, i, q});
    if (it == composition.end()) return std::nullopt;
    return it->second;
  }
  std::optional<OpId> find_operation(const std::string& n) const {
    for (OpId k = 0; k < operations.size(); ++k) {
      if (operations[k].name == n) return k;
    }
    return std::nullopt;
  }
  std::optional<ColourId> find_colour(const std::string& n) const {
    for (ColourId k = 0; k < colours.size(); ++k) {
      if (colours[k] == n) return k;
    }
    return std::nullopt;
  }
};

// Structural well-formedness: references in range, names unique, arities
// within the truncation. Axioms are checked by validate_operad.
inline void check_structure(const ColouredOperad& p) {
  auto bad = [](const std::string& why) { throw ValidationError("operad: " + why); };
  if (p.colours.empty()) bad("no colours");
  for (std::size_t a = 0; a < p.colours.size(); ++a) {
    for (std::size_t b = a + 1; b < p.colours.size(); ++b) {
      if (p.colours[a] == p.colours[b]) bad("duplicate colour '" + p.colours[a] + "'");
    }
  }
  for (std::size_t a = 0; a < p.operations.size(); ++a) {
    const Operation& op = p.operations[a];
    if (op.name.empty()) bad("operation without a name");
    if (op.output >= p.colours.size()) bad("operation '" + op.name + "' has an unknown output colour");
    for (ColourId c : op.inputs) {
      if (c >= p.colours.size()) bad("operation '" + op.name + "' has an unknown input colour");
    }
    if (op.arity() > p.max_arity) bad("operation '" + op.name + "' exceeds max_arity");
    for (std::size_t b = a + 1; b < p.operations.size(); ++b) {
      if (p.operations[b].name == op.name) bad("duplicate operation '" + op.name + "'");
    }
  }
  if (p.identities.size() != p.colours.size()) bad("need exactly one identity per colour");
  for (OpId id : p.identities) {
    if (id >= p.operations.size()) bad("identity refers to an unknown operation");
  }
  for (const auto& [key, r] : p.action) {
    if (key.first >= p.operations.size() || r >= p.operations.size()) bad("action refers to an unknown operation");
    if (key.second.size() != p.operations[key.first].arity() || !is_perm(key.second)) {
      bad("action of '" + p.operations[key.first].name + "' uses a permutation of the wrong size");
    }
  }
  for (const auto& [key, r] : p.composition) {
    const auto& [a, i, b] = key;
    if (a >= p.operations.size() || b >= p.operations.size() || r >= p.operations.size()) {
      bad("composition refers to an unknown operation");
    }
    if (i >= p.operations[a].arity()) bad("composition position out of range for '" + p.operations[a].name + "'");
  }
}

struct OperadViolation {
  std::string axiom;  // identity | action | colour | unit | associativity | equivariance
  std::string detail;
};

struct OperadReport {
  std::vector<OperadViolation> violations;
  bool ok() const { return violations.empty(); }
  std::size_t count(const std::string& axiom) const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                  [&](const OperadViolation& v) { return v.axiom == axiom; }));
  }
};

inline std::string perm_string(const Perm& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

// Every violated axiom instance among the data within the truncation.
inline OperadReport validate_operad(const ColouredOperad& p) {
  check_structure(p);
  OperadReport rep;
  auto add = [&](std::string axiom, std::string detail) { rep.violations.push_back({std::move(axiom), std::move(detail)}); };
  const auto& ops = p.operations;
  auto nm = [&](OpId a) { return "'" + ops[a].name + "'"; };
  auto arity = [&](OpId a) { return ops[a].arity(); };
  auto substituted = [&](OpId a, std::size_t i, OpId b) {
    std::vector<ColourId> in(ops[a].inputs.begin(), ops[a].inputs.begin() + static_cast<std::ptrdiff_t>(i));
    in.insert(in.end(), ops[b].inputs.begin(), ops[b].inputs.end());
    in.insert(in.end(), ops[a].inputs.begin() + static_cast<std::ptrdiff_t>(i) + 1, ops[a].inputs.end());
    return in;
  };
  auto composable = [&](OpId a, std::size_t i, OpId b) {
    return i < arity(a) && ops[a].inputs[i] == ops[b].output && arity(a) + arity(b) - 1 <= p.max_arity;
  };

  for (ColourId c = 0; c < p.colours.size(); ++c) {
    const Operation& id = ops[p.identities[c]];
    if (id.inputs != std::vector<ColourId>{c} || id.output != c) {
      add("identity", "identity of colour '" + p.colours[c] + "' has the wrong signature");
    }
  }

  // action: completeness, signatures, unit, compatibility
  std::map<std::size_t, std::vector<Perm>> perms;
  for (std::size_t n = 0; n <= p.max_arity; ++n) perms[n] = all_perms(n);
  for (OpId a = 0; a < ops.size(); ++a) {
    for (const Perm& s : perms[arity(a)]) {
      const auto r = p.act(a, s);
      if (!r) {
        add("action", nm(a) + "·" + perm_string(s) + " is missing");
        continue;
      }
      std::vector<ColourId> in(arity(a));
      for (std::size_t i = 0; i < in.size(); ++i) in[i] = ops[a].inputs[s[i]];
      if (ops[*r].inputs != in || ops[*r].output != ops[a].output) {
        add("colour", nm(a) + "·" + perm_string(s) + " = " + nm(*r) + " has the wrong signature");
      }
    }
    if (auto r = p.act(a, identity_perm(arity(a))); r && *r != a) add("action", nm(a) + "·id = " + nm(*r));
    for (const Perm& s : perms[arity(a)]) {
      for (const Perm& t : perms[arity(a)]) {
        const auto as = p.act(a, s);
        if (!as) continue;
        const auto lhs = p.act(*as, t);
        const auto rhs = p.act(a, compose_perms(s, t));
        if (lhs && rhs && *lhs != *rhs) {
          add("action", "(" + nm(a) + "·" + perm_string(s) + ")·" + perm_string(t) + " = " + nm(*lhs) + " but " + nm(a) +
                            "·" + perm_string(compose_perms(s, t)) + " = " + nm(*rhs));
        }
      }
    }
  }

  // composition: completeness and colour discipline
  for (const auto& [key, r] : p.composition) {
    const auto& [a, i, b] = key;
    if (ops[a].inputs[i] != ops[b].output) {
      add("colour", nm(a) + " ∘_" + std::to_string(i) + " " + nm(b) + " is defined on mismatched colours");
    } else if (ops[r].inputs != substituted(a, i, b) || ops[r].output != ops[a].output) {
      add("colour", nm(a) + " ∘_" + std::to_string(i) + " " + nm(b) + " = " + nm(r) + " has the wrong signature");
    }
  }
  for (OpId a = 0; a < ops.size(); ++a) {
    for (std::size_t i = 0; i < arity(a); ++i) {
      for (OpId b = 0; b < ops.size(); ++b) {
        if (composable(a, i, b) && !p.compose(a, i, b)) {
          add("colour", nm(a) + " ∘_" + std::to_string(i) + " " + nm(b) + " is missing");
        }
      }
    }
  }

  // units
  for (OpId a = 0; a < ops.size(); ++a) {
    if (auto r = p.compose(p.identities[ops[a].output], 0, a); r && *r != a) {
      add("unit", "id ∘_0 " + nm(a) + " = " + nm(*r));
    }
    for (std::size_t i = 0; i < arity(a); ++i) {
      if (auto r = p.compose(a, i, p.identities[ops[a].inputs[i]]); r && *r != a) {
        add("unit", nm(a) + " ∘_" + std::to_string(i) + " id = " + nm(*r));
      }
    }
  }

  // associativity and equivariance, over all composable data in range
  for (OpId a = 0; a < ops.size(); ++a) {
    for (std::size_t i = 0; i < arity(a); ++i) {
      for (OpId b = 0; b < ops.size(); ++b) {
        const auto ab = p.compose(a, i, b);
        if (!ab || !composable(a, i, b)) continue;
        for (OpId c = 0; c < ops.size(); ++c) {
          // nested: (a ∘_i b) ∘_{i+j} c = a ∘_i (b ∘_j c)
          for (std::size_t j = 0; j < arity(b); ++j) {
            if (!composable(b, j, c)) continue;
            const auto bc = p.compose(b, j, c);
            const auto lhs = p.compose(*ab, i + j, c);
            const auto rhs = bc ? p.compose(a, i, *bc) : std::nullopt;
            if (lhs && rhs && *lhs != *rhs) {
              add("associativity", "(" + nm(a) + " ∘_" + std::to_string(i) + " " + nm(b) + ") ∘_" +
                                       std::to_string(i + j) + " " + nm(c) + " = " + nm(*lhs) + " but nested = " +
                                       nm(*rhs));
            }
          }
          // parallel: for k > i, (a ∘_k c) ∘_i b = (a ∘_i b) ∘_{k+|b|-1} c
          for (std::size_t k = i + 1; k < arity(a); ++k) {
            if (!composable(a, k, c)) continue;
            const auto ac = p.compose(a, k, c);
            const auto lhs = ac ? p.compose(*ac, i, b) : std::nullopt;
            const auto rhs = p.compose(*ab, k + arity(b) - 1, c);
            if (lhs && rhs && *lhs != *rhs) {
              add("associativity", nm(a) + " with " + nm(b) + " at " + std::to_string(i) + " and " + nm(c) + " at " +
                                       std::to_string(k) + ": " + nm(*lhs) + " vs " + nm(*rhs));
            }
          }
        }
        // (a·σ) ∘_{σ⁻¹(i)} b = (a ∘_i b)·σ'
        for (const Perm& s : perms[arity(a)]) {
          const auto as = p.act(a, s);
          if (!as) continue;
          const std::size_t pos = invert_perm(s)[i];
          const auto lhs = p.compose(*as, pos, b);
          const auto rhs = p.act(*ab, block_perm_outer(s, pos, arity(b)));
          if (lhs && rhs && *lhs != *rhs) {
            add("equivariance", "(" + nm(a) + "·" + perm_string(s) + ") ∘_" + std::to_string(pos) + " " + nm(b) +
                                    " = " + nm(*lhs) + " but expected " + nm(*rhs));
          }
        }
        // a ∘_i (b·τ) = (a ∘_i b)·τ''
        for (const Perm& t : perms[arity(b)]) {
          const auto bt = p.act(b, t);
          if (!bt) continue;
          const auto lhs = p.compose(a, i, *bt);
          const auto rhs = p.act(*ab, block_perm_inner(arity(a), i, t));
          if (lhs && rhs && *lhs != *rhs) {
            add("equivariance", nm(a) + " ∘_" + std::to_string(i) + " (" + nm(b) + "·" + perm_string(t) + ") = " +
                                    nm(*lhs) + " but expected " + nm(*rhs));
          }
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Builders for the fixture operads

namespace detail {

// Fills p.action and p.composition for an operad whose operations of each
// arity are given abstractly by `act`/`compose` functions on op ids.
template <class Act, class Compose>
void fill_tables(ColouredOperad& p, Act act, Compose compose) {
  for (OpId a = 0; a < p.operations.size(); ++a) {
    for (const Perm& s : all_perms(p.operations[a].arity())) p.action[{a, s}] = act(a, s);
  }
  for (OpId a = 0; a < p.operations.size(); ++a) {
    for (std::size_t i = 0; i < p.operations[a].arity(); ++i) {
      for (OpId b = 0; b < p.operations.size(); ++b) {
        if (p.operations[a].inputs[i] != p.operations[b].output) continue;
        if (p.operations[a].arity() + p.operations[b].arity() - 1 > p.max_arity) continue;
        p.composition[{a, i, b}] = compose(a, i, b);
      }
    }
  }
}

}  // namespace detail

// Com: one colour, one operation mu<n> per arity n <= max_arity.
inline ColouredOperad make_com(std::size_t max_arity) {
  ColouredOperad p;
  p.name = "Com";
  p.max_arity = max_arity;
  p.colours = {"*"};
  for (std::size_t n = 0; n <= max_arity; ++n) p.operations.push_back({"mu" + std::to_string(n), std::vector<ColourId>(n, 0), 0});
  p.identities = {1};
  if (max_arity < 1) throw InvalidArgument("Com needs max_arity >= 1 for its identity");
  detail::fill_tables(
      p, [](OpId a, const Perm&) { return a; },
      [&](OpId a, std::size_t, OpId b) { return a + b - 1; });
  return p;
}

// Ass: operations of arity n are the words w (permutations of 0..n-1); the
// word lists the inputs in the order they are multiplied.
inline ColouredOperad make_ass(std::size_t max_arity) {
  if (max_arity < 1) throw InvalidArgument("Ass needs max_arity >= 1 for its identity");
  ColouredOperad p;
  p.name = "Ass";
  p.max_arity = max_arity;
  p.colours = {"*"};
  std::map<Perm, OpId> index;
  std::vector<Perm> words;
  for (std::size_t n = 0; n <= max_arity; ++n) {
    for (const Perm& w : all_perms(n)) {
      std::string name = "w";
      for (std::size_t x : w) name += std::to_string(x);
      if (n == 0) name = "w()";
      index[w] = p.operations.size();
      words.push_back(w);
      p.operations.push_back({name, std::vector<ColourId>(n, 0), 0});
    }
  }
  p.identities = {index.at(Perm{0})};
  detail::fill_tables(
      p,
      // input j of w is input σ⁻¹[j] of w·σ
      [&](OpId a, const Perm& s) { return index.at(compose_perms(invert_perm(s), words[a])); },
      [&](OpId a, std::size_t i, OpId b) {
        const Perm& u = words[a];
        const Perm& v = words[b];
        const std::size_t m = v.size();
        Perm out;
        for (std::size_t x : u) {
          if (x == i) {
            for (std::size_t y : v) out.push_back(y + i);
          } else {
            out.push_back(x < i ? x : x + m - 1);
          }
        }
        return index.at(out);
      });
  return p;
}

// A category viewed as an operad with only unary operations; truncated at
// max_arity only nominally (there are no operations of other arities).
// Objects 0, 1; non-identity arrows e: 0->0, f, g: 0->1 with
// e∘e = e, f∘e = g, g∘e = g.
inline ColouredOperad make_category(std::size_t max_arity = 3) {
  ColouredOperad p;
  p.name = "Cat2";
  p.max_arity = max_arity;
  p.colours = {"0", "1"};
  // name, source, target
  p.operations = {{"id0", {0}, 0}, {"id1", {1}, 1}, {"e", {0}, 0}, {"f", {0}, 1}, {"g", {0}, 1}};
  p.identities = {0, 1};
  const std::map<std::pair<OpId, OpId>, OpId> after = {// (x, y) -> x∘y for non-identity pairs
                                                       {{2, 2}, 2},
                                                       {{3, 2}, 4},
                                                       {{4, 2}, 4}};
  detail::fill_tables(
      p, [](OpId a, const Perm&) { return a; },
      [&](OpId a, std::size_t, OpId b) -> OpId {
        if (a <= 1) return b;
        if (b <= 1) return a;
        return after.at({a, b});
      });
  return p;
}

// The free coloured operad on one binary operation m:(a,b)->a, truncated at
// arity 3. Operations are (shape, σ) with the free action of the symmetric
// group: shapes id_a, id_b, m, and mm = m ∘_0 m with inputs (a,b,b).
inline ColouredOperad make_two_colour() {
  ColouredOperad p;
  p.name = "Bin2";
  p.max_arity = 3;
  p.colours = {"a", "b"};
  enum Shape { kIdA, kIdB, kM, kMM };
  struct Op {
    Shape shape;
    Perm sigma;
  };
  std::vector<Op> ops;
  const std::vector<std::vector<ColourId>> base_inputs = {{0}, {1}, {0, 1}, {0, 1, 1}};
  const std::vector<std::string> base_names = {"id_a", "id_b", "m", "mm"};
  std::map<std::pair<int, Perm>, OpId> index;
  for (Shape sh : {kIdA, kIdB, kM, kMM}) {
    for (const Perm& s : all_perms(base_inputs[sh].size())) {
      std::vector<ColourId> in(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) in[i] = base_inputs[sh][s[i]];
      std::string name = base_names[sh];
      if (s != identity_perm(s.size())) name += perm_string(s);
      index[{sh, s}] = p.operations.size();
      ops.push_back({sh, s});
      p.operations.push_back({name, in, ColourId{sh == kIdB ? 1U : 0U}});
    }
  }
  p.identities = {index.at({kIdA, Perm{0}}), index.at({kIdB, Perm{0}})};
  detail::fill_tables(
      p, [&](OpId a, const Perm& s) { return index.at({ops[a].shape, compose_perms(ops[a].sigma, s)}); },
      [&](OpId a, std::size_t i, OpId b) -> OpId {
        if (ops[a].shape <= kIdB) return b;
        if (ops[b].shape <= kIdB) return a;
        // (m·σ) ∘_i (m·τ) = (m ∘_{σ[i]} (m·τ))·σ' = ((m ∘_0 m)·τ'')·σ'
        const Perm& s = ops[a].sigma;
        const Perm& t = ops[b].sigma;
        if (ops[a].shape != kM || ops[b].shape != kM || s[i] != 0) throw Error("two-colour builder: unexpected composite");
        const Perm inner = block_perm_inner(2, 0, t);
        const Perm outer = block_perm_outer(s, i, 2);
        return index.at({kMM, compose_perms(inner, outer)});
      });
  return p;
}

inline ColouredOperad make_fixture_operad(const std::string& name) {
  if (name == "com") return make_com(3);
  if (name == "ass") return make_ass(3);
  if (name == "category") return make_category(3);
  if (name == "two-colour") return make_two_colour();
  throw InvalidArgument("unknown fixture operad '" + name + "' (com, ass, category, two-colour)");
}

}  // namespace dendro
