#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dendro/error.hpp"
#include "dendro/faces.hpp"
#include "dendro/subobject.hpp"

namespace dendro {

// One pushout of Λ^e[F/D] -> Ω[F/D] along its canonical map into T. Adds the
// two faces (F, D) and (F, D ∪ {e}).
struct ExpansionStep {
  Face face;
  EdgeId inner_edge = 0;

  Face partner() const { return Face{face.vertices, face.contracted | bit(inner_edge), face.edge}; }
  friend bool operator==(const ExpansionStep&, const ExpansionStep&) = default;
};

struct Certificate {
  Subobject start;
  std::vector<ExpansionStep> steps;
  Subobject end;

  const Tree& tree() const { return start.ambient(); }
};

// Why `s` cannot be applied to `a`, or nullopt if it can. Uses the
// composition route (faces of the domain pushed forward into T).
inline std::optional<std::string> step_problem(const Subobject& a, const ExpansionStep& s) {
  const Tree& t = a.ambient();
  if (!is_valid_face(t, s.face) || s.face.is_edge()) return "step face is not a vertex face of " + t.literal();
  if (s.inner_edge >= t.edge_count()) return "inner edge out of range";
  if (!has_bit(subtree_inner(t, s.face.vertices), s.inner_edge) || has_bit(s.face.contracted, s.inner_edge)) {
    return "edge '" + t.name(s.inner_edge) + "' is not an inner edge of the step's domain";
  }
  const Face partner = s.partner();
  if (a.member(s.face)) return "face being added is already present";
  if (a.member(partner)) return "inner face being added is already present";
  for (const Face& g : faces_below(t, s.face)) {
    if (g == s.face || g == partner) continue;
    if (!a.member(g)) return "horn face " + face_string(t, g) + " is missing";
  }
  return std::nullopt;
}

inline Subobject apply_step(const Subobject& a, const ExpansionStep& s) {
  if (auto problem = step_problem(a, s)) throw InvalidArgument("cannot apply step: " + *problem);
  std::vector<Face> m = a.members();
  m.push_back(s.face);
  m.push_back(s.partner());
  return Subobject(a.ambient(), std::move(m));
}

struct VerifyReport {
  bool ok = true;
  std::optional<std::size_t> failed_step;  // index of the first offending step
  std::string reason;
};

inline VerifyReport verify_certificate(const Certificate& c) {
  VerifyReport r;
  auto fail = [&](std::optional<std::size_t> step, std::string why) {
    r.ok = false;
    r.failed_step = step;
    r.reason = std::move(why);
    return r;
  };
  if (!(c.start.ambient() == c.end.ambient())) return fail(std::nullopt, "start and end have different trees");
  if (!c.start.is_downward_closed()) return fail(std::nullopt, "start is not downward closed");
  Subobject cur = c.start;
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    if (auto problem = step_problem(cur, c.steps[i])) return fail(i, *problem);
    cur = apply_step(cur, c.steps[i]);
  }
  if (!(cur == c.end)) {
    return fail(std::nullopt, "replay ends with " + std::to_string(cur.size()) + " faces, certificate claims " +
                                  std::to_string(c.end.size()));
  }
  return r;
}

enum class CertifyStatus { found, not_found, budget_exhausted };

struct CertifyResult {
  CertifyStatus status = CertifyStatus::not_found;
  std::optional<Certificate> certificate;
  std::size_t states_explored = 0;
  std::string message;
};

struct CertifyOptions {
  std::size_t max_states = 1'000'000;
};

// Searches for a sequence of inner-horn pushouts from a to b. Targets are
// tried by increasing subtree size, then by decreasing contraction set, the
// order of the Segal-core filtration; dead ends are backtracked and
// memoized.
inline CertifyResult certify_inner_anodyne(const Subobject& a, const Subobject& b, CertifyOptions options = {}) {
  require_same_ambient(a, b);
  if (!contains(b, a)) throw InvalidArgument("start is not contained in target");
  if (!a.is_downward_closed() || !b.is_downward_closed()) throw InvalidArgument("subobjects must be downward closed");
  const Tree& t = a.ambient();
  const auto& all = b.members();
  auto index_of = [&](const Face& f) {
    return static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), f) - all.begin());
  };

  struct Candidate {
    std::size_t face;
    std::size_t partner;
    EdgeId edge;
    std::vector<std::size_t> horn;
  };
  std::vector<bool> present(all.size(), false);
  std::size_t missing = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    present[i] = a.member(all[i]);
    if (!present[i]) ++missing;
  }
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Face& f = all[i];
    if (present[i] || f.is_edge()) continue;
    for (EdgeId e : bits_of(subtree_inner(t, f.vertices) & ~f.contracted)) {
      const Face p{f.vertices, f.contracted | bit(e), f.edge};
      if (!b.member(p) || a.member(p)) continue;
      Candidate c{i, index_of(p), e, {}};
      for (std::size_t j = 0; j < all.size(); ++j) {
        if (j != i && j != c.partner && factors_through(t, all[j], f)) c.horn.push_back(j);
      }
      candidates.push_back(std::move(c));
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    const Face& fx = all[x.face];
    const Face& fy = all[y.face];
    if (popcount(fx.vertices) != popcount(fy.vertices)) return popcount(fx.vertices) < popcount(fy.vertices);
    return popcount(fx.contracted) > popcount(fy.contracted);
  });

  CertifyResult result;
  std::set<std::vector<bool>> dead;
  std::vector<ExpansionStep> steps;
  bool exhausted = false;
  std::function<bool(std::size_t)> search = [&](std::size_t remaining) {
    if (remaining == 0) return true;
    if (dead.count(present) != 0) return false;
    if (++result.states_explored > options.max_states) {
      exhausted = true;
      return false;
    }
    for (const Candidate& c : candidates) {
      if (present[c.face] || present[c.partner]) continue;
      if (!std::all_of(c.horn.begin(), c.horn.end(), [&](std::size_t j) { return present[j]; })) continue;
      present[c.face] = present[c.partner] = true;
      steps.push_back(ExpansionStep{all[c.face], c.edge});
      if (search(remaining - 2)) return true;
      if (exhausted) return false;
      steps.pop_back();
      present[c.face] = present[c.partner] = false;
    }
    dead.insert(present);
    return false;
  };

  if (missing % 2 == 0 && search(missing)) {
    result.status = CertifyStatus::found;
    result.certificate = Certificate{a, steps, b};
    result.message = "certificate with " + std::to_string(steps.size()) + " steps";
  } else if (exhausted) {
    result.status = CertifyStatus::budget_exhausted;
    result.message = "search budget exhausted after " + std::to_string(options.max_states) + " states";
  } else {
    result.status = CertifyStatus::not_found;
    result.message =
        "no inner-horn pushout sequence exists between these subobjects; retracts are not searched, so this does "
        "not show the inclusion is not inner anodyne";
  }
  return result;
}

}  // namespace dendro
