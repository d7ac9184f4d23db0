#pragma once

// JSON serialization. Every document is an nlohmann::ordered_json whose keys
// are emitted in a fixed order, so identical values print identically.
//
// Schemas (see README.md for the full description):
//   face        {"subtree": {"edge": e} | {"vertices": [v...]}, "contract": [e...]}
//   subobject   {"tree": literal, "members": [face...]}
//   certificate {"format": "dendro-certificate/1", "tree", "start": [face...],
//                "steps": [{"face": face, "inner_edge": e}...], "end": [face...]}
//   operad      {"format": "dendro-operad/1", "name", "max_arity", "colours",
//                "operations": [{"name", "inputs", "output"}...],
//                "identities": {colour: op}, "action": [{"op", "perm", "result"}...],
//                "composition": [{"outer", "position", "inner", "result"}...]}
//   dset        {"format": "dendro-dset/1", "name", "max_vertices", "max_arity",
//                "trees": [{"tree", "elements", "faces": [{"face", "map"}...],
//                           "automorphisms": [{"map": [e...], "action"}...],
//                           "degeneracies": [{"vertex", "map"}...]}...]}
// Element references inside a dset are element names.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dendro/anodyne.hpp"
#include "dendro/checks.hpp"
#include "dendro/dset.hpp"
#include "dendro/error.hpp"
#include "dendro/faces.hpp"
#include "dendro/operad.hpp"
#include "dendro/subobject.hpp"
#include "dendro/tree.hpp"

namespace dendro {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCertificateFormat = "dendro-certificate/1";
inline constexpr const char* kOperadFormat = "dendro-operad/1";
inline constexpr const char* kDsetFormat = "dendro-dset/1";

namespace detail {

[[noreturn]] inline void schema_error(const std::string& what) { throw ValidationError(what); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::string get_string(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) schema_error(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::size_t get_count(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    schema_error(std::string("field '") + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

inline const Json& get_array(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array()) schema_error(std::string("field '") + key + "' must be an array");
  return v;
}

inline void check_format(const Json& j, const char* format) {
  if (get_string(j, "format") != format) schema_error(std::string("expected format '") + format + "'");
}

inline EdgeId edge_by_name(const Tree& t, const Json& v) {
  if (!v.is_string()) schema_error("edge names must be strings");
  const auto id = t.find(v.get<std::string>());
  if (!id) schema_error("unknown edge '" + v.get<std::string>() + "' in " + t.literal());
  return *id;
}

inline Json names_of(const Tree& t, EdgeMask m) {
  Json a = Json::array();
  for (EdgeId e : bits_of(m)) a.push_back(t.name(e));
  return a;
}

}  // namespace detail

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

// ---------------------------------------------------------------------------
// Faces, subobjects, certificates

inline Json to_json(const Tree& t, const Face& f) {
  Json j;
  if (f.is_edge()) {
    j["subtree"] = Json{{"edge", t.name(f.edge)}};
  } else {
    j["subtree"] = Json{{"vertices", detail::names_of(t, f.vertices)}};
  }
  j["contract"] = detail::names_of(t, f.contracted);
  return j;
}

inline Face face_from_json(const Tree& t, const Json& j) {
  const Json& st = detail::field(j, "subtree");
  Face f;
  if (st.is_object() && st.contains("edge")) {
    f.edge = detail::edge_by_name(t, st.at("edge"));
  } else {
    const Json& vs = detail::get_array(st, "vertices");
    if (vs.empty()) detail::schema_error("a vertex subtree needs at least one vertex");
    for (const Json& v : vs) f.vertices |= bit(detail::edge_by_name(t, v));
    if ((f.vertices & ~t.vertex_mask()) != 0) detail::schema_error("subtree lists an edge without a vertex");
    if (!is_connected(t, f.vertices)) detail::schema_error("subtree vertices are not connected");
    f.edge = root_of(t, f.vertices);
  }
  for (const Json& e : detail::get_array(j, "contract")) f.contracted |= bit(detail::edge_by_name(t, e));
  if (!is_valid_face(t, f)) detail::schema_error("contracted edges must be inner edges of the subtree");
  return f;
}

inline Json faces_json(const Tree& t, const std::vector<Face>& fs) {
  Json a = Json::array();
  for (const Face& f : fs) a.push_back(to_json(t, f));
  return a;
}

inline std::vector<Face> faces_from_json(const Tree& t, const Json& a) {
  if (!a.is_array()) detail::schema_error("expected an array of faces");
  std::vector<Face> out;
  for (const Json& j : a) out.push_back(face_from_json(t, j));
  return out;
}

inline Json to_json(const Subobject& a) {
  Json j;
  j["tree"] = a.ambient().literal();
  j["members"] = faces_json(a.ambient(), a.members());
  return j;
}

inline Subobject subobject_from_json(const Json& j) {
  const Tree t = parse_tree(detail::get_string(j, "tree"));
  return Subobject(t, faces_from_json(t, detail::get_array(j, "members")));
}

inline Json to_json(const Certificate& c) {
  const Tree& t = c.tree();
  Json j;
  j["format"] = kCertificateFormat;
  j["tree"] = t.literal();
  j["start"] = to_json(c.start);
  Json steps = Json::array();
  for (const ExpansionStep& s : c.steps) {
    Json step;
    step["face"] = to_json(t, s.face);
    step["inner_edge"] = t.name(s.inner_edge);
    steps.push_back(std::move(step));
  }
  j["steps"] = std::move(steps);
  j["end"] = to_json(c.end);
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  detail::check_format(j, kCertificateFormat);
  const Tree t = parse_tree(detail::get_string(j, "tree"));
  auto side = [&](const char* key) {
    const Subobject a = subobject_from_json(detail::field(j, key));
    if (!(a.ambient() == t)) detail::schema_error(std::string("'") + key + "' is over a different tree");
    return a;
  };
  Certificate c{side("start"), {}, side("end")};
  for (const Json& s : detail::get_array(j, "steps")) {
    c.steps.push_back(ExpansionStep{face_from_json(t, detail::field(s, "face")), detail::edge_by_name(t, detail::field(s, "inner_edge"))});
  }
  return c;
}

// ---------------------------------------------------------------------------
// Operads

inline Json to_json(const ColouredOperad& p) {
  Json j;
  j["format"] = kOperadFormat;
  j["name"] = p.name;
  j["max_arity"] = p.max_arity;
  j["colours"] = p.colours;
  Json ops = Json::array();
  for (const Operation& op : p.operations) {
    Json o;
    o["name"] = op.name;
    Json in = Json::array();
    for (ColourId c : op.inputs) in.push_back(p.colours[c]);
    o["inputs"] = std::move(in);
    o["output"] = p.colours[op.output];
    ops.push_back(std::move(o));
  }
  j["operations"] = std::move(ops);
  Json ids = Json::object();
  for (ColourId c = 0; c < p.colours.size(); ++c) ids[p.colours[c]] = p.operations[p.identities[c]].name;
  j["identities"] = std::move(ids);
  Json action = Json::array();
  for (const auto& [key, r] : p.action) {
    Json a;
    a["op"] = p.operations[key.first].name;
    a["perm"] = key.second;
    a["result"] = p.operations[r].name;
    action.push_back(std::move(a));
  }
  j["action"] = std::move(action);
  Json comp = Json::array();
  for (const auto& [key, r] : p.composition) {
    const auto& [a, i, b] = key;
    Json c;
    c["outer"] = p.operations[a].name;
    c["position"] = i;
    c["inner"] = p.operations[b].name;
    c["result"] = p.operations[r].name;
    comp.push_back(std::move(c));
  }
  j["composition"] = std::move(comp);
  return j;
}

inline ColouredOperad operad_from_json(const Json& j) {
  detail::check_format(j, kOperadFormat);
  ColouredOperad p;
  p.name = detail::get_string(j, "name");
  p.max_arity = detail::get_count(j, "max_arity");
  for (const Json& c : detail::get_array(j, "colours")) {
    if (!c.is_string()) detail::schema_error("colours must be strings");
    p.colours.push_back(c.get<std::string>());
  }
  auto colour = [&](const Json& c) {
    if (!c.is_string()) detail::schema_error("colour references must be strings");
    const auto id = p.find_colour(c.get<std::string>());
    if (!id) detail::schema_error("unknown colour '" + c.get<std::string>() + "'");
    return *id;
  };
  for (const Json& o : detail::get_array(j, "operations")) {
    Operation op;
    op.name = detail::get_string(o, "name");
    for (const Json& c : detail::get_array(o, "inputs")) op.inputs.push_back(colour(c));
    op.output = colour(detail::field(o, "output"));
    p.operations.push_back(std::move(op));
  }
  auto op_ref = [&](const Json& o) {
    if (!o.is_string()) detail::schema_error("operation references must be strings");
    const auto id = p.find_operation(o.get<std::string>());
    if (!id) detail::schema_error("unknown operation '" + o.get<std::string>() + "'");
    return *id;
  };
  const Json& ids = detail::field(j, "identities");
  if (!ids.is_object()) detail::schema_error("identities must map colours to operations");
  p.identities.assign(p.colours.size(), static_cast<OpId>(-1));
  for (const auto& [c, o] : ids.items()) p.identities[colour(Json(c))] = op_ref(o);
  for (OpId id : p.identities) {
    if (id == static_cast<OpId>(-1)) detail::schema_error("every colour needs an identity");
  }
  for (const Json& a : detail::get_array(j, "action")) {
    const OpId op = op_ref(detail::field(a, "op"));
    Perm s;
    for (const Json& x : detail::get_array(a, "perm")) {
      if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0)) {
        detail::schema_error("permutation entries must be non-negative integers");
      }
      s.push_back(x.get<std::size_t>());
    }
    if (!p.action.emplace(std::pair(op, s), op_ref(detail::field(a, "result"))).second) {
      detail::schema_error("duplicate action entry for '" + p.operations[op].name + "'");
    }
  }
  for (const Json& c : detail::get_array(j, "composition")) {
    const auto key = std::tuple(op_ref(detail::field(c, "outer")), detail::get_count(c, "position"),
                                op_ref(detail::field(c, "inner")));
    if (!p.composition.emplace(key, op_ref(detail::field(c, "result"))).second) {
      detail::schema_error("duplicate composition entry");
    }
  }
  check_structure(p);
  return p;
}

// ---------------------------------------------------------------------------
// Tabulated dendroidal sets

inline Json to_json(const TabulatedData& d) {
  Json j;
  j["format"] = kDsetFormat;
  j["name"] = d.name;
  j["max_vertices"] = d.max_vertices;
  j["max_arity"] = d.max_arity;
  Json trees = Json::array();
  for (const Tree& t : tabulated_trees(d)) {
    const TabulatedTree& tt = d.trees.at(canonicalize(t).code);
    auto names_at = [&](const Tree& u, const std::vector<std::size_t>& m) {
      const auto& el = d.trees.at(canonicalize(u).code).elements;
      Json a = Json::array();
      for (std::size_t k : m) a.push_back(el[k]);
      return a;
    };
    Json o;
    o["tree"] = t.literal();
    o["elements"] = tt.elements;
    Json fs = Json::array();
    for (const auto& [g, m] : tt.faces) {
      Json f;
      f["face"] = to_json(t, g);
      f["map"] = names_at(domain(t, g), m);
      fs.push_back(std::move(f));
    }
    o["faces"] = std::move(fs);
    Json auts = Json::array();
    for (const auto& [a, m] : tt.automorphisms) {
      Json x;
      Json img = Json::array();
      for (EdgeId e : a) img.push_back(t.name(e));
      x["map"] = std::move(img);
      x["action"] = names_at(t, m);
      auts.push_back(std::move(x));
    }
    o["automorphisms"] = std::move(auts);
    Json degs = Json::array();
    for (const auto& [v, m] : tt.degeneracies) {
      Json x;
      x["vertex"] = t.name(v);
      x["map"] = names_at(t, m);
      degs.push_back(std::move(x));
    }
    o["degeneracies"] = std::move(degs);
    trees.push_back(std::move(o));
  }
  j["trees"] = std::move(trees);
  return j;
}

inline TabulatedData dset_data_from_json(const Json& j) {
  detail::check_format(j, kDsetFormat);
  TabulatedData d;
  d.name = detail::get_string(j, "name");
  d.max_vertices = detail::get_count(j, "max_vertices");
  d.max_arity = detail::get_count(j, "max_arity");
  const Json& trees = detail::get_array(j, "trees");
  // first pass: trees and element names
  for (const Json& o : trees) {
    TabulatedTree tt;
    tt.tree = parse_tree(detail::get_string(o, "tree"));
    const auto key = canonicalize(tt.tree);
    if (!(key.representative == tt.tree)) detail::schema_error("tree " + tt.tree.literal() + " is not canonical");
    for (const Json& e : detail::get_array(o, "elements")) {
      if (!e.is_string()) detail::schema_error("element names must be strings");
      tt.elements.push_back(e.get<std::string>());
    }
    if (!d.trees.emplace(key.code, std::move(tt)).second) detail::schema_error("tree listed twice");
  }
  auto resolve = [&](const Tree& u, const Json& names) {
    auto it = d.trees.find(canonicalize(u).code);
    if (it == d.trees.end()) detail::schema_error("tree " + u.literal() + " is referenced but not tabulated");
    if (!names.is_array()) detail::schema_error("maps must be arrays of element names");
    std::vector<std::size_t> m;
    for (const Json& n : names) {
      const auto& el = it->second.elements;
      auto pos = n.is_string() ? std::find(el.begin(), el.end(), n.get<std::string>()) : el.end();
      if (pos == el.end()) detail::schema_error("unknown element " + n.dump() + " at " + it->second.tree.literal());
      m.push_back(static_cast<std::size_t>(pos - el.begin()));
    }
    return m;
  };
  for (const Json& o : trees) {
    const Tree t = parse_tree(detail::get_string(o, "tree"));
    TabulatedTree& tt = d.trees.at(canonicalize(t).code);
    for (const Json& f : detail::get_array(o, "faces")) {
      const Face g = face_from_json(t, detail::field(f, "face"));
      tt.faces.emplace_back(g, resolve(domain(t, g), detail::field(f, "map")));
    }
    for (const Json& a : detail::get_array(o, "automorphisms")) {
      std::vector<EdgeId> m;
      for (const Json& e : detail::get_array(a, "map")) m.push_back(detail::edge_by_name(t, e));
      tt.automorphisms.emplace_back(std::move(m), resolve(t, detail::field(a, "action")));
    }
    for (const Json& g : detail::get_array(o, "degeneracies")) {
      const EdgeId v = detail::edge_by_name(t, detail::field(g, "vertex"));
      if (!is_unary_vertex(t, v)) detail::schema_error("degeneracy at a non-unary vertex of " + t.literal());
      tt.degeneracies.emplace_back(v, resolve(t, detail::field(g, "map")));
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Reports

inline Json trees_json(const std::vector<CanonicalKey>& keys) {
  Json a = Json::array();
  for (const auto& k : keys) {
    Json o;
    o["tree"] = k.representative.literal();
    o["code"] = k.code;
    o["vertices"] = k.representative.vertex_count();
    o["automorphisms"] = automorphisms(k.representative).size();
    a.push_back(std::move(o));
  }
  return a;
}

inline Json sieve_map_json(const Tree& t, const DendroidalSetView& x, const SieveMap& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    Json o;
    o["face"] = to_json(t, m.faces[i]);
    o["value"] = x.show(domain(t, m.faces[i]), m.values[i]);
    a.push_back(std::move(o));
  }
  return a;
}

inline Json to_json(const SegalReport& r, const DendroidalSetView& x) {
  Json j;
  j["check"] = "segal";
  j["view"] = r.view;
  j["ok"] = r.ok();
  Json res = Json::array();
  for (const SegalResult& s : r.results) {
    Json o;
    o["tree"] = s.tree.literal();
    o["dendrices"] = s.dendrices;
    o["core_maps"] = s.core_maps;
    o["injective"] = s.injective;
    o["surjective"] = s.surjective;
    if (s.collision) o["collision"] = Json::array({x.show(s.tree, s.collision->first), x.show(s.tree, s.collision->second)});
    if (s.missed) o["missed"] = sieve_map_json(s.tree, x, *s.missed);
    res.push_back(std::move(o));
  }
  j["results"] = std::move(res);
  j["skipped"] = r.skipped;
  return j;
}

inline Json to_json(const InnerKanReport& r, const DendroidalSetView& x) {
  Json j;
  j["check"] = "inner-kan";
  j["view"] = r.view;
  j["ok"] = r.ok();
  j["unique"] = r.unique();
  Json res = Json::array();
  for (const HornResult& h : r.results) {
    Json o;
    o["tree"] = h.tree.literal();
    o["edge"] = h.tree.name(h.edge);
    o["horn_maps"] = h.horn_maps;
    o["fillable"] = h.fillable;
    o["max_fillers"] = h.max_fillers;
    Json w = Json::array();
    for (const SieveMap& m : h.unfillable) w.push_back(sieve_map_json(h.tree, x, m));
    o["unfillable"] = std::move(w);
    res.push_back(std::move(o));
  }
  j["results"] = std::move(res);
  Json sk = Json::array();
  for (const auto& [t, e] : r.skipped) sk.push_back(Json{{"tree", t}, {"edge", e}});
  j["skipped"] = std::move(sk);
  return j;
}

inline Json to_json(const NormalityReport& r, const DendroidalSetView& x) {
  Json j;
  j["check"] = "normal";
  j["view"] = r.view;
  j["ok"] = r.ok();
  Json res = Json::array();
  for (const NormalityResult& n : r.results) {
    Json o;
    o["tree"] = n.tree.literal();
    o["nondegenerate"] = n.nondegenerate;
    o["automorphisms"] = n.automorphisms;
    Json fx = Json::array();
    for (const auto& [v, a] : n.fixed) {
      Json f;
      f["dendrex"] = x.show(n.tree, v);
      Json img = Json::array();
      for (EdgeId e : a) img.push_back(n.tree.name(e));
      f["automorphism"] = std::move(img);
      fx.push_back(std::move(f));
    }
    o["fixed_points"] = std::move(fx);
    res.push_back(std::move(o));
  }
  j["results"] = std::move(res);
  j["skipped"] = r.skipped;
  return j;
}

inline Json to_json(const SimplicialData& s, const DendroidalSetView& x) {
  Json j;
  j["check"] = "simplicial";
  j["view"] = x.describe();
  j["ok"] = s.ok();
  Json levels = Json::array();
  for (std::size_t n = 0; n <= s.max_n; ++n) {
    const Tree t = Tree::linear(n);
    Json o;
    o["n"] = n;
    Json el = Json::array();
    for (const Dendrex& v : s.levels[n]) el.push_back(x.show(t, v));
    o["elements"] = std::move(el);
    o["nondegenerate"] = s.nondegenerate[n];
    o["faces"] = n >= 1 ? Json(s.face[n]) : Json::array();
    o["degeneracies"] = n < s.max_n ? Json(s.degeneracy[n]) : Json::array();
    levels.push_back(std::move(o));
  }
  j["levels"] = std::move(levels);
  j["identity_failures"] = s.identity_failures;
  return j;
}

inline Json to_json(const OperadReport& r) {
  Json j;
  j["ok"] = r.ok();
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back(Json{{"axiom", x.axiom}, {"detail", x.detail}});
  j["violations"] = std::move(v);
  return j;
}

inline Json to_json(const AuditReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["pairs_checked"] = r.pairs_checked;
  Json f = Json::array();
  for (const auto& x : r.failures) {
    f.push_back(Json{{"tree", x.tree}, {"first", x.first}, {"then", x.second}, {"element", x.element}, {"detail", x.detail}});
  }
  j["failures"] = std::move(f);
  return j;
}

}  // namespace dendro
