// dendro: command-line surface of the dendro library.
//
// Exit codes: 0 success, 1 check failure (with witness output), 2 usage
// error, 3 input validation error. `--json` selects machine-readable output;
// `--out FILE` additionally writes the JSON result to FILE, resolved against
// $DENDRO_OUT_DIR when FILE is relative and the variable is set.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "dendro/dendro.hpp"

using namespace dendro;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kInvalidInput = 3;

constexpr const char* kOutDirEnv = "DENDRO_OUT_DIR";

struct Outcome {
  int code = kOk;
  Json json;
  std::string text;
};

struct Options {
  bool json = false;
  std::string out;
};

std::string resolve_out(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') p = std::filesystem::path(dir) / p;
  }
  return p.string();
}

void write_file(const std::string& path, const std::string& content) {
  const std::string full = resolve_out(path);
  const auto parent = std::filesystem::path(full).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(full, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + full + "'");
  out << content;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string face_list(const Tree& t, const std::vector<Face>& fs) {
  std::string s;
  for (const Face& f : fs) s += "  " + face_string(t, f) + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Inputs

ColouredOperad load_operad(const std::string& path) {
  ColouredOperad p = operad_from_json(read_json_file(path));
  const OperadReport rep = validate_operad(p);
  if (!rep.ok()) {
    const auto& v = rep.violations.front();
    throw ValidationError("operad '" + p.name + "' violates " + v.axiom + " (" + std::to_string(rep.violations.size()) +
                          " violations): " + v.detail);
  }
  return p;
}

TabulatedSet load_dset(const std::string& path) { return load_tabulated(dset_data_from_json(read_json_file(path))); }

struct ViewSource {
  std::string operad;
  std::string dset;
  std::string representable;
  std::string subobject;

  void add_to(CLI::App* cmd) {
    auto* o = cmd->add_option("--operad", operad, "Operad file (dendro-operad/1); the view is its nerve");
    auto* d = cmd->add_option("--dset", dset, "Tabulated dendroidal set file (dendro-dset/1)");
    auto* r = cmd->add_option("--representable", representable, "Tree literal T; the view is Ω[T]");
    auto* s = cmd->add_option("--subobject", subobject, "Subobject file (as printed by core/horn --json)");
    o->excludes(d, r, s);
    d->excludes(r, s);
    r->excludes(s);
  }

  std::unique_ptr<DendroidalSetView> load() const {
    if (!operad.empty()) return std::make_unique<NerveView>(load_operad(operad));
    if (!dset.empty()) return std::make_unique<TabulatedSet>(load_dset(dset));
    if (!representable.empty()) return std::make_unique<SubobjectView>(representable_view(parse_tree(representable)));
    if (!subobject.empty()) return std::make_unique<SubobjectView>(subobject_from_json(read_json_file(subobject)));
    throw CLI::RequiredError("one of --operad, --dset, --representable, --subobject");
  }
};

// ---------------------------------------------------------------------------
// Commands

Outcome cmd_trees(std::size_t max_vertices, std::size_t max_arity) {
  const auto keys = enumerate_trees(max_vertices, max_arity);
  Outcome o;
  o.json["command"] = "trees";
  o.json["max_vertices"] = max_vertices;
  o.json["max_arity"] = max_arity;
  o.json["count"] = keys.size();
  o.json["trees"] = trees_json(keys);
  for (const auto& k : keys) {
    o.text += k.representative.literal() + "  (vertices " + std::to_string(k.representative.vertex_count()) +
              ", automorphisms " + std::to_string(automorphisms(k.representative).size()) + ")\n";
  }
  o.text += std::to_string(keys.size()) + " trees\n";
  return o;
}

Outcome cmd_faces(const std::string& literal) {
  const Tree t = parse_tree(literal);
  const auto fs = faces(t);
  Outcome o;
  o.json["command"] = "faces";
  o.json["tree"] = t.literal();
  o.json["count"] = fs.size();
  o.json["faces"] = faces_json(t, fs);
  o.text = "faces of " + t.literal() + ": " + std::to_string(fs.size()) + "\n" + face_list(t, fs);
  return o;
}

Outcome subobject_outcome(const std::string& kind, const Subobject& a, const std::string& extra = "") {
  const Tree& t = a.ambient();
  Outcome o;
  o.json["command"] = kind;
  o.json["tree"] = t.literal();
  o.json["count"] = a.size();
  o.json["members"] = faces_json(t, a.members());
  o.json["maximal"] = faces_json(t, a.maximal_faces());
  o.text = kind + " of " + t.literal() + extra + ": " + std::to_string(a.size()) + " faces, maximal:\n" +
           face_list(t, a.maximal_faces());
  return o;
}

Subobject certify_start(const Tree& t, const std::string& from) {
  if (from == "core") return segal_core(t);
  if (from.rfind("horn:", 0) == 0) return inner_horn(t, t.id(from.substr(5)));
  if (from == "ext-boundary") return external_boundary(t);
  throw ValidationError("--from must be 'core', 'ext-boundary' or 'horn:EDGE', got '" + from + "'");
}

Outcome cmd_certify(const std::string& literal, const std::string& from) {
  const Tree t = parse_tree(literal);
  const Subobject start = certify_start(t, from);
  const CertifyResult res = certify_inner_anodyne(start, representable(t));
  Outcome o;
  if (res.status != CertifyStatus::found) {
    o.code = kCheckFailed;
    o.json["command"] = "certify";
    o.json["tree"] = t.literal();
    o.json["from"] = from;
    o.json["status"] = res.status == CertifyStatus::not_found ? "not_found" : "budget_exhausted";
    o.json["states_explored"] = res.states_explored;
    o.json["message"] = res.message;
    o.text = "no certificate for " + from + " ⊆ Ω[" + t.literal() + "]: " + res.message + "\n";
    return o;
  }
  const Certificate& c = *res.certificate;
  o.json = to_json(c);
  o.text = "certificate " + from + " ⊆ Ω[" + t.literal() + "]: " + std::to_string(c.steps.size()) + " steps\n";
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    o.text += "  " + std::to_string(i + 1) + ". add " + face_string(t, c.steps[i].face) + " and its inner face at " +
              t.name(c.steps[i].inner_edge) + "\n";
  }
  return o;
}

Outcome cmd_verify(const std::string& path) {
  const Certificate c = certificate_from_json(read_json_file(path));
  const VerifyReport r = verify_certificate(c);
  Outcome o;
  o.code = r.ok ? kOk : kCheckFailed;
  o.json["command"] = "verify";
  o.json["tree"] = c.tree().literal();
  o.json["steps"] = c.steps.size();
  o.json["ok"] = r.ok;
  o.json["failed_step"] = r.failed_step ? Json(*r.failed_step) : Json(nullptr);
  o.json["reason"] = r.reason;
  o.text = r.ok ? "certificate valid (" + std::to_string(c.steps.size()) + " steps)\n"
                : "certificate invalid" + (r.failed_step ? " at step " + std::to_string(*r.failed_step) : std::string()) +
                      ": " + r.reason + "\n";
  return o;
}

Outcome cmd_nerve(const std::string& path, const std::string& literal) {
  const NerveView x(load_operad(path));
  const Tree t = parse_tree(literal);
  const auto xs = x.evaluate(t);
  Outcome o;
  o.json["command"] = "nerve";
  o.json["operad"] = x.operad().name;
  o.json["tree"] = t.literal();
  o.json["count"] = xs.size();
  Json a = Json::array();
  for (const Dendrex& v : xs) {
    a.push_back(x.show(t, v));
    o.text += "  " + x.show(t, v) + "\n";
  }
  o.json["dendrices"] = std::move(a);
  o.text = "N(" + x.operad().name + ")(" + t.literal() + "): " + std::to_string(xs.size()) + " dendrices\n" + o.text;
  return o;
}

std::string sieve_text(const Tree& t, const DendroidalSetView& x, const SieveMap& m) {
  std::string s;
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    s += "      " + face_string(t, m.faces[i]) + " -> " + x.show(domain(t, m.faces[i]), m.values[i]) + "\n";
  }
  return s;
}

Outcome cmd_check_segal(const DendroidalSetView& x, std::size_t max_vertices) {
  const SegalReport r = segal_char_check(x, max_vertices);
  Outcome o;
  o.code = r.ok() ? kOk : kCheckFailed;
  o.json = to_json(r, x);
  for (const SegalResult& s : r.results) {
    o.text += s.tree.literal() + ": " + std::to_string(s.dendrices) + " dendrices, " + std::to_string(s.core_maps) +
              " core maps, " + (s.bijective() ? "bijective" : "NOT bijective") + "\n";
    if (s.collision) {
      o.text += "    collision: " + x.show(s.tree, s.collision->first) + " and " + x.show(s.tree, s.collision->second) +
                " have the same core restriction\n";
    }
    if (s.missed) o.text += "    core family with no dendrex:\n" + sieve_text(s.tree, x, *s.missed);
  }
  if (!r.skipped.empty()) o.text += std::to_string(r.skipped.size()) + " trees skipped (beyond the view's truncation)\n";
  o.text += x.describe() + (r.ok() ? ": bijective at every tree\n" : ": Segal condition FAILS\n");
  return o;
}

Outcome cmd_check_inner_kan(const DendroidalSetView& x, std::size_t max_vertices) {
  const InnerKanReport r = inner_kan_check(x, max_vertices);
  Outcome o;
  o.code = r.ok() ? kOk : kCheckFailed;
  o.json = to_json(r, x);
  for (const HornResult& h : r.results) {
    o.text += h.tree.literal() + " at " + h.tree.name(h.edge) + ": " + std::to_string(h.fillable) + "/" +
              std::to_string(h.horn_maps) + " horns fillable, at most " + std::to_string(h.max_fillers) + " fillers\n";
    for (const SieveMap& m : h.unfillable) o.text += "    unfillable horn:\n" + sieve_text(h.tree, x, m);
  }
  if (!r.skipped.empty()) o.text += std::to_string(r.skipped.size()) + " horns skipped (beyond the view's truncation)\n";
  o.text += x.describe() + (r.ok() ? (r.unique() ? ": every inner horn fills uniquely\n" : ": every inner horn fills\n")
                                   : ": inner Kan condition FAILS\n");
  return o;
}

Outcome cmd_check_normal(const DendroidalSetView& x, std::size_t max_vertices) {
  const NormalityReport r = normality_check(x, max_vertices);
  Outcome o;
  o.code = r.ok() ? kOk : kCheckFailed;
  o.json = to_json(r, x);
  for (const NormalityResult& n : r.results) {
    o.text += n.tree.literal() + ": " + std::to_string(n.nondegenerate) + " nondegenerate, " +
              std::to_string(n.automorphisms) + " automorphisms" + (n.ok() ? ", free\n" : ", NOT free\n");
    for (const auto& [v, a] : n.fixed) {
      std::string img;
      for (EdgeId e = 0; e < a.size(); ++e) img += (e ? "," : "") + n.tree.name(e) + "->" + n.tree.name(a[e]);
      o.text += "    " + x.show(n.tree, v) + " is fixed by {" + img + "}\n";
    }
  }
  o.text += x.describe() + (r.ok() ? ": normal\n" : ": NOT normal\n");
  return o;
}

Outcome cmd_restrict(const DendroidalSetView& x, std::size_t max_n) {
  const SimplicialData s = simplicial_restriction(x, max_n);
  Outcome o;
  o.code = s.ok() ? kOk : kCheckFailed;
  o.json = to_json(s, x);
  for (std::size_t n = 0; n <= max_n; ++n) {
    o.text += "level " + std::to_string(n) + ": " + std::to_string(s.levels[n].size()) + " simplices, " +
              std::to_string(s.nondegenerate[n]) + " nondegenerate\n";
  }
  for (const auto& f : s.identity_failures) o.text += "  simplicial identity fails: " + f + "\n";
  o.text += s.ok() ? "simplicial identities hold\n" : "simplicial identities FAIL\n";
  return o;
}

Outcome cmd_validate_operad(const std::string& path) {
  const ColouredOperad p = operad_from_json(read_json_file(path));
  const OperadReport r = validate_operad(p);
  Outcome o;
  o.code = r.ok() ? kOk : kCheckFailed;
  o.json = to_json(r);
  o.json["operad"] = p.name;
  for (const auto& v : r.violations) o.text += "  " + v.axiom + ": " + v.detail + "\n";
  o.text += p.name + (r.ok() ? ": all operad axioms hold\n" : ": " + std::to_string(r.violations.size()) + " violations\n");
  return o;
}

Outcome cmd_audit(const std::string& path) {
  const TabulatedSet x(dset_data_from_json(read_json_file(path)));
  const AuditReport r = functoriality_audit(x, tabulated_trees(x.data()), x.data().max_vertices);
  Outcome o;
  o.code = r.ok() ? kOk : kCheckFailed;
  o.json = to_json(r);
  for (const auto& f : r.failures) o.text += "  " + f.tree + ": " + f.first + " then " + f.second + " on " + f.element + ": " + f.detail + "\n";
  o.text += std::to_string(r.pairs_checked) + " composable pairs checked: " + (r.ok() ? "functorial\n" : "NOT functorial\n");
  return o;
}

Outcome data_outcome(const Json& j, const std::string& summary) {
  Outcome o;
  o.json = j;
  o.text = summary + "\n" + dump(j);
  return o;
}

std::size_t element_index(const TabulatedTree& tt, const std::string& name) {
  for (std::size_t k = 0; k < tt.elements.size(); ++k) {
    if (tt.elements[k] == name) return k;
  }
  throw ValidationError("no element '" + name + "' at " + tt.tree.literal());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dendro: combinatorics of the tree category Ω and dendroidal sets"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");
  Options opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", opt.json, "Machine-readable JSON output");
    cmd->add_option("--out", opt.out, "Also write the JSON result to FILE (relative to $DENDRO_OUT_DIR if set)");
  };

  std::function<Outcome()> run;

  std::size_t max_vertices = 0, max_arity = 0, max_n = 0;
  std::string tree, edge, from = "core", file;
  ViewSource src;

  auto* trees = app.add_subcommand("trees", "Enumerate canonical trees");
  trees->add_option("--max-vertices", max_vertices)->required();
  trees->add_option("--max-arity", max_arity)->required();
  add_common(trees);
  trees->callback([&] { run = [&] { return cmd_trees(max_vertices, max_arity); }; });

  auto* fc = app.add_subcommand("faces", "List all faces of a tree");
  fc->add_option("TREE", tree)->required();
  add_common(fc);
  fc->callback([&] { run = [&] { return cmd_faces(tree); }; });

  for (const char* kind : {"core", "boundary", "ext-boundary"}) {
    auto* c = app.add_subcommand(kind, std::string("The ") + kind + " subobject of Ω[TREE]");
    c->add_option("TREE", tree)->required();
    add_common(c);
    const std::string k = kind;
    c->callback([&, k] {
      run = [&, k] {
        const Tree t = parse_tree(tree);
        const Subobject a = k == "core" ? segal_core(t) : k == "boundary" ? boundary(t) : external_boundary(t);
        return subobject_outcome(k, a);
      };
    });
  }

  auto* horn = app.add_subcommand("horn", "The inner horn Λ^E[TREE]");
  horn->add_option("TREE", tree)->required();
  horn->add_option("--edge", edge, "Inner edge name")->required();
  add_common(horn);
  horn->callback([&] {
    run = [&] {
      const Tree t = parse_tree(tree);
      Outcome o = subobject_outcome("horn", inner_horn(t, t.id(edge)), " at " + edge);
      o.json["edge"] = edge;
      return o;
    };
  });

  auto* cert = app.add_subcommand("certify", "Find an inner anodyne certificate START ⊆ Ω[TREE]");
  cert->add_option("TREE", tree)->required();
  cert->add_option("--from", from, "core (default), ext-boundary, or horn:EDGE");
  add_common(cert);
  cert->callback([&] { run = [&] { return cmd_certify(tree, from); }; });

  auto* ver = app.add_subcommand("verify", "Replay a certificate file");
  ver->add_option("FILE", file)->required();
  add_common(ver);
  ver->callback([&] { run = [&] { return cmd_verify(file); }; });

  auto* nerve = app.add_subcommand("nerve", "Dendrices of the nerve of an operad at a tree");
  nerve->add_option("OPERAD_FILE", file)->required();
  nerve->add_option("--tree", tree)->required();
  add_common(nerve);
  nerve->callback([&] { run = [&] { return cmd_nerve(file, tree); }; });

  struct CheckCmd {
    const char* name;
    const char* help;
    Outcome (*fn)(const DendroidalSetView&, std::size_t);
  };
  for (const CheckCmd& c : {CheckCmd{"check-segal", "Segal map bijectivity at every tree", cmd_check_segal},
                            CheckCmd{"check-inner-kan", "Inner horn filling at every tree", cmd_check_inner_kan},
                            CheckCmd{"check-normal", "Free automorphism action on nondegenerate dendrices", cmd_check_normal}}) {
    auto* s = app.add_subcommand(c.name, c.help);
    src.add_to(s);
    s->add_option("--max-vertices", max_vertices)->required();
    add_common(s);
    auto fn = c.fn;
    s->callback([&, fn] { run = [&, fn] { return fn(*src.load(), max_vertices); }; });
  }

  auto* res = app.add_subcommand("restrict", "Simplicial restriction i^*X up to level N");
  src.add_to(res);
  res->add_option("--max-n", max_n)->required();
  add_common(res);
  res->callback([&] { run = [&] { return cmd_restrict(*src.load(), max_n); }; });

  std::string fixture_name;
  auto* fix = app.add_subcommand("fixture", "Print a fixture operad (com, ass, category, two-colour)");
  fix->add_option("NAME", fixture_name)->required();
  add_common(fix);
  fix->callback([&] {
    run = [&] {
      const ColouredOperad p = make_fixture_operad(fixture_name);
      return data_outcome(to_json(p), "operad " + p.name + " (" + std::to_string(p.operations.size()) + " operations)");
    };
  });

  auto* vop = app.add_subcommand("validate-operad", "Check the operad axioms of an operad file");
  vop->add_option("FILE", file)->required();
  add_common(vop);
  vop->callback([&] { run = [&] { return cmd_validate_operad(file); }; });

  std::string name;
  auto* tab = app.add_subcommand("tabulate", "Tabulate a view on canonical trees");
  src.add_to(tab);
  tab->add_option("--max-vertices", max_vertices)->required();
  tab->add_option("--max-arity", max_arity)->required();
  tab->add_option("--name", name, "Name of the tabulated set");
  add_common(tab);
  tab->callback([&] {
    run = [&] {
      const auto x = src.load();
      const TabulatedData d = tabulate(*x, max_vertices, max_arity, name.empty() ? x->describe() : name);
      return data_outcome(to_json(d), "tabulated " + d.name + " on " + std::to_string(d.trees.size()) + " trees");
    };
  });

  auto* aud = app.add_subcommand("audit", "Functoriality audit of a tabulated set file");
  aud->add_option("FILE", file)->required();
  add_common(aud);
  aud->callback([&] { run = [&] { return cmd_audit(file); }; });

  std::string element;
  bool del = false, dup = false;
  auto* mut = app.add_subcommand("mutate", "Delete or duplicate one element of a tabulated set");
  mut->add_option("--dset", file)->required();
  mut->add_option("--tree", tree, "Tree carrying the element")->required();
  mut->add_option("--element", element, "Element name")->required();
  auto* fd = mut->add_flag("--delete", del, "Delete the element (and everything above it)");
  auto* fu = mut->add_flag("--duplicate", dup, "Add a copy of the element with the same faces");
  fd->excludes(fu);
  add_common(mut);
  mut->callback([&] {
    run = [&] {
      if (!del && !dup) throw CLI::RequiredError("--delete or --duplicate");
      const TabulatedData d = dset_data_from_json(read_json_file(file));
      const std::string code = canonicalize(parse_tree(tree)).code;
      const auto it = d.trees.find(code);
      if (it == d.trees.end()) throw ValidationError("tree " + tree + " is not tabulated");
      const std::size_t k = element_index(it->second, element);
      const TabulatedData m = del ? delete_element(d, code, k) : duplicate_element(d, code, k);
      return data_outcome(to_json(m), "mutant " + m.name);
    };
  });

  try {
    app.parse(argc, argv);
    Outcome o = run();
    if (!opt.out.empty()) write_file(opt.out, dump(o.json));
    std::cout << (opt.json ? dump(o.json) : o.text);
    return o.code;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "dendro: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const Json::exception& e) {
    std::cerr << "dendro: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "dendro: " << e.what() << "\n";
    return kInvalidInput;
  }
}
