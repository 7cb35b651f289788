// Command line front end over document files.
//
// Exit codes:
//   0  success
//   1  operational errors: bad usage, unreadable files, syntax or name
//      resolution failures, exceeded budgets
//   2  validation failures: the document parses but an object breaks its
//      laws (reported with witnesses)
//   3  structural failures: preconditions of a construction do not hold
//      (ill-defined skip structure, missing or ambiguous identity preimage,
//      loop axiom violations, oracle disagreement, factorization defects)
#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "document.hpp"
#include "json.hpp"

namespace omalg {

using njson = nlohmann::ordered_json;

namespace clidetail {

struct Options {
  std::string command;
  std::string file;
  std::string object;
  std::string genset;
  std::string set;
  std::string target;
  std::string word;
  std::string morphism;
  std::size_t layer = 0;
  std::size_t budget = 0;  // 0: not set
  bool json = false;
  bool oracle = false;
};

inline std::size_t env_budget() {
  if (const char* s = std::getenv("OMALG_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw error("OMALG_BUDGET must be a positive integer, got '" + std::string(s) + "'");
  }
  return 0;
}

inline Budget make_budget(const Options& o) {
  Budget b;
  if (std::size_t e = env_budget()) b.max_candidates = e;
  if (o.budget) b.max_candidates = o.budget;
  return b;
}

// the object a command works on: a tower or a representation, viewed as a tower
struct Target {
  std::string name;
  bool is_tower = false;
  Tower tower;
};

inline Target resolve_object(const Document& doc, const Options& o) {
  std::string name = o.object;
  if (name.empty() && !o.genset.empty()) {
    const DocGenset* g = doc.genset(o.genset);
    if (!g) throw error("unknown genset '" + o.genset + "'");
    name = g->target;
  }
  if (name.empty()) {
    if (doc.towers.size() == 1)
      name = doc.towers.front().name;
    else if (doc.towers.empty() && doc.representations.size() == 1)
      name = doc.representations.front().name;
    else
      throw error("several objects in the document; pick one with --object");
  }
  Target t;
  t.name = name;
  if (const DocTower* tw = doc.tower(name)) {
    t.is_tower = true;
    t.tower = tw->tower;
  } else if (const DocRepresentation* r = doc.representation(name)) {
    t.tower = Tower{{r->rep}};
  } else {
    throw error("no tower or representation named '" + name + "'");
  }
  return t;
}

inline GeneratingTuple resolve_tuple(const Document& doc, const Options& o,
                                     const Target& t) {
  if (!o.genset.empty() && !o.set.empty())
    throw error("--genset and --set cannot be combined");
  if (!o.genset.empty()) {
    const DocGenset* g = doc.genset(o.genset);
    if (!g) throw error("unknown genset '" + o.genset + "'");
    if (g->target != t.name)
      throw error("genset '" + g->name + "' targets '" + g->target + "', not '" +
                  t.name + "'");
    return doc.genset_tuple(*g);
  }
  if (!o.set.empty()) {
    if (t.tower.layers() != 2)
      throw error("--set applies to representations; use a genset block for towers");
    const DocAlgebra* alg = algebra_of_layer(doc, t.tower, 2);
    GeneratingTuple gt;
    gt.sets.resize(1);
    std::istringstream is(o.set);
    std::string n;
    while (is >> n) gt.sets[0].push_back(alg->element(n, 0));
    std::sort(gt.sets[0].begin(), gt.sets[0].end());
    gt.sets[0].erase(std::unique(gt.sets[0].begin(), gt.sets[0].end()),
                     gt.sets[0].end());
    return gt;
  }
  // exactly one declared genset for this object, else the full carriers
  const DocGenset* only = nullptr;
  for (const auto& g : doc.gensets)
    if (g.target == t.name) {
      if (only) {
        only = nullptr;
        break;
      }
      only = &g;
    }
  if (only) return doc.genset_tuple(*only);
  return full_tuple(t.tower);
}

inline std::string layer_names(const Document& doc, const Tower& t, std::size_t layer,
                               const std::vector<Elt>& elts) {
  const DocAlgebra* alg = algebra_of_layer(doc, t, layer);
  std::string s;
  for (Elt x : elts) {
    if (!s.empty()) s += " ";
    s += alg->element_names[x];
  }
  return s;
}

inline njson layer_names_json(const Document& doc, const Tower& t, std::size_t layer,
                              const std::vector<Elt>& elts) {
  const DocAlgebra* alg = algebra_of_layer(doc, t, layer);
  njson a = njson::array();
  for (Elt x : elts) a.push_back(alg->element_names[x]);
  return a;
}

inline int fail_validation(const DocumentProblems& problems, const Options& o,
                           std::ostream& out, std::ostream& err) {
  if (o.json) {
    njson j;
    j["schema"] = "omalg/1";
    j["command"] = o.command;
    j["ok"] = false;
    njson arr = njson::array();
    for (const auto& [obj, p] : problems.items) arr.push_back({{"object", obj}, {"problem", p}});
    j["problems"] = arr;
    out << j.dump(2) << "\n";
  } else {
    for (const auto& [obj, p] : problems.items) err << obj << ": " << p << "\n";
    err << "document invalid (" << problems.items.size() << " problem"
        << (problems.items.size() == 1 ? "" : "s") << ")\n";
  }
  return 2;
}

// --- command bodies --------------------------------------------------------

inline int cmd_validate(const Document& doc, const Options& o, std::ostream& out,
                        std::ostream& err) {
  DocumentProblems problems = validate_document(doc);
  if (!problems.ok()) return fail_validation(problems, o, out, err);
  if (o.json) {
    njson j;
    j["schema"] = "omalg/1";
    j["command"] = "validate";
    j["ok"] = true;
    j["problems"] = njson::array();
    out << j.dump(2) << "\n";
  } else {
    out << "document valid\n";
  }
  return 0;
}

inline int cmd_closure(const Document& doc, const Options& o, std::ostream& out,
                       std::ostream& err) {
  Target t = resolve_object(doc, o);
  GeneratingTuple gt = resolve_tuple(doc, o, t);
  TowerClosure c = tower_closure(t.tower, gt);
  bool oracle_ok = true;
  std::vector<std::vector<Elt>> brute;
  if (o.oracle) {
    brute = brute_tower_closure(t.tower, gt, make_budget(o));
    for (std::size_t i = 2; i <= t.tower.layers(); ++i)
      if (brute[i - 2] != c.elements[i - 1]) oracle_ok = false;
  }
  njson j;
  if (o.json) {
    j["schema"] = "omalg/1";
    j["command"] = "closure";
    j["object"] = t.name;
    j["layers"] = njson::array();
  } else {
    out << "object: " << t.name << "\n";
  }
  for (std::size_t i = 2; i <= t.tower.layers(); ++i) {
    const std::vector<Elt>& closure = c.elements[i - 1];
    const DocAlgebra* alg = algebra_of_layer(doc, t.tower, i);
    std::vector<Elt> gens = gt.sets[i - 2];
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    if (o.json) {
      njson layer;
      layer["layer"] = i;
      layer["generators"] = layer_names_json(doc, t.tower, i, gens);
      layer["closure"] = layer_names_json(doc, t.tower, i, closure);
      njson words;
      for (Elt x : closure)
        words[alg->element_names[x]] =
            docdetail::print_word_canonical(doc, t.tower, c.words[i - 1].at(x));
      layer["coordinates"] = words;
      j["layers"].push_back(layer);
    } else {
      out << "layer " << i << " generators: " << layer_names(doc, t.tower, i, gens)
          << "\n";
      out << "layer " << i << " closure (" << closure.size() << " of " << alg->algebra.size
          << "): " << layer_names(doc, t.tower, i, closure) << "\n";
      for (Elt x : closure)
        out << "  " << alg->element_names[x] << " = "
            << docdetail::print_word_canonical(doc, t.tower, c.words[i - 1].at(x)) << "\n";
    }
  }
  if (o.oracle) {
    if (o.json) j["oracle"] = oracle_ok ? "agreement" : "mismatch";
    if (!oracle_ok) {
      if (o.json)
        out << j.dump(2) << "\n";
      else
        err << "oracle: the intersection of stable tuples disagrees with the computed closure\n";
      return 3;
    }
    if (!o.json) out << "oracle: agreement\n";
  }
  if (o.json) out << j.dump(2) << "\n";
  return 0;
}

inline int cmd_basis(const Document& doc, const Options& o, std::ostream& out,
                     std::ostream& err) {
  Target t = resolve_object(doc, o);
  GeneratingTuple start = resolve_tuple(doc, o, t);
  GeneratingTuple basis;
  try {
    basis = find_tower_basis(t.tower, start);
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  if (o.json) {
    njson j;
    j["schema"] = "omalg/1";
    j["command"] = "basis";
    j["object"] = t.name;
    j["layers"] = njson::array();
    for (std::size_t i = 2; i <= t.tower.layers(); ++i)
      j["layers"].push_back(
          {{"layer", i},
           {"basis", layer_names_json(doc, t.tower, i, basis.sets[i - 2])}});
    j["size"] = basis.total();
    out << j.dump(2) << "\n";
  } else {
    out << "object: " << t.name << "\n";
    for (std::size_t i = 2; i <= t.tower.layers(); ++i)
      out << "basis layer " << i << ": " << layer_names(doc, t.tower, i, basis.sets[i - 2])
          << "\n";
    out << "size: " << basis.total() << "\n";
  }
  return 0;
}

inline int cmd_automorphisms(const Document& doc, const Options& o, std::ostream& out,
                             std::ostream& err) {
  Target t = resolve_object(doc, o);
  Budget budget = make_budget(o);
  std::size_t member_count = 0;
  LoopReport report;
  std::vector<std::string> member_lines;
  njson member_json = njson::array();
  if (t.is_tower) {
    TowerAutomorphismLoop loop = tower_automorphism_loop(t.tower, budget);
    member_count = loop.members.size();
    report = loop.report;
    if (member_count <= 64)
      for (const TowerMorphism& m : loop.members) {
        std::string line;
        njson maps = njson::array();
        for (std::size_t i = 1; i <= t.tower.layers(); ++i) {
          if (!line.empty()) line += " | ";
          line += "layer " + std::to_string(i) + ": " +
                  layer_names(doc, t.tower, i, m.maps[i - 1].image);
          maps.push_back(layer_names_json(doc, t.tower, i, m.maps[i - 1].image));
        }
        member_lines.push_back(line);
        member_json.push_back(maps);
      }
  } else {
    AutomorphismLoop loop = automorphism_loop(t.tower.reps[0], budget);
    member_count = loop.members.size();
    report = loop.report;
    if (member_count <= 64)
      for (const RepMorphism& m : loop.members) {
        member_lines.push_back("dom: " + layer_names(doc, t.tower, 1, m.dom.image) +
                               " | spc: " + layer_names(doc, t.tower, 2, m.spc.image));
        member_json.push_back({{"dom", layer_names_json(doc, t.tower, 1, m.dom.image)},
                               {"spc", layer_names_json(doc, t.tower, 2, m.spc.image)}});
      }
  }
  bool axioms = report.loop_axioms_hold();
  if (o.json) {
    njson j;
    j["schema"] = "omalg/1";
    j["command"] = "automorphisms";
    j["object"] = t.name;
    j["members"] = member_count;
    j["axioms"] = {{"identity", report.identity_present},
                   {"closed", report.closed},
                   {"inverses", report.inverses},
                   {"left_division", report.left_division_unique},
                   {"right_division", report.right_division_unique}};
    j["associative"] = report.associative;
    j["associativity_check"] = report.associativity_checked;
    if (!member_lines.empty()) j["members_list"] = member_json;
    if (!axioms) j["problems"] = report.problems;
    out << j.dump(2) << "\n";
  } else {
    out << "object: " << t.name << "\n";
    out << "members: " << member_count << "\n";
    out << "identity: " << (report.identity_present ? "present" : "missing") << "\n";
    out << "closed under composition: " << (report.closed ? "yes" : "no") << "\n";
    out << "two-sided inverses: " << (report.inverses ? "yes" : "no") << "\n";
    out << "unique division: "
        << (report.left_division_unique && report.right_division_unique ? "yes" : "no")
        << "\n";
    out << "associative: " << (report.associative ? "yes" : "no") << " ("
        << report.associativity_checked << " check)\n";
    for (std::size_t k = 0; k < member_lines.size(); ++k)
      out << "member " << k << ": " << member_lines[k] << "\n";
  }
  if (!axioms) {
    for (const auto& p : report.problems) err << "loop axiom failure: " << p << "\n";
    return 3;
  }
  return 0;
}

inline int cmd_derive(const Document& doc, const Options& o, std::ostream& out,
                      std::ostream& err) {
  Target t = resolve_object(doc, o);
  std::size_t layer = o.layer ? o.layer : 1;
  if (layer < 1 || t.tower.layers() < layer + 2) {
    err << "error: derive needs layers " << layer << ".." << layer + 2
        << "; '" << t.name << "' has " << t.tower.layers() << "\n";
    return 1;
  }
  SkipResult sk = derive_skip(t.tower, layer);
  const DocAlgebra* mid = algebra_of_layer(doc, t.tower, layer + 1);
  const DocAlgebra* top = algebra_of_layer(doc, t.tower, layer + 2);
  const DocAlgebra* low = algebra_of_layer(doc, t.tower, layer);
  ValidationReport proj =
      sk.report.ok() ? check_id_projection_morphism(t.tower, layer) : ValidationReport{};
  bool eff = sk.report.ok() && is_effective(sk.rep);
  if (o.json) {
    njson j;
    j["schema"] = "omalg/1";
    j["command"] = "derive";
    j["object"] = t.name;
    j["layer"] = layer;
    j["well_defined"] = sk.report.ok();
    j["problems"] = sk.report.problems;
    if (sk.report.ok()) {
      j["image_size"] = sk.image_maps.size();
      njson imgs = njson::array();
      for (const Mapping& m : sk.image_maps)
        imgs.push_back(layer_names_json(doc, t.tower, layer + 2, m.image));
      j["image_transformations"] = imgs;
      njson projmap;
      for (Elt x = 0; x < sk.image_of.size(); ++x)
        projmap[mid->element_names[x]] = sk.image_of[x];
      j["projection"] = projmap;
      njson acts;
      for (Elt a = 0; a < sk.rep.actions.size(); ++a) {
        njson row = njson::array();
        for (Elt s = 0; s < sk.image_maps.size(); ++s)
          row.push_back(sk.rep.actions[a](s));
        acts[low->element_names[a]] = row;
      }
      j["skip_actions"] = acts;
      j["projection_morphism"] = proj.ok();
      j["effective"] = eff;
    }
    out << j.dump(2) << "\n";
  } else {
    out << "object: " << t.name << "\n";
    out << "layer: " << layer << " (skipping layer " << layer + 1 << ")\n";
    if (sk.report.ok()) {
      out << "middle image: " << sk.image_maps.size() << " transformations of "
          << top->name << "\n";
      for (std::size_t s = 0; s < sk.image_maps.size(); ++s)
        out << "  t" << s << ": "
            << layer_names(doc, t.tower, layer + 2, sk.image_maps[s].image) << "\n";
      out << "projection:";
      for (Elt x = 0; x < sk.image_of.size(); ++x)
        out << " " << mid->element_names[x] << "=>t" << sk.image_of[x];
      out << "\n";
      for (Elt a = 0; a < sk.rep.actions.size(); ++a) {
        out << "skip action " << low->element_names[a] << ":";
        for (Elt s = 0; s < sk.image_maps.size(); ++s)
          out << " t" << sk.rep.actions[a](s);
        out << "\n";
      }
      out << "projection morphism: " << (proj.ok() ? "ok" : "fails") << "\n";
      out << "effective: " << (eff ? "yes" : "no") << "\n";
    }
  }
  if (!sk.report.ok()) {
    for (const auto& p : sk.report.problems) err << "skip structure: " << p << "\n";
    return 3;
  }
  if (!proj.ok()) {
    for (const auto& p : proj.problems) err << "projection morphism: " << p << "\n";
    return 3;
  }
  return 0;
}

inline int cmd_extend(const Document& doc, const Options& o, std::ostream& out,
                      std::ostream& err) {
  Target t = resolve_object(doc, o);
  std::size_t layer = o.layer ? o.layer : 1;
  if (layer < 1 || t.tower.layers() < layer + 2) {
    err << "error: extend needs layers " << layer << ".." << layer + 2
        << "; '" << t.name << "' has " << t.tower.layers() << "\n";
    return 1;
  }
  ExtendResult ext;
  try {
    ext = extend_skip_to_carrier(t.tower, layer);
  } catch (const error& e) {
    err << "extension fails: " << e.what() << "\n";
    return 3;
  }
  const DocAlgebra* low = algebra_of_layer(doc, t.tower, layer);
  bool eff = is_effective(ext.rep);
  if (o.json) {
    njson j;
    j["schema"] = "omalg/1";
    j["command"] = "extend";
    j["object"] = t.name;
    j["layer"] = layer;
    j["delta_preimages"] = layer_names_json(doc, t.tower, layer + 1, ext.delta_preimages);
    njson acts;
    for (Elt a = 0; a < ext.rep.actions.size(); ++a)
      acts[low->element_names[a]] =
          layer_names_json(doc, t.tower, layer + 2, ext.rep.actions[a].image);
    j["actions"] = acts;
    j["consistent"] = ext.report.ok();
    if (!ext.report.ok()) j["problems"] = ext.report.problems;
    j["effective"] = eff;
    out << j.dump(2) << "\n";
  } else {
    out << "object: " << t.name << "\n";
    out << "layer: " << layer << " (acting on the carrier of layer " << layer + 2 << ")\n";
    out << "identity preimages: "
        << layer_names(doc, t.tower, layer + 1, ext.delta_preimages) << "\n";
    for (Elt a = 0; a < ext.rep.actions.size(); ++a)
      out << "action " << low->element_names[a] << ": "
          << layer_names(doc, t.tower, layer + 2, ext.rep.actions[a].image) << "\n";
    out << "agrees with the skip structure: " << (ext.report.ok() ? "yes" : "no") << "\n";
    out << "effective: " << (eff ? "yes" : "no") << "\n";
  }
  if (!ext.report.ok()) {
    for (const auto& p : ext.report.problems) err << "extension: " << p << "\n";
    return 3;
  }
  return 0;
}

inline int cmd_decompose(const Document& doc, const Options& o, std::ostream& out,
                         std::ostream& err) {
  std::string name = o.morphism;
  if (name.empty()) {
    if (doc.morphisms.size() != 1) {
      err << "error: pick a morphism with --morphism\n";
      return 1;
    }
    name = doc.morphisms.front().name;
  }
  const DocMorphism* m = doc.morphism(name);
  if (!m) {
    err << "error: unknown morphism '" << name << "'\n";
    return 1;
  }
  const DocRepresentation* src = doc.representation(m->src_name);
  const DocRepresentation* dst = doc.representation(m->dst_name);
  const DocAlgebra* sdom = doc.algebra(src->dom_name);
  const DocAlgebra* sspc = doc.algebra(src->spc_name);
  Decomposition d = decompose_morphism(m->morphism, src->rep, dst->rep);
  auto blocks_of = [](const Partition& p) {
    std::vector<std::vector<Elt>> blocks(p.block_count());
    for (Elt x = 0; x < p.block_of.size(); ++x) blocks[p.block_of[x]].push_back(x);
    return blocks;
  };
  auto block_text = [](const DocAlgebra& alg, const std::vector<std::vector<Elt>>& blocks) {
    std::string s;
    for (const auto& b : blocks) {
      s += " {";
      for (std::size_t k = 0; k < b.size(); ++k)
        s += (k ? " " : "") + alg.element_names[b[k]];
      s += "}";
    }
    return s;
  };
  std::vector<std::vector<Elt>> dom_blocks = blocks_of(d.dom_kernel);
  std::vector<std::vector<Elt>> spc_blocks = blocks_of(d.spc_kernel);
  if (o.json) {
    njson j;
    j["schema"] = "omalg/1";
    j["command"] = "decompose";
    j["morphism"] = name;
    auto blocks_json = [](const DocAlgebra& alg, const std::vector<std::vector<Elt>>& bs) {
      njson arr = njson::array();
      for (const auto& b : bs) {
        njson one = njson::array();
        for (Elt x : b) one.push_back(alg.element_names[x]);
        arr.push_back(one);
      }
      return arr;
    };
    j["domain_kernel"] = blocks_json(*sdom, dom_blocks);
    j["space_kernel"] = blocks_json(*sspc, spc_blocks);
    j["quotient"] = {{"domain", d.dom_quotient.size}, {"space", d.spc_quotient.size}};
    j["image"] = {{"domain", d.dom_image.size}, {"space", d.spc_image.size}};
    j["ok"] = d.report.ok();
    j["problems"] = d.report.problems;
    out << j.dump(2) << "\n";
  } else {
    out << "morphism: " << name << " (" << m->src_name << " -> " << m->dst_name << ")\n";
    out << "domain kernel: " << dom_blocks.size() << " blocks:"
        << block_text(*sdom, dom_blocks) << "\n";
    out << "space kernel: " << spc_blocks.size() << " blocks:"
        << block_text(*sspc, spc_blocks) << "\n";
    out << "quotient representation: domain " << d.dom_quotient.size << ", space "
        << d.spc_quotient.size << "\n";
    out << "image representation: domain " << d.dom_image.size << ", space "
        << d.spc_image.size << "\n";
    out << "factorization checks: " << (d.report.ok() ? "all ok" : "failures") << "\n";
  }
  if (!d.report.ok()) {
    for (const auto& p : d.report.problems) err << "decomposition: " << p << "\n";
    return 3;
  }
  return 0;
}

inline int cmd_morphism_check(const Document& doc, const Options& o, std::ostream& out,
                              std::ostream& err) {
  // a validation command: reuses the guarded document checks, so malformed
  // constituents surface as problems instead of being evaluated
  DocumentProblems all = validate_document(doc);
  auto problems_for = [&](const std::string& key) {
    std::vector<std::string> ps;
    for (const auto& [obj, p] : all.items)
      if (obj == key) ps.push_back(p);
    return ps;
  };
  auto object_clean = [&](const std::string& key) {
    for (const auto& [obj, p] : all.items)
      if (obj == key) return false;
    return true;
  };
  bool any_bad = false;
  njson items = njson::array();
  auto note = [&](const std::string& kind, const std::string& name,
                  const std::vector<std::string>& problems, const njson& extra) {
    if (!problems.empty()) any_bad = true;
    if (o.json) {
      njson one;
      one["kind"] = kind;
      one["name"] = name;
      one["ok"] = problems.empty();
      one["problems"] = problems;
      for (auto it = extra.begin(); it != extra.end(); ++it) one[it.key()] = it.value();
      items.push_back(one);
    } else {
      out << kind << " " << name << ": " << (problems.empty() ? "ok" : "invalid") << "\n";
      for (const auto& p : problems) out << "  " << p << "\n";
      for (auto it = extra.begin(); it != extra.end(); ++it)
        out << "  " << it.key() << ": "
            << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump())
            << "\n";
    }
  };
  bool named = !o.morphism.empty();
  bool found = false;
  for (const auto& m : doc.morphisms) {
    if (named && m.name != o.morphism) continue;
    found = true;
    std::vector<std::string> ps = problems_for("morphism " + m.name);
    njson extra;
    const DocRepresentation* src = doc.representation(m.src_name);
    const DocRepresentation* dst = doc.representation(m.dst_name);
    if (ps.empty() && object_clean("representation " + m.src_name) &&
        object_clean("representation " + m.dst_name) && is_effective(src->rep)) {
      StarLift lift = star_lift(m.morphism, src->rep, dst->rep);
      extra["star_lift"] = lift.report.ok() ? "ok" : "fails";
      if (!lift.report.ok())
        for (const auto& p : lift.report.problems) ps.push_back("star lift: " + p);
    }
    note("morphism", m.name, ps, extra);
  }
  for (const auto& m : doc.towermorphisms) {
    if (named && m.name != o.morphism) continue;
    found = true;
    note("towermorphism", m.name, problems_for("towermorphism " + m.name),
         njson::object());
  }
  if (named && !found) {
    err << "error: unknown morphism '" << o.morphism << "'\n";
    return 1;
  }
  if (!named && !o.json && doc.morphisms.empty() && doc.towermorphisms.empty())
    out << "no morphisms declared\n";
  if (o.json) {
    njson j;
    j["schema"] = "omalg/1";
    j["command"] = "morphism-check";
    j["ok"] = !any_bad;
    j["morphisms"] = items;
    out << j.dump(2) << "\n";
  }
  return any_bad ? 2 : 0;
}

inline int cmd_coords(const Document& doc, const Options& o, std::ostream& out,
                      std::ostream& err) {
  if (!o.word.empty() && !o.target.empty())
    throw error("--word and --target cannot be combined");
  njson j;
  j["schema"] = "omalg/1";
  j["command"] = "coords";

  if (!o.word.empty()) {
    const DocWord* w = doc.word(o.word);
    if (!w) throw error("unknown word '" + o.word + "'");
    const DocGenset* g = doc.genset(w->genset_name);
    Tower tw = doc.target_tower(g->target);
    GeneratingTuple gt = doc.genset_tuple(*g);
    Elt value = evaluate_word(tw, gt, w->word);
    std::size_t layer = w->word.layer;
    const DocAlgebra* alg = algebra_of_layer(doc, tw, layer);
    if (o.oracle) {
      TowerClosure c = tower_closure(tw, gt);
      const auto& layer_elts = c.elements[layer - 1];
      if (!std::binary_search(layer_elts.begin(), layer_elts.end(), value)) {
        err << "oracle: the word's value is outside the generated closure\n";
        return 3;
      }
    }
    if (o.json) {
      j["word"] = o.word;
      j["layer"] = layer;
      j["value"] = alg->element_names[value];
      out << j.dump(2) << "\n";
    } else {
      out << "word " << o.word << ": layer " << layer << " element "
          << alg->element_names[value] << "\n";
    }
    return 0;
  }

  if (o.target.empty()) throw error("coords needs --target ELEMENT or --word NAME");
  Target t = resolve_object(doc, o);
  GeneratingTuple gt = resolve_tuple(doc, o, t);
  std::size_t layer = o.layer;
  if (!layer) {
    if (t.tower.layers() == 2)
      layer = 2;
    else
      throw error("pick a layer with --layer (the tower has " +
                  std::to_string(t.tower.layers()) + ")");
  }
  if (layer < 2 || layer > t.tower.layers())
    throw error("layer " + std::to_string(layer) + " out of range");
  const DocAlgebra* alg = algebra_of_layer(doc, t.tower, layer);
  Elt target = alg->element(o.target, 0);
  TowerClosure c = tower_closure(t.tower, gt);
  auto it = c.words[layer - 1].find(target);
  if (it == c.words[layer - 1].end()) {
    if (o.json) {
      j["object"] = t.name;
      j["target"] = o.target;
      j["layer"] = layer;
      j["generated"] = false;
      out << j.dump(2) << "\n";
    } else {
      out << "element " << o.target << " (layer " << layer
          << ") is not generated from the given sets\n";
    }
    return 0;
  }
  std::string word_text = docdetail::print_word_canonical(doc, t.tower, it->second);
  if (o.oracle) {
    Elt check = evaluate_word(t.tower, gt, it->second);
    std::vector<std::vector<Elt>> brute =
        brute_tower_closure(t.tower, gt, make_budget(o));
    bool member = std::binary_search(brute[layer - 2].begin(), brute[layer - 2].end(),
                                     target);
    if (check != target || !member) {
      err << "oracle: coordinate word check failed for '" << o.target << "'\n";
      return 3;
    }
  }
  if (o.json) {
    j["object"] = t.name;
    j["target"] = o.target;
    j["layer"] = layer;
    j["generated"] = true;
    j["word"] = word_text;
    if (o.oracle) j["oracle"] = "agreement";
    out << j.dump(2) << "\n";
  } else {
    out << "element " << o.target << " (layer " << layer << ")\n";
    out << "word: " << word_text << "\n";
    if (o.oracle) out << "oracle: agreement\n";
  }
  return 0;
}

}  // namespace clidetail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  using clidetail::Options;
  Options o;
  CLI::App app{"finite representation engine"};
  app.require_subcommand(1);

  struct Spec {
    const char* name;
    const char* desc;
    bool takes_layer, takes_sets, takes_target, takes_morphism, takes_oracle;
  };
  const Spec specs[] = {
      {"validate", "check every object against its laws", false, false, false, false, false},
      {"closure", "stable closure with coordinate words", false, true, false, false, true},
      {"basis", "minimal generating sets by greedy removal", false, true, false, false, false},
      {"automorphisms", "compatible automorphism pairs and their loop", false, false, false,
       false, false},
      {"derive", "skip structure over a middle layer", true, false, false, false, false},
      {"extend", "extend the skip structure to the full carrier", true, false, false, false,
       false},
      {"decompose", "kernel/image factorization of a morphism", false, false, false, true,
       false},
      {"morphism-check", "verify declared morphisms and star lifts", false, false, false,
       true, false},
      {"coords", "coordinate word of an element, or a word's value", true, true, true, false,
       true},
  };
  for (const Spec& s : specs) {
    CLI::App* sub = app.add_subcommand(s.name, s.desc);
    sub->add_option("file", o.file, "document file")->required();
    sub->add_flag("--json", o.json, "machine readable output");
    sub->add_option("--budget", o.budget, "search budget (overrides OMALG_BUDGET)");
    if (s.name != std::string("validate") && s.name != std::string("decompose") &&
        s.name != std::string("morphism-check"))
      sub->add_option("--object", o.object, "tower or representation to work on");
    if (s.takes_layer) sub->add_option("--layer", o.layer, "layer index");
    if (s.takes_sets) {
      sub->add_option("--genset", o.genset, "declared generating set to use");
      sub->add_option("--set", o.set, "space elements, e.g. \"x y z\"");
    }
    if (s.takes_target) {
      sub->add_option("--target", o.target, "element to coordinatize");
      sub->add_option("--word", o.word, "declared word to evaluate");
    }
    if (s.takes_morphism) sub->add_option("--morphism", o.morphism, "morphism name");
    if (s.takes_oracle)
      sub->add_flag("--oracle", o.oracle, "cross-check with the brute-force oracle");
  }

  std::vector<const char*> argv;
  argv.push_back("omalg");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    (void)clidetail::env_budget();  // a malformed OMALG_BUDGET fails every command
    std::ifstream in(o.file);
    if (!in) {
      err << "error: cannot read '" << o.file << "'\n";
      return 1;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    Document doc = parse_document(buf.str());

    if (o.command == "validate") return clidetail::cmd_validate(doc, o, out, err);
    if (o.command == "morphism-check")
      return clidetail::cmd_morphism_check(doc, o, out, err);

    // every other command requires a valid document
    DocumentProblems problems = validate_document(doc);
    if (!problems.ok()) return clidetail::fail_validation(problems, o, out, err);

    if (o.command == "closure") return clidetail::cmd_closure(doc, o, out, err);
    if (o.command == "basis") return clidetail::cmd_basis(doc, o, out, err);
    if (o.command == "automorphisms")
      return clidetail::cmd_automorphisms(doc, o, out, err);
    if (o.command == "derive") return clidetail::cmd_derive(doc, o, out, err);
    if (o.command == "extend") return clidetail::cmd_extend(doc, o, out, err);
    if (o.command == "decompose") return clidetail::cmd_decompose(doc, o, out, err);
    if (o.command == "coords") return clidetail::cmd_coords(doc, o, out, err);
    err << "error: unknown command '" << o.command << "'\n";
    return 1;
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const budget_error& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 1;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace omalg
