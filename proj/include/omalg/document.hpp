// Text documents describing signatures, algebras, interpretations,
// representations, morphisms, towers, generating sets and words.
//
// The format is line oriented; '#' starts a comment, blocks close with
// 'end', declarations must precede use.  serialize() emits the canonical
// form: fixed section order, objects sorted by name, tables in signature
// order, single spacing — so serialize(parse(serialize(doc))) is
// byte-identical.
//
// Parse errors (bad syntax, unresolved names, duplicates) throw; semantic
// problems (wrong table sizes, broken laws) are left for validate_document,
// which returns them with witnesses.
#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

#include "oracle.hpp"
#include "tower.hpp"

namespace omalg {

struct parse_error : error {
  std::size_t line;
  parse_error(std::size_t line_, const std::string& msg)
      : error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct DocSignature {
  std::string name;
  Signature sig;
};

struct DocAlgebra {
  std::string name;
  std::string sig_name;
  std::vector<std::string> element_names;
  FiniteAlgebra algebra;  // tables may be ill-sized until validated

  Elt element(const std::string& n, std::size_t line) const {
    for (std::size_t i = 0; i < element_names.size(); ++i)
      if (element_names[i] == n) return i;
    throw parse_error(line, "algebra '" + name + "' has no element '" + n + "'");
  }
};

struct DocInterp {
  std::string name;
  std::string dom_sig;
  std::string spc_sig;
  // per domain op, in signature order; nullopt when the document omits one
  std::vector<std::optional<OpInterp>> maps;
};

struct DocRepresentation {
  std::string name;
  std::string dom_name, spc_name, interp_name;
  bool dual = false;
  Representation rep;
};

struct DocMorphism {
  std::string name;
  std::string src_name, dst_name;
  RepMorphism morphism;
  bool has_dom = false, has_spc = false;
};

struct DocTower {
  std::string name;
  std::vector<std::string> rep_names;
  Tower tower;
};

struct DocTowerMorphism {
  std::string name;
  std::string src_name, dst_name;
  TowerMorphism morphism;
};

struct DocGenset {
  std::string name;
  std::string target;  // tower or representation name
  std::map<std::size_t, std::vector<Elt>> layers;  // layer -> sorted elements
};

struct DocWord {
  std::string name;
  std::string genset_name;
  OmegaWord word;
};

struct Document {
  std::vector<DocSignature> signatures;
  std::vector<DocAlgebra> algebras;
  std::vector<DocInterp> interps;
  std::vector<DocRepresentation> representations;
  std::vector<DocMorphism> morphisms;
  std::vector<DocTower> towers;
  std::vector<DocTowerMorphism> towermorphisms;
  std::vector<DocGenset> gensets;
  std::vector<DocWord> words;

  template <class T>
  static const T* find_in(const std::vector<T>& v, const std::string& n) {
    for (const auto& x : v)
      if (x.name == n) return &x;
    return nullptr;
  }
  const DocSignature* signature(const std::string& n) const { return find_in(signatures, n); }
  const DocAlgebra* algebra(const std::string& n) const { return find_in(algebras, n); }
  const DocInterp* interp(const std::string& n) const { return find_in(interps, n); }
  const DocRepresentation* representation(const std::string& n) const {
    return find_in(representations, n);
  }
  const DocMorphism* morphism(const std::string& n) const { return find_in(morphisms, n); }
  const DocTower* tower(const std::string& n) const { return find_in(towers, n); }
  const DocTowerMorphism* towermorphism(const std::string& n) const {
    return find_in(towermorphisms, n);
  }
  const DocGenset* genset(const std::string& n) const { return find_in(gensets, n); }
  const DocWord* word(const std::string& n) const { return find_in(words, n); }

  // tower view of a genset target: a representation is its own two-layer chain
  Tower target_tower(const std::string& target) const {
    if (const DocTower* t = tower(target)) return t->tower;
    if (const DocRepresentation* r = representation(target)) return Tower{{r->rep}};
    throw error("no tower or representation named '" + target + "'");
  }
  GeneratingTuple genset_tuple(const DocGenset& g) const {
    Tower t = target_tower(g.target);
    GeneratingTuple gt;
    gt.sets.resize(t.layers() - 1);
    for (const auto& [layer, elts] : g.layers)
      if (layer >= 2 && layer <= t.layers()) gt.sets[layer - 2] = elts;
    return gt;
  }
};

// the document algebra that backs a given layer of a tower view
inline const DocAlgebra* algebra_of_layer(const Document& doc, const Tower& t,
                                          std::size_t layer);

// ---------------------------------------------------------------------------
// parsing

namespace docdetail {

inline bool valid_token(const std::string& t) {
  if (t.empty()) return false;
  for (char c : t)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
        c == ',' || c == '#')
      return false;
  return true;
}

inline std::size_t parse_number(const std::string& t, std::size_t line,
                                const char* what) {
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    throw parse_error(line, std::string(what) + ": expected a number, got '" + t + "'");
  return std::stoul(t);
}

struct Line {
  std::size_t no;
  std::vector<std::string> tokens;
  std::string text;  // comment-stripped, for word terms
};

inline std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::size_t no = 0;
  std::istringstream is(text);
  std::string raw;
  while (std::getline(is, raw)) {
    ++no;
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    Line l{no, {}, raw};
    std::istringstream ts(raw);
    std::string tok;
    while (ts >> tok) l.tokens.push_back(tok);
    if (!l.tokens.empty()) out.push_back(std::move(l));
  }
  return out;
}

// word term lexer: names/numbers and the punctuation ( ) , @
inline std::vector<std::string> term_tokens(const std::string& s, std::size_t line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(' || c == ')' || c == ',' || c == '@') {
      out.emplace_back(1, c);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) &&
           s[j] != '(' && s[j] != ')' && s[j] != ',' && s[j] != '@')
      ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  if (out.empty()) throw parse_error(line, "empty word term");
  return out;
}

struct TermParser {
  const std::vector<std::string>& toks;
  std::size_t pos = 0;
  std::size_t line;
  const Document& doc;
  const Tower& target;  // resolved tower of the word's genset

  const std::string& peek() {
    static const std::string end = "";
    return pos < toks.size() ? toks[pos] : end;
  }
  std::string take() {
    if (pos >= toks.size()) throw parse_error(line, "word term ends unexpectedly");
    return toks[pos++];
  }
  void expect(const char* t) {
    std::string got = take();
    if (got != t)
      throw parse_error(line, std::string("expected '") + t + "' in word term, got '" +
                                  got + "'");
  }

  OmegaWord parse() {
    OmegaWord w = term();
    if (pos != toks.size())
      throw parse_error(line, "trailing tokens after word term");
    return w;
  }

  OmegaWord term() {
    std::string head = take();
    if (head == "const") {
      expect("(");
      std::string n = take();
      expect(")");
      const DocAlgebra* a1 = algebra_of_layer(doc, target, 1);
      return OmegaWord::make_const(a1->element(n, line));
    }
    if (head == "gen") {
      expect("(");
      std::size_t layer = parse_number(take(), line, "gen layer");
      expect(",");
      std::size_t k = parse_number(take(), line, "gen index");
      expect(")");
      return OmegaWord::make_gen(layer, k);
    }
    if (head == "op") {
      std::size_t forced_layer = 0;
      if (peek() == "@") {
        take();
        forced_layer = parse_number(take(), line, "op layer");
      }
      expect("(");
      std::string sym = take();
      std::vector<OmegaWord> kids;
      while (peek() == ",") {
        take();
        kids.push_back(term());
      }
      expect(")");
      std::size_t layer = forced_layer;
      if (layer == 0) {
        if (!kids.empty()) {
          layer = kids[0].layer;
        } else {
          // a constant word: the symbol must pin down a unique upper layer
          for (std::size_t i = 2; i <= target.layers(); ++i)
            if (target.layer(i).sig.find(sym)) {
              if (layer) throw parse_error(line, "nullary op '" + sym +
                                                     "' is ambiguous here; write op@layer(...)");
              layer = i;
            }
          if (!layer)
            throw parse_error(line, "no layer has an operation '" + sym + "'");
        }
      }
      if (layer < 2 || layer > target.layers())
        throw parse_error(line, "op layer " + std::to_string(layer) + " out of range");
      const Op* o = target.layer(layer).sig.find(sym);
      if (!o)
        throw parse_error(line, "layer " + std::to_string(layer) +
                                    " has no operation '" + sym + "'");
      if (o->arity != kids.size())
        throw parse_error(line, "operation '" + sym + "' expects " +
                                    std::to_string(o->arity) + " arguments, got " +
                                    std::to_string(kids.size()));
      return OmegaWord::make_op(layer, std::move(sym), std::move(kids));
    }
    if (head == "act") {
      expect("(");
      OmegaWord lower = term();
      expect(",");
      OmegaWord inner = term();
      expect(")");
      return OmegaWord::make_act(std::move(lower), std::move(inner));
    }
    throw parse_error(line, "unknown word constructor '" + head + "'");
  }
};

}  // namespace docdetail

inline Document parse_document(const std::string& text) {
  using docdetail::Line;
  using docdetail::parse_number;
  using docdetail::valid_token;
  Document doc;
  std::vector<Line> lines = docdetail::split_lines(text);
  std::size_t i = 0;

  auto unique_name = [&](const std::string& n, std::size_t line) {
    if (!valid_token(n)) throw parse_error(line, "bad name '" + n + "'");
    if (doc.signature(n) || doc.algebra(n) || doc.interp(n) || doc.representation(n) ||
        doc.morphism(n) || doc.tower(n) || doc.towermorphism(n) || doc.genset(n) ||
        doc.word(n))
      throw parse_error(line, "duplicate name '" + n + "'");
  };
  auto body_line = [&](const char* block) -> const Line& {
    if (i >= lines.size())
      throw parse_error(lines.back().no, std::string("unterminated ") + block + " block");
    return lines[i];
  };

  while (i < lines.size()) {
    const Line& head = lines[i];
    const auto& t = head.tokens;
    const std::string& kw = t[0];

    if (kw == "signature") {
      if (t.size() != 2) throw parse_error(head.no, "usage: signature NAME");
      unique_name(t[1], head.no);
      DocSignature ds{t[1], {}};
      ++i;
      for (;;) {
        const Line& l = body_line("signature");
        if (l.tokens[0] == "end") {
          ++i;
          break;
        }
        if (l.tokens[0] != "op" || l.tokens.size() != 3)
          throw parse_error(l.no, "expected 'op SYMBOL ARITY' or 'end'");
        if (!valid_token(l.tokens[1]))
          throw parse_error(l.no, "bad operation symbol '" + l.tokens[1] + "'");
        if (ds.sig.find(l.tokens[1]))
          throw parse_error(l.no, "duplicate operation '" + l.tokens[1] + "'");
        ds.sig.ops.push_back(Op{l.tokens[1], parse_number(l.tokens[2], l.no, "arity")});
        ++i;
      }
      doc.signatures.push_back(std::move(ds));
      continue;
    }

    if (kw == "algebra") {
      if (t.size() != 3) throw parse_error(head.no, "usage: algebra NAME SIGNATURE");
      unique_name(t[1], head.no);
      const DocSignature* sig = doc.signature(t[2]);
      if (!sig) throw parse_error(head.no, "unknown signature '" + t[2] + "'");
      DocAlgebra da{t[1], t[2], {}, {}};
      da.algebra.sig = sig->sig;
      da.algebra.tables.resize(sig->sig.ops.size());
      for (std::size_t op = 0; op < sig->sig.ops.size(); ++op)
        da.algebra.tables[op].arity = sig->sig.ops[op].arity;
      std::vector<bool> table_seen(sig->sig.ops.size(), false);
      bool have_elements = false;
      ++i;
      for (;;) {
        const Line& l = body_line("algebra");
        if (l.tokens[0] == "end") {
          ++i;
          break;
        }
        if (l.tokens[0] == "elements") {
          if (have_elements) throw parse_error(l.no, "duplicate elements line");
          have_elements = true;
          for (std::size_t k = 1; k < l.tokens.size(); ++k) {
            if (!valid_token(l.tokens[k]))
              throw parse_error(l.no, "bad element name '" + l.tokens[k] + "'");
            for (const auto& e : da.element_names)
              if (e == l.tokens[k])
                throw parse_error(l.no, "duplicate element name '" + l.tokens[k] + "'");
            da.element_names.push_back(l.tokens[k]);
          }
          da.algebra.size = da.element_names.size();
        } else if (l.tokens[0] == "table") {
          if (l.tokens.size() < 2) throw parse_error(l.no, "usage: table SYMBOL VALUES...");
          if (!have_elements)
            throw parse_error(l.no, "elements line must precede tables");
          const Op* op = sig->sig.find(l.tokens[1]);
          if (!op) throw parse_error(l.no, "signature '" + t[2] + "' has no operation '" +
                                               l.tokens[1] + "'");
          std::size_t idx = sig->sig.index_of(l.tokens[1]);
          if (table_seen[idx]) throw parse_error(l.no, "duplicate table '" + l.tokens[1] + "'");
          table_seen[idx] = true;
          for (std::size_t k = 2; k < l.tokens.size(); ++k)
            da.algebra.tables[idx].values.push_back(da.element(l.tokens[k], l.no));
        } else {
          throw parse_error(l.no, "expected 'elements', 'table' or 'end'");
        }
        ++i;
      }
      doc.algebras.push_back(std::move(da));
      continue;
    }

    if (kw == "interp") {
      if (t.size() != 4) throw parse_error(head.no, "usage: interp NAME DOMSIG SPACESIG");
      unique_name(t[1], head.no);
      const DocSignature* ds = doc.signature(t[2]);
      const DocSignature* ss = doc.signature(t[3]);
      if (!ds) throw parse_error(head.no, "unknown signature '" + t[2] + "'");
      if (!ss) throw parse_error(head.no, "unknown signature '" + t[3] + "'");
      DocInterp di{t[1], t[2], t[3], {}};
      di.maps.resize(ds->sig.ops.size());
      ++i;
      for (;;) {
        const Line& l = body_line("interp");
        if (l.tokens[0] == "end") {
          ++i;
          break;
        }
        if (l.tokens[0] != "map" || l.tokens.size() < 3)
          throw parse_error(l.no, "expected 'map SYMBOL MODE [TARGET]' or 'end'");
        if (!ds->sig.find(l.tokens[1]))
          throw parse_error(l.no, "signature '" + t[2] + "' has no operation '" +
                                      l.tokens[1] + "'");
        std::size_t idx = ds->sig.index_of(l.tokens[1]);
        if (di.maps[idx]) throw parse_error(l.no, "duplicate map for '" + l.tokens[1] + "'");
        const std::string& mode = l.tokens[2];
        OpInterp oi;
        if (mode == "compose" && l.tokens.size() == 3) {
          oi.mode = InterpMode::Compose;
        } else if (mode == "identity" && l.tokens.size() == 3) {
          oi.mode = InterpMode::Identity;
        } else if (mode == "inverse" && l.tokens.size() == 3) {
          oi.mode = InterpMode::Inverse;
        } else if (mode == "pointwise" && l.tokens.size() == 4) {
          oi.mode = InterpMode::Pointwise;
          if (!ss->sig.find(l.tokens[3]))
            throw parse_error(l.no, "signature '" + t[3] + "' has no operation '" +
                                        l.tokens[3] + "'");
          oi.pointwise_symbol = l.tokens[3];
        } else {
          throw parse_error(l.no,
                            "mode must be compose | identity | inverse | pointwise TARGET");
        }
        di.maps[idx] = oi;
        ++i;
      }
      doc.interps.push_back(std::move(di));
      continue;
    }

    if (kw == "representation") {
      if (t.size() != 5 && !(t.size() == 6 && t[5] == "dual"))
        throw parse_error(head.no,
                          "usage: representation NAME DOMAIN SPACE INTERP [dual]");
      unique_name(t[1], head.no);
      const DocAlgebra* dom = doc.algebra(t[2]);
      const DocAlgebra* spc = doc.algebra(t[3]);
      const DocInterp* in = doc.interp(t[4]);
      if (!dom) throw parse_error(head.no, "unknown algebra '" + t[2] + "'");
      if (!spc) throw parse_error(head.no, "unknown algebra '" + t[3] + "'");
      if (!in) throw parse_error(head.no, "unknown interp '" + t[4] + "'");
      DocRepresentation dr{t[1], t[2], t[3], t[4], t.size() == 6, {}};
      dr.rep.domain = dom->algebra;
      dr.rep.space = spc->algebra;
      dr.rep.interp.dual = dr.dual;
      for (const auto& m : in->maps)
        dr.rep.interp.ops.push_back(m.value_or(OpInterp{}));  // gaps caught in validation
      dr.rep.actions.assign(dom->algebra.size, Mapping{spc->algebra.size, spc->algebra.size, {}});
      std::vector<bool> seen(dom->algebra.size, false);
      ++i;
      for (;;) {
        const Line& l = body_line("representation");
        if (l.tokens[0] == "end") {
          ++i;
          break;
        }
        if (l.tokens[0] != "act" || l.tokens.size() < 2)
          throw parse_error(l.no, "expected 'act ELEMENT VALUES...' or 'end'");
        Elt a = dom->element(l.tokens[1], l.no);
        if (seen[a]) throw parse_error(l.no, "duplicate act line for '" + l.tokens[1] + "'");
        seen[a] = true;
        for (std::size_t k = 2; k < l.tokens.size(); ++k)
          dr.rep.actions[a].image.push_back(spc->element(l.tokens[k], l.no));
        ++i;
      }
      doc.representations.push_back(std::move(dr));
      continue;
    }

    if (kw == "morphism") {
      if (t.size() != 4) throw parse_error(head.no, "usage: morphism NAME SRC DST");
      unique_name(t[1], head.no);
      const DocRepresentation* src = doc.representation(t[2]);
      const DocRepresentation* dst = doc.representation(t[3]);
      if (!src) throw parse_error(head.no, "unknown representation '" + t[2] + "'");
      if (!dst) throw parse_error(head.no, "unknown representation '" + t[3] + "'");
      DocMorphism dm{t[1], t[2], t[3], {}, false, false};
      dm.morphism.dom = Mapping{src->rep.domain.size, dst->rep.domain.size, {}};
      dm.morphism.spc = Mapping{src->rep.space.size, dst->rep.space.size, {}};
      const DocAlgebra* dsta = doc.algebra(dst->dom_name);
      const DocAlgebra* dsts = doc.algebra(dst->spc_name);
      ++i;
      for (;;) {
        const Line& l = body_line("morphism");
        if (l.tokens[0] == "end") {
          ++i;
          break;
        }
        if (l.tokens[0] == "dom") {
          if (dm.has_dom) throw parse_error(l.no, "duplicate dom line");
          dm.has_dom = true;
          for (std::size_t k = 1; k < l.tokens.size(); ++k)
            dm.morphism.dom.image.push_back(dsta->element(l.tokens[k], l.no));
        } else if (l.tokens[0] == "spc") {
          if (dm.has_spc) throw parse_error(l.no, "duplicate spc line");
          dm.has_spc = true;
          for (std::size_t k = 1; k < l.tokens.size(); ++k)
            dm.morphism.spc.image.push_back(dsts->element(l.tokens[k], l.no));
        } else {
          throw parse_error(l.no, "expected 'dom', 'spc' or 'end'");
        }
        ++i;
      }
      doc.morphisms.push_back(std::move(dm));
      continue;
    }

    if (kw == "tower") {
      if (t.size() != 2) throw parse_error(head.no, "usage: tower NAME");
      unique_name(t[1], head.no);
      DocTower dt{t[1], {}, {}};
      ++i;
      for (;;) {
        const Line& l = body_line("tower");
        if (l.tokens[0] == "end") {
          ++i;
          break;
        }
        if (l.tokens[0] != "rep" || l.tokens.size() != 2)
          throw parse_error(l.no, "expected 'rep NAME' or 'end'");
        const DocRepresentation* r = doc.representation(l.tokens[1]);
        if (!r) throw parse_error(l.no, "unknown representation '" + l.tokens[1] + "'");
        dt.rep_names.push_back(l.tokens[1]);
        dt.tower.reps.push_back(r->rep);
        ++i;
      }
      doc.towers.push_back(std::move(dt));
      continue;
    }

    if (kw == "towermorphism") {
      if (t.size() != 4) throw parse_error(head.no, "usage: towermorphism NAME SRC DST");
      unique_name(t[1], head.no);
      const DocTower* src = doc.tower(t[2]);
      const DocTower* dst = doc.tower(t[3]);
      if (!src) throw parse_error(head.no, "unknown tower '" + t[2] + "'");
      if (!dst) throw parse_error(head.no, "unknown tower '" + t[3] + "'");
      DocTowerMorphism dtm{t[1], t[2], t[3], {}};
      std::size_t layer = 1;
      ++i;
      for (;;) {
        const Line& l = body_line("towermorphism");
        if (l.tokens[0] == "end") {
          ++i;
          break;
        }
        if (l.tokens[0] != "map")
          throw parse_error(l.no, "expected 'map VALUES...' or 'end'");
        if (layer > dst->tower.layers())
          throw parse_error(l.no, "more map lines than tower layers");
        // resolve names in the destination tower's layer algebra
        const DocRepresentation* ref =
            doc.representation(dst->rep_names[layer == 1 ? 0 : layer - 2]);
        const DocAlgebra* alg =
            doc.algebra(layer == 1 ? ref->dom_name : ref->spc_name);
        Mapping m{src->tower.layers() >= layer ? src->tower.layer(layer).size : 0,
                  alg->algebra.size,
                  {}};
        for (std::size_t k = 1; k < l.tokens.size(); ++k)
          m.image.push_back(alg->element(l.tokens[k], l.no));
        dtm.morphism.maps.push_back(std::move(m));
        ++layer;
        ++i;
      }
      doc.towermorphisms.push_back(std::move(dtm));
      continue;
    }

    if (kw == "genset") {
      if (t.size() != 3) throw parse_error(head.no, "usage: genset NAME TARGET");
      unique_name(t[1], head.no);
      if (!doc.tower(t[2]) && !doc.representation(t[2]))
        throw parse_error(head.no, "unknown tower or representation '" + t[2] + "'");
      Tower tw = doc.target_tower(t[2]);
      DocGenset dg{t[1], t[2], {}};
      ++i;
      for (;;) {
        const Line& l = body_line("genset");
        if (l.tokens[0] == "end") {
          ++i;
          break;
        }
        if (l.tokens[0] != "layer" || l.tokens.size() < 2)
          throw parse_error(l.no, "expected 'layer N [ELEMENTS...]' or 'end'");
        std::size_t layer = parse_number(l.tokens[1], l.no, "layer");
        if (layer < 2 || layer > tw.layers())
          throw parse_error(l.no, "layer " + std::to_string(layer) +
                                      " out of range for '" + t[2] + "'");
        if (dg.layers.count(layer)) throw parse_error(l.no, "duplicate layer line");
        const DocAlgebra* alg = algebra_of_layer(doc, tw, layer);
        std::vector<Elt> elts;
        for (std::size_t k = 2; k < l.tokens.size(); ++k)
          elts.push_back(alg->element(l.tokens[k], l.no));
        std::sort(elts.begin(), elts.end());
        elts.erase(std::unique(elts.begin(), elts.end()), elts.end());
        dg.layers.emplace(layer, std::move(elts));
        ++i;
      }
      doc.gensets.push_back(std::move(dg));
      continue;
    }

    if (kw == "word") {
      if (t.size() < 4) throw parse_error(head.no, "usage: word NAME GENSET TERM");
      unique_name(t[1], head.no);
      const DocGenset* g = doc.genset(t[2]);
      if (!g) throw parse_error(head.no, "unknown genset '" + t[2] + "'");
      Tower tw = doc.target_tower(g->target);
      // the term is everything after the third whitespace-delimited token
      std::size_t p = 0;
      for (int skip = 0; skip < 3; ++skip) {
        while (p < head.text.size() &&
               std::isspace(static_cast<unsigned char>(head.text[p])))
          ++p;
        while (p < head.text.size() &&
               !std::isspace(static_cast<unsigned char>(head.text[p])))
          ++p;
      }
      std::string term_text = head.text.substr(p);
      std::vector<std::string> toks = docdetail::term_tokens(term_text, head.no);
      docdetail::TermParser tp{toks, 0, head.no, doc, tw};
      doc.words.push_back(DocWord{t[1], t[2], tp.parse()});
      ++i;
      continue;
    }

    throw parse_error(head.no, "unknown directive '" + kw + "'");
  }
  return doc;
}

inline const DocAlgebra* algebra_of_layer(const Document& doc, const Tower& t,
                                          std::size_t layer) {
  const FiniteAlgebra& alg = t.layer(layer);
  for (const auto& a : doc.algebras)
    if (a.algebra == alg) return &a;
  throw error("layer algebra is not declared in the document");
}

// ---------------------------------------------------------------------------
// canonical serialization

namespace docdetail {

template <class T>
std::vector<const T*> sorted_by_name(const std::vector<T>& v) {
  std::vector<const T*> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(&x);
  std::sort(out.begin(), out.end(),
            [](const T* a, const T* b) { return a->name < b->name; });
  return out;
}

inline std::string print_word_canonical(const Document& doc, const Tower& target,
                                        const OmegaWord& w) {
  const DocAlgebra* a1 = algebra_of_layer(doc, target, 1);
  std::function<std::string(const OmegaWord&)> pr = [&](const OmegaWord& v) -> std::string {
    switch (v.kind) {
      case OmegaWord::Kind::Const:
        return "const(" + a1->element_names[v.value] + ")";
      case OmegaWord::Kind::Gen:
        return "gen(" + std::to_string(v.layer) + ", " + std::to_string(v.value) + ")";
      case OmegaWord::Kind::Op: {
        std::string s = "op";
        if (v.children.empty()) s += "@" + std::to_string(v.layer);
        s += "(" + v.op;
        for (const auto& c : v.children) s += ", " + pr(c);
        return s + ")";
      }
      case OmegaWord::Kind::Act:
        return "act(" + pr(v.children[0]) + ", " + pr(v.children[1]) + ")";
    }
    return "?";
  };
  return pr(w);
}

}  // namespace docdetail

inline std::string serialize_document(const Document& doc) {
  std::vector<std::string> blocks;
  auto names = [&](const DocAlgebra& a, const std::vector<Elt>& v) {
    std::string s;
    for (Elt x : v) s += " " + a.element_names[x];
    return s;
  };

  for (const DocSignature* s : docdetail::sorted_by_name(doc.signatures)) {
    std::string b = "signature " + s->name + "\n";
    for (const Op& op : s->sig.ops)
      b += "  op " + op.symbol + " " + std::to_string(op.arity) + "\n";
    blocks.push_back(b + "end\n");
  }
  for (const DocAlgebra* a : docdetail::sorted_by_name(doc.algebras)) {
    std::string b = "algebra " + a->name + " " + a->sig_name + "\n  elements";
    for (const auto& e : a->element_names) b += " " + e;
    b += "\n";
    for (std::size_t op = 0; op < a->algebra.sig.ops.size(); ++op) {
      b += "  table " + a->algebra.sig.ops[op].symbol;
      for (Elt v : a->algebra.tables[op].values) b += " " + a->element_names[v];
      b += "\n";
    }
    blocks.push_back(b + "end\n");
  }
  for (const DocInterp* in : docdetail::sorted_by_name(doc.interps)) {
    const DocSignature* ds = doc.signature(in->dom_sig);
    std::string b = "interp " + in->name + " " + in->dom_sig + " " + in->spc_sig + "\n";
    for (std::size_t k = 0; k < in->maps.size(); ++k) {
      if (!in->maps[k]) continue;
      b += "  map " + ds->sig.ops[k].symbol + " ";
      switch (in->maps[k]->mode) {
        case InterpMode::Compose: b += "compose"; break;
        case InterpMode::Identity: b += "identity"; break;
        case InterpMode::Inverse: b += "inverse"; break;
        case InterpMode::Pointwise: b += "pointwise " + in->maps[k]->pointwise_symbol; break;
      }
      b += "\n";
    }
    blocks.push_back(b + "end\n");
  }
  for (const DocRepresentation* r : docdetail::sorted_by_name(doc.representations)) {
    const DocAlgebra* dom = doc.algebra(r->dom_name);
    const DocAlgebra* spc = doc.algebra(r->spc_name);
    std::string b = "representation " + r->name + " " + r->dom_name + " " + r->spc_name +
                    " " + r->interp_name + (r->dual ? " dual" : "") + "\n";
    for (Elt a = 0; a < r->rep.actions.size(); ++a)
      b += "  act " + dom->element_names[a] + names(*spc, r->rep.actions[a].image) + "\n";
    blocks.push_back(b + "end\n");
  }
  for (const DocMorphism* m : docdetail::sorted_by_name(doc.morphisms)) {
    const DocRepresentation* dst = doc.representation(m->dst_name);
    const DocAlgebra* da = doc.algebra(dst->dom_name);
    const DocAlgebra* sa = doc.algebra(dst->spc_name);
    std::string b = "morphism " + m->name + " " + m->src_name + " " + m->dst_name + "\n";
    b += "  dom" + names(*da, m->morphism.dom.image) + "\n";
    b += "  spc" + names(*sa, m->morphism.spc.image) + "\n";
    blocks.push_back(b + "end\n");
  }
  for (const DocTower* t : docdetail::sorted_by_name(doc.towers)) {
    std::string b = "tower " + t->name + "\n";
    for (const auto& r : t->rep_names) b += "  rep " + r + "\n";
    blocks.push_back(b + "end\n");
  }
  for (const DocTowerMorphism* m : docdetail::sorted_by_name(doc.towermorphisms)) {
    const DocTower* dst = doc.tower(m->dst_name);
    std::string b = "towermorphism " + m->name + " " + m->src_name + " " + m->dst_name + "\n";
    for (std::size_t layer = 1; layer <= m->morphism.maps.size(); ++layer) {
      const DocAlgebra* alg = algebra_of_layer(doc, dst->tower, layer);
      b += "  map" + names(*alg, m->morphism.maps[layer - 1].image) + "\n";
    }
    blocks.push_back(b + "end\n");
  }
  for (const DocGenset* g : docdetail::sorted_by_name(doc.gensets)) {
    Tower tw = doc.target_tower(g->target);
    std::string b = "genset " + g->name + " " + g->target + "\n";
    for (std::size_t layer = 2; layer <= tw.layers(); ++layer) {
      const DocAlgebra* alg = algebra_of_layer(doc, tw, layer);
      b += "  layer " + std::to_string(layer);
      auto it = g->layers.find(layer);
      if (it != g->layers.end()) b += names(*alg, it->second);
      b += "\n";
    }
    blocks.push_back(b + "end\n");
  }
  for (const DocWord* w : docdetail::sorted_by_name(doc.words)) {
    const DocGenset* g = doc.genset(w->genset_name);
    Tower tw = doc.target_tower(g->target);
    blocks.push_back("word " + w->name + " " + w->genset_name + " " +
                     docdetail::print_word_canonical(doc, tw, w->word) + "\n");
  }

  std::string out;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (k) out += "\n";
    out += blocks[k];
  }
  return out;
}

// ---------------------------------------------------------------------------
// document-level validation: semantic problems with witnesses, keyed by the
// object that carries them

struct DocumentProblems {
  std::vector<std::pair<std::string, std::string>> items;  // (object, problem)
  bool ok() const { return items.empty(); }
  void add(const std::string& obj, const std::string& p) { items.emplace_back(obj, p); }
};

inline DocumentProblems validate_document(const Document& doc) {
  DocumentProblems out;
  std::vector<std::string> clean_reps, clean_towers;
  auto is_clean = [](const std::vector<std::string>& v, const std::string& n) {
    return std::find(v.begin(), v.end(), n) != v.end();
  };
  for (const auto& a : doc.algebras) {
    if (a.algebra.size == 0) out.add("algebra " + a.name, "no elements");
    for (auto& p : validate_algebra(a.algebra).problems) out.add("algebra " + a.name, p);
  }
  for (const auto& in : doc.interps) {
    const DocSignature* ds = doc.signature(in.dom_sig);
    bool complete = true;
    for (std::size_t k = 0; k < in.maps.size(); ++k)
      if (!in.maps[k]) {
        complete = false;
        out.add("interp " + in.name,
                "no map for operation '" + ds->sig.ops[k].symbol + "'");
      }
    if (!complete) continue;
    Interp tmp;
    for (const auto& m : in.maps) tmp.ops.push_back(*m);
    const DocSignature* ss = doc.signature(in.spc_sig);
    for (auto& p : validate_interp(tmp, ds->sig, ss->sig).problems)
      out.add("interp " + in.name, p);
  }
  for (const auto& r : doc.representations) {
    const DocAlgebra* dom = doc.algebra(r.dom_name);
    const DocAlgebra* spc = doc.algebra(r.spc_name);
    const DocInterp* in = doc.interp(r.interp_name);
    bool sig_mismatch = false;
    if (in->dom_sig != dom->sig_name) {
      sig_mismatch = true;
      out.add("representation " + r.name,
              "interp '" + in->name + "' is declared for signature '" + in->dom_sig +
                  "' but the domain algebra uses '" + dom->sig_name + "'");
    }
    if (in->spc_sig != spc->sig_name) {
      sig_mismatch = true;
      out.add("representation " + r.name,
              "interp '" + in->name + "' is declared for space signature '" + in->spc_sig +
                  "' but the space algebra uses '" + spc->sig_name + "'");
    }
    if (sig_mismatch) continue;
    bool incomplete = false;
    for (const auto& m : in->maps)
      if (!m) incomplete = true;
    if (incomplete) continue;  // already reported on the interp
    ValidationReport vr = validate_representation(r.rep);
    if (vr.ok()) clean_reps.push_back(r.name);
    for (auto& p : vr.problems) out.add("representation " + r.name, p);
  }
  for (const auto& m : doc.morphisms) {
    const DocRepresentation* src = doc.representation(m.src_name);
    const DocRepresentation* dst = doc.representation(m.dst_name);
    if (!m.has_dom) out.add("morphism " + m.name, "missing dom line");
    if (!m.has_spc) out.add("morphism " + m.name, "missing spc line");
    if (m.morphism.dom.image.size() != src->rep.domain.size)
      out.add("morphism " + m.name,
              "dom line lists " + std::to_string(m.morphism.dom.image.size()) +
                  " values, source domain has " + std::to_string(src->rep.domain.size));
    else if (m.morphism.spc.image.size() != src->rep.space.size)
      out.add("morphism " + m.name,
              "spc line lists " + std::to_string(m.morphism.spc.image.size()) +
                  " values, source space has " + std::to_string(src->rep.space.size));
    else if (!is_clean(clean_reps, m.src_name) || !is_clean(clean_reps, m.dst_name))
      out.add("morphism " + m.name,
              "not checked: source or destination representation is invalid");
    else {
      try {
        for (auto& p : validate_morphism(m.morphism, src->rep, dst->rep).problems)
          out.add("morphism " + m.name, p);
      } catch (const error& e) {
        out.add("morphism " + m.name, e.what());
      }
    }
  }
  for (const auto& t : doc.towers) {
    bool parts_ok = true;
    for (const auto& rn : t.rep_names)
      if (!is_clean(clean_reps, rn)) parts_ok = false;
    if (!parts_ok) {
      out.add("tower " + t.name, "not checked: a constituent representation is invalid");
      continue;
    }
    ValidationReport vr = validate_tower(t.tower);
    if (vr.ok()) clean_towers.push_back(t.name);
    for (auto& p : vr.problems) out.add("tower " + t.name, p);
  }
  for (const auto& m : doc.towermorphisms) {
    if (!is_clean(clean_towers, m.src_name) || !is_clean(clean_towers, m.dst_name)) {
      out.add("towermorphism " + m.name, "not checked: source or destination tower is invalid");
      continue;
    }
    const DocTower* src = doc.tower(m.src_name);
    const DocTower* dst = doc.tower(m.dst_name);
    try {
      for (auto& p : validate_tower_morphism(m.morphism, src->tower, dst->tower).problems)
        out.add("towermorphism " + m.name, p);
    } catch (const error& e) {
      out.add("towermorphism " + m.name, e.what());
    }
  }
  for (const auto& w : doc.words) {
    const DocGenset* g = doc.genset(w.genset_name);
    bool target_ok = doc.tower(g->target) ? is_clean(clean_towers, g->target)
                                          : is_clean(clean_reps, g->target);
    if (!target_ok) {
      out.add("word " + w.name, "not checked: the genset target is invalid");
      continue;
    }
    try {
      Tower tw = doc.target_tower(g->target);
      GeneratingTuple gt = doc.genset_tuple(*g);
      for (auto& p : validate_word(tw, gt, w.word).problems)
        out.add("word " + w.name, p);
    } catch (const error& e) {
      out.add("word " + w.name, e.what());
    }
  }
  return out;
}

}  // namespace omalg
