// Layered words over a generating tuple: the syntax by which generated
// elements get coordinates.  A word is one of
//   const(a)        an element of the bottom layer,
//   gen(i, k)       the k-th generator of layer i,
//   op(sym, w...)   a layer-i operation applied to layer-i words (i >= 2),
//   act(u, w)       a layer-(i-1) word acting on a layer-i word.
// Two words are "the same coordinate" only when they evaluate to the same
// element; the trees themselves are just derivations.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core.hpp"

namespace omalg {

struct OmegaWord {
  enum class Kind { Const, Gen, Op, Act };

  Kind kind = Kind::Const;
  std::size_t layer = 1;  // Const is always layer 1
  Elt value = 0;          // Const: element index; Gen: generator index
  std::string op;         // Op only
  std::vector<OmegaWord> children;  // Op: arguments; Act: {lower, inner}

  bool operator==(const OmegaWord&) const = default;

  static OmegaWord make_const(Elt a) { return OmegaWord{Kind::Const, 1, a, {}, {}}; }
  static OmegaWord make_gen(std::size_t layer, Elt k) {
    return OmegaWord{Kind::Gen, layer, k, {}, {}};
  }
  static OmegaWord make_op(std::size_t layer, std::string sym,
                           std::vector<OmegaWord> args) {
    return OmegaWord{Kind::Op, layer, 0, std::move(sym), std::move(args)};
  }
  static OmegaWord make_act(OmegaWord lower, OmegaWord inner) {
    std::size_t layer = inner.layer;
    return OmegaWord{Kind::Act, layer, 0, {}, {std::move(lower), std::move(inner)}};
  }
};

// Canonical prefix form.  const_name renders a bottom-layer element; pass
// nullptr to print raw indices.
inline std::string print_word(
    const OmegaWord& w,
    const std::function<std::string(Elt)>& const_name = nullptr) {
  switch (w.kind) {
    case OmegaWord::Kind::Const:
      return "const(" + (const_name ? const_name(w.value) : std::to_string(w.value)) + ")";
    case OmegaWord::Kind::Gen:
      return "gen(" + std::to_string(w.layer) + ", " + std::to_string(w.value) + ")";
    case OmegaWord::Kind::Op: {
      std::string s = "op(" + w.op;
      for (const auto& c : w.children) s += ", " + print_word(c, const_name);
      return s + ")";
    }
    case OmegaWord::Kind::Act:
      return "act(" + print_word(w.children[0], const_name) + ", " +
             print_word(w.children[1], const_name) + ")";
  }
  return "?";
}

}  // namespace omalg
