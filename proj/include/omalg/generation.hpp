// Generated subrepresentations of a single representation: stable subsets,
// closure with recorded coordinates, generating sets, bases, and how
// endomorphisms act on coordinates.
#pragma once

#include <algorithm>
#include <map>
#include <optional>

#include "representation.hpp"
#include "word.hpp"

namespace omalg {

namespace detail {
inline std::vector<Elt> sorted_unique(std::vector<Elt> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
}  // namespace detail

// coordinates of generated elements: one witness word each, first
// derivation wins
struct CoordinateTable {
  std::map<Elt, OmegaWord> words;
};

struct StableClosure {
  std::vector<Elt> elements;  // sorted
  CoordinateTable coords;
};

// closed under every space operation and under the action of every domain
// element
inline bool is_stable(const Representation& r, const std::vector<Elt>& X) {
  std::vector<bool> in(r.space.size, false);
  for (Elt x : X) {
    if (x >= r.space.size)
      throw precondition_error("is_stable: element " + std::to_string(x) + " out of range");
    in[x] = true;
  }
  bool ok = true;
  for (std::size_t op = 0; op < r.space.sig.ops.size() && ok; ++op)
    for_each_tuple(r.space.size, r.space.sig.ops[op].arity, [&](std::span<const Elt> args) {
      if (!ok) return;
      for (Elt a : args)
        if (!in[a]) return;
      if (!in[r.space.apply(op, args)]) ok = false;
    });
  for (Elt a = 0; a < r.domain.size && ok; ++a)
    for (Elt x = 0; x < r.space.size && ok; ++x)
      if (in[x] && !in[r.actions[a](x)]) ok = false;
  return ok;
}

inline StableClosure stable_closure(const Representation& r, const std::vector<Elt>& X) {
  std::vector<Elt> gens = detail::sorted_unique(X);
  for (Elt x : gens)
    if (x >= r.space.size)
      throw precondition_error("stable_closure: element " + std::to_string(x) +
                               " out of range");
  StableClosure out;
  std::vector<bool> in(r.space.size, false);
  auto add = [&](Elt e, OmegaWord w) {
    if (in[e]) return false;  // first derivation wins
    in[e] = true;
    out.coords.words.emplace(e, std::move(w));
    return true;
  };
  for (std::size_t k = 0; k < gens.size(); ++k)
    add(gens[k], OmegaWord::make_gen(2, k));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t op = 0; op < r.space.sig.ops.size(); ++op) {
      for_each_tuple(r.space.size, r.space.sig.ops[op].arity, [&](std::span<const Elt> args) {
        for (Elt a : args)
          if (!in[a]) return;
        Elt res = r.space.apply(op, args);
        if (in[res]) return;
        std::vector<OmegaWord> kids;
        kids.reserve(args.size());
        for (Elt a : args) kids.push_back(out.coords.words.at(a));
        if (add(res, OmegaWord::make_op(2, r.space.sig.ops[op].symbol, std::move(kids))))
          changed = true;
      });
    }
    for (Elt a = 0; a < r.domain.size; ++a)
      for (Elt x = 0; x < r.space.size; ++x) {
        if (!in[x]) continue;
        Elt res = r.actions[a](x);
        if (in[res]) continue;
        if (add(res, OmegaWord::make_act(OmegaWord::make_const(a), out.coords.words.at(x))))
          changed = true;
      }
  }
  for (Elt x = 0; x < r.space.size; ++x)
    if (in[x]) out.elements.push_back(x);
  return out;
}

// Evaluate a two-layer word over a sorted generating set.  gen(2, k) is the
// k-th element of X; const(a) only appears as the lower half of act.
inline Elt evaluate_word(const Representation& r, const std::vector<Elt>& X,
                         const OmegaWord& w) {
  std::vector<Elt> gens = detail::sorted_unique(X);
  std::function<Elt(const OmegaWord&)> eval = [&](const OmegaWord& v) -> Elt {
    switch (v.kind) {
      case OmegaWord::Kind::Gen:
        if (v.layer != 2)
          throw error("evaluate_word: generator tagged for layer " +
                      std::to_string(v.layer) + " in a two-layer context");
        if (v.value >= gens.size())
          throw error("evaluate_word: generator index " + std::to_string(v.value) +
                      " out of range");
        return gens[v.value];
      case OmegaWord::Kind::Op: {
        if (v.layer != 2) throw error("evaluate_word: op word must be layer 2");
        std::size_t op = r.space.sig.index_of(v.op);
        if (r.space.sig.ops[op].arity != v.children.size())
          throw error("evaluate_word: op '" + v.op + "' expects " +
                      std::to_string(r.space.sig.ops[op].arity) + " arguments, got " +
                      std::to_string(v.children.size()));
        std::vector<Elt> args;
        args.reserve(v.children.size());
        for (const auto& c : v.children) args.push_back(eval(c));
        return r.space.apply(op, std::span<const Elt>(args));
      }
      case OmegaWord::Kind::Act: {
        if (v.children.size() != 2) throw error("evaluate_word: act needs two children");
        const OmegaWord& lower = v.children[0];
        if (lower.kind != OmegaWord::Kind::Const)
          throw error("evaluate_word: two-layer act must apply a const word");
        if (lower.value >= r.domain.size)
          throw error("evaluate_word: domain element " + std::to_string(lower.value) +
                      " out of range");
        return r.actions[lower.value](eval(v.children[1]));
      }
      case OmegaWord::Kind::Const:
        throw error("evaluate_word: const word is not a space element");
    }
    throw error("evaluate_word: unreachable");
  };
  return eval(w);
}

inline OmegaWord coordinates_of(const Representation& r, const std::vector<Elt>& X,
                                Elt target) {
  StableClosure c = stable_closure(r, X);
  auto it = c.coords.words.find(target);
  if (it == c.coords.words.end())
    throw precondition_error("coordinates_of: element " + std::to_string(target) +
                             " is not generated by the given set");
  return it->second;
}

inline bool is_generating(const Representation& r, const std::vector<Elt>& X) {
  return stable_closure(r, X).elements.size() == r.space.size;
}

// Shrink a generating set to a basis: repeatedly drop the lowest-index
// element whose removal keeps the set generating.  The result is generating
// and irredundant.
inline std::vector<Elt> find_basis(const Representation& r, const std::vector<Elt>& X) {
  std::vector<Elt> cur = detail::sorted_unique(X);
  if (!is_generating(r, cur))
    throw precondition_error("find_basis: starting set is not generating");
  bool removed = true;
  while (removed) {
    removed = false;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      std::vector<Elt> trial = cur;
      trial.erase(trial.begin() + static_cast<long>(i));
      if (is_generating(r, trial)) {
        cur = std::move(trial);
        removed = true;
        break;
      }
    }
  }
  return cur;
}

inline std::vector<Elt> find_basis(const Representation& r) {
  std::vector<Elt> full(r.space.size);
  std::iota(full.begin(), full.end(), Elt{0});
  return find_basis(r, full);
}

// the endomorphism keeps a generating set generating
inline bool endomorphism_is_regular_on(const Representation& r, const RepMorphism& endo,
                                       const std::vector<Elt>& X) {
  {
    ValidationReport v = validate_morphism(endo, r, r);
    if (!v.ok())
      throw precondition_error("endomorphism_is_regular_on: not an endomorphism: " +
                               v.problems.front());
  }
  if (!is_generating(r, X))
    throw precondition_error("endomorphism_is_regular_on: set is not generating");
  std::vector<Elt> image;
  image.reserve(X.size());
  for (Elt x : detail::sorted_unique(X)) image.push_back(endo.spc(x));
  return is_generating(r, image);
}

// Rewrite every recorded coordinate along an endomorphism: generators map to
// image generators, operation nodes stay, acting constants map through the
// domain component.  The rewritten word must evaluate to the image of the
// original element.
struct CoordinateMap {
  bool commutes = true;
  std::vector<Elt> image_generators;  // sorted
  CoordinateTable rewritten;          // per source element: translated word
  std::string witness;
};

inline CoordinateMap coordinate_map_of_endomorphism(const Representation& r,
                                                    const RepMorphism& endo,
                                                    const std::vector<Elt>& X) {
  {
    ValidationReport v = validate_morphism(endo, r, r);
    if (!v.ok())
      throw precondition_error("coordinate_map_of_endomorphism: not an endomorphism: " +
                               v.problems.front());
  }
  std::vector<Elt> gens = detail::sorted_unique(X);
  if (!is_generating(r, gens))
    throw precondition_error("coordinate_map_of_endomorphism: set is not generating");
  CoordinateMap out;
  for (Elt x : gens) out.image_generators.push_back(endo.spc(x));
  out.image_generators = detail::sorted_unique(out.image_generators);
  std::vector<Elt> gen_target(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k) {
    auto it = std::lower_bound(out.image_generators.begin(), out.image_generators.end(),
                               endo.spc(gens[k]));
    gen_target[k] = static_cast<Elt>(it - out.image_generators.begin());
  }
  std::function<OmegaWord(const OmegaWord&)> rewrite = [&](const OmegaWord& w) -> OmegaWord {
    switch (w.kind) {
      case OmegaWord::Kind::Const:
        return OmegaWord::make_const(endo.dom(w.value));
      case OmegaWord::Kind::Gen:
        return OmegaWord::make_gen(w.layer, gen_target[w.value]);
      case OmegaWord::Kind::Op: {
        std::vector<OmegaWord> kids;
        kids.reserve(w.children.size());
        for (const auto& c : w.children) kids.push_back(rewrite(c));
        return OmegaWord::make_op(w.layer, w.op, std::move(kids));
      }
      case OmegaWord::Kind::Act:
        return OmegaWord::make_act(rewrite(w.children[0]), rewrite(w.children[1]));
    }
    throw error("unreachable");
  };
  StableClosure c = stable_closure(r, gens);
  for (const auto& [elt, word] : c.coords.words) {
    OmegaWord moved = rewrite(word);
    Elt got = evaluate_word(r, out.image_generators, moved);
    Elt want = endo.spc(elt);
    out.rewritten.words.emplace(elt, std::move(moved));
    if (got != want && out.commutes) {
      out.commutes = false;
      out.witness = "element " + std::to_string(elt) + ": rewritten word evaluates to " +
                    std::to_string(got) + ", image is " + std::to_string(want);
    }
  }
  return out;
}

}  // namespace omalg
