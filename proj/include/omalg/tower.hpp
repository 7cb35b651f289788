// Towers of representations: a chain of algebras where each one acts on the
// next.  From three consecutive layers a skip representation of the first on
// the transformation image of the third is derived, and extended back to the
// full third carrier when the identity transformation lies in the image.
// Layered closure, generating tuples, bases and the automorphism loop of a
// tower generalize the single-representation versions.
#pragma once

#include <algorithm>
#include <map>

#include "generation.hpp"
#include "representation.hpp"
#include "word.hpp"

namespace omalg {

struct Tower {
  // reps[j] takes layer j+1 acting on layer j+2 (layers are 1-based)
  std::vector<Representation> reps;

  std::size_t layers() const { return reps.empty() ? 0 : reps.size() + 1; }
  const FiniteAlgebra& layer(std::size_t i) const {
    if (i == 1) return reps.front().domain;
    return reps[i - 2].space;
  }
};

inline ValidationReport validate_tower(const Tower& t) {
  ValidationReport rep;
  if (t.reps.empty()) {
    rep.add("tower needs at least one representation");
    return rep;
  }
  for (std::size_t j = 0; j < t.reps.size(); ++j)
    for (auto& p : validate_representation(t.reps[j]).problems)
      rep.add("representation of layer " + std::to_string(j + 1) + " on layer " +
              std::to_string(j + 2) + ": " + p);
  for (std::size_t j = 0; j + 1 < t.reps.size(); ++j)
    if (!(t.reps[j].space == t.reps[j + 1].domain))
      rep.add("layer " + std::to_string(j + 2) +
              " mismatch: the space of one representation must be the domain of the next");
  return rep;
}

// ---------------------------------------------------------------------------
// skip representation over three consecutive layers

struct SkipResult {
  // domain = layer i, space = transformation image of the middle
  // representation with its induced structure, interpretation induced
  Representation rep;
  std::vector<Mapping> image_maps;  // image index -> transformation of layer i+2
  std::vector<Elt> image_of;        // layer i+1 element -> image index
  ValidationReport report;          // well-definedness witnesses + induced laws
};

inline SkipResult derive_skip(const Tower& t, std::size_t i) {
  if (i < 1 || t.layers() < i + 2)
    throw precondition_error("derive_skip: needs layers i, i+1, i+2 inside the tower");
  const Representation& f12 = t.reps[i - 1];
  const Representation& f23 = t.reps[i];
  SkipResult out;
  out.image_maps = detail::sorted_actions(f23.actions);
  out.image_of.resize(f23.domain.size);
  for (Elt x = 0; x < f23.domain.size; ++x)
    out.image_of[x] = detail::image_index(out.image_maps, f23.actions[x]);
  const std::size_t k = out.image_maps.size();

  // first representative of every image class
  std::vector<Elt> repr(k, 0);
  {
    std::vector<bool> seen(k, false);
    for (Elt x = 0; x < f23.domain.size; ++x)
      if (!seen[out.image_of[x]]) {
        seen[out.image_of[x]] = true;
        repr[out.image_of[x]] = x;
      }
  }

  // well-definedness of the skip action: equal middle transformations must
  // keep equal transformations after every action of layer i
  for (Elt x = 0; x < f23.domain.size; ++x) {
    Elt rx = repr[out.image_of[x]];
    if (rx == x) continue;
    for (Elt a = 0; a < f12.domain.size; ++a)
      if (out.image_of[f12.actions[a](x)] != out.image_of[f12.actions[a](rx)]) {
        out.report.add("skip action ill-defined: elements " + std::to_string(rx) +
                       " and " + std::to_string(x) +
                       " have the same transformation but diverge under domain element " +
                       std::to_string(a));
      }
  }

  // induced middle-layer structure on the image set
  FiniteAlgebra img{f23.domain.sig, k, {}};
  for (std::size_t op = 0; op < f23.domain.sig.ops.size(); ++op) {
    std::size_t ar = f23.domain.sig.ops[op].arity;
    OpTable tab{ar, std::vector<Elt>(pow_size(k, ar))};
    for_each_tuple(k, ar, [&](std::span<const Elt> args) {
      std::vector<Elt> reps_args(ar);
      for (std::size_t q = 0; q < ar; ++q) reps_args[q] = repr[args[q]];
      tab.values[tuple_index(k, args)] =
          out.image_of[f23.domain.apply(op, std::span<const Elt>(reps_args))];
    });
    img.tables.push_back(std::move(tab));
    // well-definedness over all argument tuples, not just representatives
    for_each_tuple(f23.domain.size, ar, [&](std::span<const Elt> args) {
      std::vector<Elt> idx(ar);
      for (std::size_t q = 0; q < ar; ++q) idx[q] = out.image_of[args[q]];
      Elt want = img.tables[op].values[tuple_index(k, std::span<const Elt>(idx))];
      if (out.image_of[f23.domain.apply(op, args)] != want)
        out.report.add("induced op '" + f23.domain.sig.ops[op].symbol +
                       "' on the image set ill-defined at " + show_tuple(args));
    });
  }

  out.rep.domain = f12.domain;
  out.rep.space = img;
  out.rep.interp = Interp{true, false, {}};
  out.rep.actions.reserve(f12.domain.size);
  for (Elt a = 0; a < f12.domain.size; ++a) {
    Mapping act{k, k, std::vector<Elt>(k)};
    for (Elt s = 0; s < k; ++s) act.image[s] = out.image_of[f12.actions[a](repr[s])];
    out.rep.actions.push_back(std::move(act));
  }

  // defining law, including its middle form through the interpreted ops of
  // the lower representation
  for (Elt a = 0; a < f12.domain.size; ++a)
    for (Elt x = 0; x < f23.domain.size; ++x)
      if (out.rep.actions[a](out.image_of[x]) != out.image_of[f12.actions[a](x)])
        out.report.add("skip law fails at domain element " + std::to_string(a) +
                       ", middle element " + std::to_string(x));
  for (std::size_t op = 0; op < f12.domain.sig.ops.size(); ++op) {
    std::size_t ar = f12.domain.sig.ops[op].arity;
    for_each_tuple(f12.domain.size, ar, [&](std::span<const Elt> args) {
      Mapping via_interp = interp_apply(f12, op, args);
      Elt res = f12.domain.apply(op, args);
      for (Elt x = 0; x < f23.domain.size; ++x)
        if (out.image_of[via_interp(x)] !=
            out.rep.actions[res](out.image_of[x])) {
          out.report.add("induced homomorphism law fails for op '" +
                         f12.domain.sig.ops[op].symbol + "' at " + show_tuple(args));
          return;
        }
    });
  }

  for (auto& p : validate_representation(out.rep).problems)
    out.report.add("skip representation: " + p);
  return out;
}

// (identity, projection-to-image) is a morphism from the lower
// representation into the skip representation
inline ValidationReport check_id_projection_morphism(const Tower& t, std::size_t i) {
  SkipResult sk = derive_skip(t, i);
  ValidationReport rep = sk.report;
  const Representation& f12 = t.reps[i - 1];
  RepMorphism m{Mapping::identity(f12.domain.size),
                Mapping{sk.image_of.size(), sk.image_maps.size(), sk.image_of}};
  for (auto& p : validate_morphism(m, f12, sk.rep).problems) rep.add(p);
  return rep;
}

// ---------------------------------------------------------------------------
// extension of the skip representation to the whole upper carrier

struct ExtendResult {
  Representation rep;                // layer i acting on the carrier of layer i+2
  std::vector<Elt> delta_preimages;  // middle elements represented by the identity
  ValidationReport report;           // agreement with the skip action
};

inline ExtendResult extend_skip_to_carrier(const Tower& t, std::size_t i) {
  if (i < 1 || t.layers() < i + 2)
    throw precondition_error("extend_skip_to_carrier: needs layers i, i+1, i+2");
  const Representation& f12 = t.reps[i - 1];
  const Representation& f23 = t.reps[i];
  SkipResult sk = derive_skip(t, i);
  if (!sk.report.ok())
    throw precondition_error("extend_skip_to_carrier: skip construction failed: " +
                             sk.report.problems.front());
  ExtendResult out;
  Mapping id = Mapping::identity(f23.space.size);
  for (Elt x = 0; x < f23.domain.size; ++x)
    if (f23.actions[x] == id) out.delta_preimages.push_back(x);
  if (out.delta_preimages.empty())
    throw precondition_error(
        "extend_skip_to_carrier: identity transformation is not in the middle image");
  Elt x0 = out.delta_preimages.front();
  for (Elt x : out.delta_preimages)
    for (Elt a = 0; a < f12.domain.size; ++a)
      if (!(f23.actions[f12.actions[a](x)] == f23.actions[f12.actions[a](x0)]))
        throw precondition_error(
            "extend_skip_to_carrier: identity preimages " + std::to_string(x0) + " and " +
            std::to_string(x) + " give different extensions at domain element " +
            std::to_string(a));
  out.rep.domain = f12.domain;
  out.rep.space = f23.space;
  out.rep.interp = Interp{true, false, {}};
  out.rep.actions.reserve(f12.domain.size);
  for (Elt a = 0; a < f12.domain.size; ++a)
    out.rep.actions.push_back(f23.actions[f12.actions[a](x0)]);

  // the extension evaluated on the image reproduces the skip action at the
  // identity, transformation by transformation
  Elt delta_idx = sk.image_of[x0];
  for (Elt a = 0; a < f12.domain.size; ++a)
    if (!(out.rep.actions[a] == sk.image_maps[sk.rep.actions[a](delta_idx)]))
      out.report.add("extension disagrees with the skip action at domain element " +
                     std::to_string(a));
  for (auto& p : validate_representation(out.rep).problems)
    out.report.add("extended representation: " + p);
  return out;
}

inline bool middle_has_identity(const Representation& f23) {
  Mapping id = Mapping::identity(f23.space.size);
  for (const Mapping& m : f23.actions)
    if (m == id) return true;
  return false;
}

// Effectiveness travels up the chain: with effective inputs, every derived
// skip representation (and its extension, when defined) stays effective.
inline bool check_effectiveness_propagation(const Tower& t, std::size_t i, std::size_t k) {
  if (i < 1 || k < 2 || t.layers() < i + k)
    throw precondition_error("check_effectiveness_propagation: layer range out of bounds");
  for (std::size_t j = i - 1; j <= i + k - 2; ++j)
    if (!is_effective(t.reps[j]))
      throw precondition_error(
          "check_effectiveness_propagation: representation of layer " +
          std::to_string(j + 1) + " is not effective");
  Representation cur = t.reps[i - 1];
  for (std::size_t step = 0; step + 1 < k; ++step) {
    const Representation& next = t.reps[i + step];
    Tower mini{{cur, next}};
    SkipResult sk = derive_skip(mini, 1);
    if (!sk.report.ok())
      throw precondition_error("check_effectiveness_propagation: skip failed: " +
                               sk.report.problems.front());
    if (!is_effective(sk.rep)) return false;
    if (!middle_has_identity(next)) {
      if (step + 2 < k)
        throw precondition_error(
            "check_effectiveness_propagation: cannot extend, identity not in the image "
            "of the representation onto layer " + std::to_string(i + step + 2));
      return true;
    }
    ExtendResult ext = extend_skip_to_carrier(mini, 1);
    if (!is_effective(ext.rep)) return false;
    cur = std::move(ext.rep);
  }
  return true;
}

// ---------------------------------------------------------------------------
// tower morphisms

struct TowerMorphism {
  std::vector<Mapping> maps;  // one per layer, maps[i-1] for layer i
  bool operator==(const TowerMorphism&) const = default;
  auto operator<=>(const TowerMorphism&) const = default;
};

inline TowerMorphism identity_tower_morphism(const Tower& t) {
  TowerMorphism m;
  for (std::size_t i = 1; i <= t.layers(); ++i)
    m.maps.push_back(Mapping::identity(t.layer(i).size));
  return m;
}

inline ValidationReport validate_tower_morphism(const TowerMorphism& m,
                                                const Tower& src, const Tower& dst) {
  if (src.layers() != dst.layers())
    throw precondition_error("validate_tower_morphism: towers differ in height");
  if (m.maps.size() != src.layers())
    throw precondition_error("validate_tower_morphism: expected one map per layer");
  for (std::size_t i = 1; i <= src.layers(); ++i) {
    if (src.layer(i).sig != dst.layer(i).sig)
      throw precondition_error("validate_tower_morphism: layer " + std::to_string(i) +
                               " signatures differ");
    if (m.maps[i - 1].source_size != src.layer(i).size ||
        m.maps[i - 1].target_size != dst.layer(i).size)
      throw precondition_error("validate_tower_morphism: map sizes at layer " +
                               std::to_string(i) + " do not fit");
  }
  ValidationReport rep;
  for (std::size_t i = 1; i <= src.layers(); ++i) {
    HomCheck hc = is_homomorphism(m.maps[i - 1], src.layer(i), dst.layer(i));
    if (!hc.ok)
      rep.add("layer " + std::to_string(i) + " map not a homomorphism: " + hc.witness);
  }
  for (std::size_t j = 0; j < src.reps.size(); ++j) {
    const Mapping& lo = m.maps[j];
    const Mapping& hi = m.maps[j + 1];
    for (Elt a = 0; a < src.reps[j].domain.size; ++a)
      for (Elt x = 0; x < src.reps[j].space.size; ++x)
        if (hi(src.reps[j].actions[a](x)) != dst.reps[j].actions[lo(a)](hi(x)))
          rep.add("commutation fails between layers " + std::to_string(j + 1) + " and " +
                  std::to_string(j + 2) + " at (" + std::to_string(a) + ", " +
                  std::to_string(x) + ")");
  }
  return rep;
}

inline TowerMorphism compose_tower_morphisms(const TowerMorphism& first,
                                             const TowerMorphism& second) {
  if (first.maps.size() != second.maps.size())
    throw precondition_error("compose_tower_morphisms: height mismatch");
  TowerMorphism out;
  out.maps.reserve(first.maps.size());
  for (std::size_t i = 0; i < first.maps.size(); ++i)
    out.maps.push_back(first.maps[i].then(second.maps[i]));
  return out;
}

// lift of the layer-(i+2) map to the transformation images of the middle
// representations, checked against both skip actions and the induced
// middle-layer structure
inline StarLift star_lift_tower(const TowerMorphism& m, const Tower& src,
                                const Tower& dst, std::size_t i) {
  if (i < 1 || src.layers() < i + 2 || dst.layers() < i + 2)
    throw precondition_error("star_lift_tower: needs layers i, i+1, i+2");
  if (!is_effective(src.reps[i]))
    throw precondition_error(
        "star_lift_tower: middle representation of the source tower is not effective");
  SkipResult sk_src = derive_skip(src, i);
  SkipResult sk_dst = derive_skip(dst, i);
  StarLift out;
  out.src_images = sk_src.image_maps;
  out.dst_images = sk_dst.image_maps;
  out.on_images = Mapping{out.src_images.size(), out.dst_images.size(),
                          std::vector<Elt>(out.src_images.size())};
  const Mapping& h_mid = m.maps[i];  // layer i+1
  for (Elt x = 0; x < src.reps[i].domain.size; ++x)
    out.on_images.image[sk_src.image_of[x]] = sk_dst.image_of[h_mid(x)];
  HomCheck hc = is_homomorphism(out.on_images, sk_src.rep.space, sk_dst.rep.space);
  if (!hc.ok)
    out.report.add("lift does not respect the induced middle structure: " + hc.witness);
  const Mapping& h_lo = m.maps[i - 1];  // layer i
  for (Elt a = 0; a < sk_src.rep.domain.size; ++a)
    for (Elt s = 0; s < out.src_images.size(); ++s)
      if (out.on_images(sk_src.rep.actions[a](s)) !=
          sk_dst.rep.actions[h_lo(a)](out.on_images(s)))
        out.report.add("lift does not commute with the skip actions at (" +
                       std::to_string(a) + ", " + std::to_string(s) + ")");
  return out;
}

// ---------------------------------------------------------------------------
// layered closure, generating tuples, bases

struct GeneratingTuple {
  std::vector<std::vector<Elt>> sets;  // sets[j] seeds layer j+2; layer 1 is whole
  bool operator==(const GeneratingTuple&) const = default;

  std::size_t total() const {
    std::size_t n = 0;
    for (auto& s : sets) n += s.size();
    return n;
  }
};

inline GeneratingTuple full_tuple(const Tower& t) {
  GeneratingTuple g;
  for (std::size_t i = 2; i <= t.layers(); ++i) {
    std::vector<Elt> all(t.layer(i).size);
    std::iota(all.begin(), all.end(), Elt{0});
    g.sets.push_back(std::move(all));
  }
  return g;
}

struct TowerClosure {
  std::vector<std::vector<Elt>> elements;       // [i-1] = sorted layer-i closure
  std::vector<std::map<Elt, OmegaWord>> words;  // aligned with elements
};

inline TowerClosure tower_closure(const Tower& t, const GeneratingTuple& gt) {
  if (t.reps.empty()) throw precondition_error("tower_closure: empty tower");
  if (gt.sets.size() != t.layers() - 1)
    throw precondition_error("tower_closure: expected one generating set per layer above the first");
  TowerClosure out;
  out.elements.resize(t.layers());
  out.words.resize(t.layers());
  for (Elt a = 0; a < t.layer(1).size; ++a) {
    out.elements[0].push_back(a);
    out.words[0].emplace(a, OmegaWord::make_const(a));
  }
  for (std::size_t i = 2; i <= t.layers(); ++i) {
    const FiniteAlgebra& alg = t.layer(i);
    const Representation& below = t.reps[i - 2];
    std::vector<Elt> gens = detail::sorted_unique(gt.sets[i - 2]);
    for (Elt x : gens)
      if (x >= alg.size)
        throw precondition_error("tower_closure: generator " + std::to_string(x) +
                                 " out of range at layer " + std::to_string(i));
    std::vector<bool> in(alg.size, false);
    auto& words = out.words[i - 1];
    auto add = [&](Elt e, OmegaWord w) {
      if (in[e]) return false;
      in[e] = true;
      words.emplace(e, std::move(w));
      return true;
    };
    for (std::size_t kk = 0; kk < gens.size(); ++kk)
      add(gens[kk], OmegaWord::make_gen(i, kk));
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t op = 0; op < alg.sig.ops.size(); ++op) {
        for_each_tuple(alg.size, alg.sig.ops[op].arity, [&](std::span<const Elt> args) {
          for (Elt a : args)
            if (!in[a]) return;
          Elt res = alg.apply(op, args);
          if (in[res]) return;
          std::vector<OmegaWord> kids;
          for (Elt a : args) kids.push_back(words.at(a));
          if (add(res, OmegaWord::make_op(i, alg.sig.ops[op].symbol, std::move(kids))))
            changed = true;
        });
      }
      for (Elt y : out.elements[i - 2]) {
        for (Elt x = 0; x < alg.size; ++x) {
          if (!in[x]) continue;
          Elt res = below.actions[y](x);
          if (in[res]) continue;
          if (add(res, OmegaWord::make_act(out.words[i - 2].at(y), words.at(x))))
            changed = true;
        }
      }
    }
    for (Elt x = 0; x < alg.size; ++x)
      if (in[x]) out.elements[i - 1].push_back(x);
  }
  return out;
}

// tuple of subsets closed under each layer's operations and under the action
// of the closure below (the whole first layer acts)
inline bool is_stable_tuple(const Tower& t, const std::vector<std::vector<Elt>>& sets) {
  if (sets.size() != t.layers() - 1)
    throw precondition_error("is_stable_tuple: expected one set per layer above the first");
  std::vector<Elt> lower(t.layer(1).size);
  std::iota(lower.begin(), lower.end(), Elt{0});
  for (std::size_t i = 2; i <= t.layers(); ++i) {
    const FiniteAlgebra& alg = t.layer(i);
    const Representation& below = t.reps[i - 2];
    std::vector<bool> in(alg.size, false);
    for (Elt x : sets[i - 2]) {
      if (x >= alg.size)
        throw precondition_error("is_stable_tuple: element out of range at layer " +
                                 std::to_string(i));
      in[x] = true;
    }
    bool ok = true;
    for (std::size_t op = 0; op < alg.sig.ops.size() && ok; ++op)
      for_each_tuple(alg.size, alg.sig.ops[op].arity, [&](std::span<const Elt> args) {
        if (!ok) return;
        for (Elt a : args)
          if (!in[a]) return;
        if (!in[alg.apply(op, args)]) ok = false;
      });
    for (Elt y : lower) {
      if (!ok) break;
      for (Elt x = 0; x < alg.size && ok; ++x)
        if (in[x] && !in[below.actions[y](x)]) ok = false;
    }
    if (!ok) return false;
    lower = detail::sorted_unique(sets[i - 2]);
  }
  return true;
}

inline bool is_generating_tuple(const Tower& t, const GeneratingTuple& gt) {
  TowerClosure c = tower_closure(t, gt);
  for (std::size_t i = 2; i <= t.layers(); ++i)
    if (c.elements[i - 1].size() != t.layer(i).size) return false;
  return true;
}

// lowest layer first, lowest index first: drop whatever keeps the tuple
// generating, until nothing can be dropped
inline GeneratingTuple find_tower_basis(const Tower& t, GeneratingTuple start) {
  for (auto& s : start.sets) s = detail::sorted_unique(s);
  if (!is_generating_tuple(t, start))
    throw precondition_error("find_tower_basis: starting tuple is not generating");
  bool removed = true;
  while (removed) {
    removed = false;
    for (std::size_t j = 0; j < start.sets.size() && !removed; ++j)
      for (std::size_t idx = 0; idx < start.sets[j].size() && !removed; ++idx) {
        GeneratingTuple trial = start;
        trial.sets[j].erase(trial.sets[j].begin() + static_cast<long>(idx));
        if (is_generating_tuple(t, trial)) {
          start = std::move(trial);
          removed = true;
        }
      }
  }
  return start;
}

inline GeneratingTuple find_tower_basis(const Tower& t) {
  return find_tower_basis(t, full_tuple(t));
}

// ---------------------------------------------------------------------------
// word evaluation over a tower

inline Elt evaluate_word(const Tower& t, const GeneratingTuple& gt, const OmegaWord& w) {
  if (gt.sets.size() != t.layers() - 1)
    throw precondition_error("evaluate_word: expected one generating set per upper layer");
  std::vector<std::vector<Elt>> gens;
  for (auto& s : gt.sets) gens.push_back(detail::sorted_unique(s));
  std::function<Elt(const OmegaWord&)> eval = [&](const OmegaWord& v) -> Elt {
    switch (v.kind) {
      case OmegaWord::Kind::Const:
        if (v.value >= t.layer(1).size)
          throw error("word: const element " + std::to_string(v.value) + " out of range");
        return v.value;
      case OmegaWord::Kind::Gen: {
        if (v.layer < 2 || v.layer > t.layers())
          throw error("word: generator layer " + std::to_string(v.layer) + " out of range");
        const auto& g = gens[v.layer - 2];
        if (v.value >= g.size())
          throw error("word: generator index " + std::to_string(v.value) +
                      " out of range at layer " + std::to_string(v.layer));
        return g[v.value];
      }
      case OmegaWord::Kind::Op: {
        if (v.layer < 2 || v.layer > t.layers())
          throw error("word: op layer " + std::to_string(v.layer) + " out of range");
        const FiniteAlgebra& alg = t.layer(v.layer);
        std::size_t op = alg.sig.index_of(v.op);
        if (alg.sig.ops[op].arity != v.children.size())
          throw error("word: op '" + v.op + "' expects " +
                      std::to_string(alg.sig.ops[op].arity) + " arguments, got " +
                      std::to_string(v.children.size()));
        std::vector<Elt> args;
        for (const auto& c : v.children) {
          if (c.layer != v.layer)
            throw error("word: op argument tagged layer " + std::to_string(c.layer) +
                        ", expected " + std::to_string(v.layer));
          args.push_back(eval(c));
        }
        return alg.apply(op, std::span<const Elt>(args));
      }
      case OmegaWord::Kind::Act: {
        if (v.children.size() != 2) throw error("word: act needs two children");
        const OmegaWord& lower = v.children[0];
        const OmegaWord& inner = v.children[1];
        if (inner.layer != v.layer)
          throw error("word: act inner word tagged layer " + std::to_string(inner.layer) +
                      ", expected " + std::to_string(v.layer));
        if (lower.layer + 1 != v.layer)
          throw error("word: act lower word tagged layer " + std::to_string(lower.layer) +
                      ", expected " + std::to_string(v.layer - 1));
        Elt y = eval(lower);
        Elt x = eval(inner);
        return t.reps[v.layer - 2].actions[y](x);
      }
    }
    throw error("word: unreachable");
  };
  return eval(w);
}

inline ValidationReport validate_word(const Tower& t, const GeneratingTuple& gt,
                                      const OmegaWord& w) {
  ValidationReport rep;
  try {
    (void)evaluate_word(t, gt, w);
  } catch (const error& e) {
    rep.add(e.what());
  }
  return rep;
}

inline OmegaWord coordinates_of(const Tower& t, const GeneratingTuple& gt,
                                std::size_t layer, Elt target) {
  TowerClosure c = tower_closure(t, gt);
  if (layer < 1 || layer > t.layers())
    throw precondition_error("coordinates_of: layer out of range");
  auto it = c.words[layer - 1].find(target);
  if (it == c.words[layer - 1].end())
    throw precondition_error("coordinates_of: element " + std::to_string(target) +
                             " is not generated at layer " + std::to_string(layer));
  return it->second;
}

// ---------------------------------------------------------------------------
// automorphism loop of a tower

struct TowerAutomorphismLoop {
  std::vector<TowerMorphism> members;  // sorted
  LoopReport report;
};

inline TowerAutomorphismLoop tower_automorphism_loop(const Tower& t,
                                                     const Budget& budget = {}) {
  if (t.reps.empty()) throw precondition_error("tower_automorphism_loop: empty tower");
  std::vector<std::vector<Mapping>> per_layer;
  for (std::size_t i = 1; i <= t.layers(); ++i)
    per_layer.push_back(enumerate_automorphisms(t.layer(i), budget));
  TowerAutomorphismLoop out;
  std::vector<std::size_t> pick(t.layers(), 0);
  for (;;) {
    budget.charge();
    TowerMorphism cand;
    for (std::size_t i = 0; i < t.layers(); ++i) cand.maps.push_back(per_layer[i][pick[i]]);
    bool ok = true;
    for (std::size_t j = 0; j < t.reps.size() && ok; ++j) {
      const Mapping& lo = cand.maps[j];
      const Mapping& hi = cand.maps[j + 1];
      for (Elt a = 0; a < t.reps[j].domain.size && ok; ++a)
        for (Elt x = 0; x < t.reps[j].space.size && ok; ++x)
          if (hi(t.reps[j].actions[a](x)) != t.reps[j].actions[lo(a)](hi(x))) ok = false;
    }
    if (ok) out.members.push_back(std::move(cand));
    std::size_t q = t.layers();
    while (q > 0) {
      --q;
      if (++pick[q] < per_layer[q].size()) break;
      pick[q] = 0;
      if (q == 0) {
        std::sort(out.members.begin(), out.members.end());
        out.report = detail::loop_report(
            out.members, identity_tower_morphism(t),
            [](const TowerMorphism& a, const TowerMorphism& b) {
              return compose_tower_morphisms(a, b);
            },
            budget);
        return out;
      }
    }
  }
}

}  // namespace omalg
