// Brute-force reference computations.  Slow on purpose: closures as
// intersections of all stable supersets, morphisms by trying every pair of
// maps, generating tuples by sweeping subsets.  Test oracles first; the
// command line exposes them only behind --oracle.
#pragma once

#include <algorithm>

#include "tower.hpp"

namespace omalg {

namespace detail {
inline bool subset_stable(const Representation& r, std::uint64_t mask) {
  bool ok = true;
  for (std::size_t op = 0; op < r.space.sig.ops.size() && ok; ++op)
    for_each_tuple(r.space.size, r.space.sig.ops[op].arity, [&](std::span<const Elt> args) {
      if (!ok) return;
      for (Elt a : args)
        if (!(mask >> a & 1)) return;
      if (!(mask >> r.space.apply(op, args) & 1)) ok = false;
    });
  for (Elt a = 0; a < r.domain.size && ok; ++a)
    for (Elt x = 0; x < r.space.size && ok; ++x)
      if ((mask >> x & 1) && !(mask >> r.actions[a](x) & 1)) ok = false;
  return ok;
}
}  // namespace detail

// intersection of every stable superset of X
inline std::vector<Elt> brute_closure(const Representation& r, const std::vector<Elt>& X,
                                      const Budget& budget = {}) {
  if (r.space.size > 63) throw precondition_error("brute_closure: space too large");
  std::uint64_t seed = 0;
  for (Elt x : X) {
    if (x >= r.space.size)
      throw precondition_error("brute_closure: element out of range");
    seed |= std::uint64_t{1} << x;
  }
  std::uint64_t acc = ~std::uint64_t{0};
  std::uint64_t all = (r.space.size == 63) ? ~std::uint64_t{0}
                                           : (std::uint64_t{1} << r.space.size) - 1;
  for (std::uint64_t mask = 0; mask <= all; ++mask) {
    budget.charge();
    if ((mask & seed) != seed) continue;
    if (detail::subset_stable(r, mask)) acc &= mask;
    if (mask == all) break;
  }
  std::vector<Elt> out;
  for (Elt x = 0; x < r.space.size; ++x)
    if (acc >> x & 1) out.push_back(x);
  return out;
}

// intersection of every stable tuple containing the given tuple, pointwise
inline std::vector<std::vector<Elt>> brute_tower_closure(const Tower& t,
                                                         const GeneratingTuple& gt,
                                                         const Budget& budget = {}) {
  const std::size_t k = t.layers() - 1;
  if (gt.sets.size() != k)
    throw precondition_error("brute_tower_closure: tuple size mismatch");
  std::vector<std::uint64_t> seed(k, 0), all(k), acc(k, ~std::uint64_t{0});
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t n = t.layer(j + 2).size;
    if (n > 63) throw precondition_error("brute_tower_closure: layer too large");
    all[j] = (std::uint64_t{1} << n) - 1;
    for (Elt x : gt.sets[j]) seed[j] |= std::uint64_t{1} << x;
  }
  std::vector<std::uint64_t> mask(k, 0);
  for (;;) {
    budget.charge();
    bool contains = true;
    for (std::size_t j = 0; j < k; ++j)
      if ((mask[j] & seed[j]) != seed[j]) contains = false;
    if (contains) {
      std::vector<std::vector<Elt>> sets(k);
      for (std::size_t j = 0; j < k; ++j)
        for (Elt x = 0; x < t.layer(j + 2).size; ++x)
          if (mask[j] >> x & 1) sets[j].push_back(x);
      if (is_stable_tuple(t, sets))
        for (std::size_t j = 0; j < k; ++j) acc[j] &= mask[j];
    }
    std::size_t j = k;
    bool done = false;
    while (j > 0) {
      --j;
      if (mask[j] < all[j]) {
        ++mask[j];
        break;
      }
      mask[j] = 0;
      if (j == 0) done = true;
    }
    if (done) break;
  }
  std::vector<std::vector<Elt>> out(k);
  for (std::size_t j = 0; j < k; ++j)
    for (Elt x = 0; x < t.layer(j + 2).size; ++x)
      if (acc[j] >> x & 1) out[j].push_back(x);
  return out;
}

// every generating tuple with at most max_per_layer elements per layer
inline std::vector<GeneratingTuple> enumerate_generating_tuples(
    const Tower& t, std::size_t max_per_layer, const Budget& budget = {}) {
  const std::size_t k = t.layers() - 1;
  std::vector<std::vector<std::vector<Elt>>> layer_subsets(k);
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t n = t.layer(j + 2).size;
    if (n > 20) throw precondition_error("enumerate_generating_tuples: layer too large");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) > max_per_layer) continue;
      std::vector<Elt> s;
      for (Elt x = 0; x < n; ++x)
        if (mask >> x & 1) s.push_back(x);
      layer_subsets[j].push_back(std::move(s));
    }
  }
  std::vector<GeneratingTuple> out;
  std::vector<std::size_t> pick(k, 0);
  for (;;) {
    budget.charge();
    GeneratingTuple cand;
    for (std::size_t j = 0; j < k; ++j) cand.sets.push_back(layer_subsets[j][pick[j]]);
    if (is_generating_tuple(t, cand)) out.push_back(std::move(cand));
    std::size_t j = k;
    while (j > 0) {
      --j;
      if (++pick[j] < layer_subsets[j].size()) break;
      pick[j] = 0;
      if (j == 0) return out;
    }
  }
}

// every pair of maps that validates as a morphism, in lexicographic order
inline std::vector<RepMorphism> exhaustive_morphism_search(const Representation& src,
                                                           const Representation& dst,
                                                           const Budget& budget = {}) {
  std::vector<RepMorphism> out;
  std::vector<Elt> dom(src.domain.size, 0), spc(src.space.size, 0);
  auto bump = [](std::vector<Elt>& v, std::size_t limit) {
    std::size_t i = v.size();
    while (i > 0) {
      --i;
      if (++v[i] < limit) return true;
      v[i] = 0;
      if (i == 0) return false;
    }
    return false;
  };
  if (src.domain.size == 0 || src.space.size == 0) return out;
  for (;;) {
    for (;;) {
      budget.charge();
      RepMorphism cand{Mapping{src.domain.size, dst.domain.size, dom},
                       Mapping{src.space.size, dst.space.size, spc}};
      if (validate_morphism(cand, src, dst).ok()) out.push_back(std::move(cand));
      if (!bump(spc, dst.space.size)) break;
    }
    if (!bump(dom, dst.domain.size)) break;
  }
  return out;
}

// single-representation generating subsets, capped by size
inline std::vector<std::vector<Elt>> enumerate_generating_sets(const Representation& r,
                                                               std::size_t max_size,
                                                               const Budget& budget = {}) {
  if (r.space.size > 20)
    throw precondition_error("enumerate_generating_sets: space too large");
  std::vector<std::vector<Elt>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r.space.size); ++mask) {
    budget.charge();
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > max_size) continue;
    std::vector<Elt> s;
    for (Elt x = 0; x < r.space.size; ++x)
      if (mask >> x & 1) s.push_back(x);
    if (is_generating(r, s)) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace omalg
