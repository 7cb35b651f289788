// Operations on finite algebras: validation, homomorphisms, kernels,
// quotients, subalgebra closure, endomorphism / automorphism enumeration.
#pragma once

#include <algorithm>
#include <optional>

#include "core.hpp"

namespace omalg {

inline ValidationReport validate_algebra(const FiniteAlgebra& alg) {
  ValidationReport rep;
  if (alg.size == 0) rep.add("empty carrier");
  if (alg.tables.size() != alg.sig.ops.size()) {
    rep.add("expected " + std::to_string(alg.sig.ops.size()) +
            " operation tables, found " + std::to_string(alg.tables.size()));
    return rep;
  }
  for (std::size_t i = 0; i < alg.sig.ops.size(); ++i) {
    const Op& op = alg.sig.ops[i];
    const OpTable& tab = alg.tables[i];
    if (tab.arity != op.arity)
      rep.add("table '" + op.symbol + "': arity " + std::to_string(tab.arity) +
              " does not match signature arity " + std::to_string(op.arity));
    std::size_t want = pow_size(alg.size, op.arity);
    if (tab.values.size() != want) {
      rep.add("table '" + op.symbol + "': " + std::to_string(tab.values.size()) +
              " entries, expected " + std::to_string(want));
      continue;
    }
    for (std::size_t k = 0; k < tab.values.size(); ++k)
      if (tab.values[k] >= alg.size)
        rep.add("table '" + op.symbol + "' entry #" + std::to_string(k) +
                " = " + std::to_string(tab.values[k]) + " out of range for carrier of size " +
                std::to_string(alg.size));
  }
  return rep;
}

struct HomCheck {
  bool ok = true;
  std::string witness;  // first counterexample, empty when ok
};

// h(w(a...)) == w(h(a)...) for every operation and argument tuple
inline HomCheck is_homomorphism(const Mapping& h, const FiniteAlgebra& src,
                                const FiniteAlgebra& dst) {
  if (h.source_size != src.size || h.target_size != dst.size)
    throw precondition_error("is_homomorphism: mapping sizes do not match algebras");
  if (h.image.size() != h.source_size)
    throw precondition_error("is_homomorphism: image vector length does not match source size");
  if (src.sig != dst.sig)
    throw precondition_error("is_homomorphism: signatures differ");
  HomCheck res;
  for (std::size_t op = 0; op < src.sig.ops.size() && res.ok; ++op) {
    for_each_tuple(src.size, src.sig.ops[op].arity, [&](std::span<const Elt> args) {
      if (!res.ok) return;
      Elt lhs = h(src.apply(op, args));
      std::vector<Elt> mapped(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) mapped[i] = h(args[i]);
      Elt rhs = dst.apply(op, std::span<const Elt>(mapped));
      if (lhs != rhs) {
        res.ok = false;
        res.witness = "op '" + src.sig.ops[op].symbol + "' at " + show_tuple(args) +
                      ": h(" + std::to_string(src.apply(op, args)) + ")=" +
                      std::to_string(lhs) + " but op(h(args))=" + std::to_string(rhs);
      }
    });
  }
  return res;
}

// partition of the source by equal image; compatibility follows from the
// homomorphism property but is re-verified by the caller when it matters
inline Congruence kernel_congruence(const Mapping& h, const FiniteAlgebra& src,
                                    const FiniteAlgebra& dst) {
  HomCheck hc = is_homomorphism(h, src, dst);
  if (!hc.ok)
    throw precondition_error("kernel_congruence: not a homomorphism: " + hc.witness);
  return Partition::from_labels(h.source_size, h.image);
}

inline ValidationReport validate_congruence(const FiniteAlgebra& alg,
                                            const Partition& c) {
  ValidationReport rep;
  if (c.size != alg.size) {
    rep.add("partition is over " + std::to_string(c.size) +
            " elements, algebra carrier has " + std::to_string(alg.size));
    return rep;
  }
  if (!c.well_formed()) rep.add("block ids not dense / not in first-occurrence order");
  // compatibility: replacing arguments by equivalent ones keeps results equivalent
  for (std::size_t op = 0; op < alg.sig.ops.size(); ++op) {
    std::size_t ar = alg.sig.ops[op].arity;
    for_each_tuple(alg.size, ar, [&](std::span<const Elt> a) {
      for_each_tuple(alg.size, ar, [&](std::span<const Elt> b) {
        for (std::size_t i = 0; i < ar; ++i)
          if (!c.same_block(a[i], b[i])) return;
        if (!c.same_block(alg.apply(op, a), alg.apply(op, b)))
          rep.add("op '" + alg.sig.ops[op].symbol + "' not compatible at " +
                  show_tuple(a) + " vs " + show_tuple(b));
      });
    });
  }
  return rep;
}

struct Quotient {
  FiniteAlgebra algebra;
  Mapping projection;  // carrier -> block ids
};

inline Quotient quotient_algebra(const FiniteAlgebra& alg, const Congruence& c) {
  ValidationReport chk = validate_congruence(alg, c);
  if (!chk.ok())
    throw precondition_error("quotient_algebra: " + chk.problems.front());
  std::size_t k = c.block_count();
  // representative = first element of each block
  std::vector<Elt> repr(k, 0);
  std::vector<bool> seen(k, false);
  for (Elt x = 0; x < alg.size; ++x)
    if (!seen[c.block_of[x]]) {
      seen[c.block_of[x]] = true;
      repr[c.block_of[x]] = x;
    }
  FiniteAlgebra q{alg.sig, k, {}};
  q.tables.reserve(alg.sig.ops.size());
  for (std::size_t op = 0; op < alg.sig.ops.size(); ++op) {
    std::size_t ar = alg.sig.ops[op].arity;
    OpTable tab{ar, {}};
    tab.values.reserve(pow_size(k, ar));
    for_each_tuple(k, ar, [&](std::span<const Elt> blocks) {
      std::vector<Elt> args(ar);
      for (std::size_t i = 0; i < ar; ++i) args[i] = repr[blocks[i]];
      tab.values.push_back(c.block_of[alg.apply(op, std::span<const Elt>(args))]);
    });
    q.tables.push_back(std::move(tab));
  }
  return Quotient{std::move(q), Mapping{alg.size, k, c.block_of}};
}

// Backtracking over image vectors in lexicographic order.  After assigning
// image[k] we check every operation tuple whose arguments and table result
// all lie in the assigned prefix, so dead branches are cut early.  The
// budget is charged once per explored assignment.
namespace detail {

template <class Emit>
void search_maps(const FiniteAlgebra& src, const FiniteAlgebra& dst,
                 bool injective, const Budget& budget, Emit&& emit) {
  const std::size_t n = src.size;
  std::vector<Elt> img(n, 0);
  std::vector<bool> used(dst.size, false);

  // op tuples indexed by the largest carrier index they mention
  struct Check {
    std::size_t op;
    std::vector<Elt> args;
    Elt result;
  };
  std::vector<std::vector<Check>> at(n);
  for (std::size_t op = 0; op < src.sig.ops.size(); ++op) {
    for_each_tuple(n, src.sig.ops[op].arity, [&](std::span<const Elt> args) {
      Elt res = src.apply(op, args);
      Elt hi = res;
      for (Elt a : args) hi = std::max(hi, a);
      at[hi].push_back(Check{op, std::vector<Elt>(args.begin(), args.end()), res});
    });
  }

  auto consistent = [&](std::size_t k) {
    std::vector<Elt> mapped;
    for (const Check& c : at[k]) {
      mapped.assign(c.args.size(), 0);
      for (std::size_t i = 0; i < c.args.size(); ++i) mapped[i] = img[c.args[i]];
      if (dst.apply(c.op, std::span<const Elt>(mapped)) != img[c.result])
        return false;
    }
    return true;
  };

  if (n == 0) return;

  std::size_t k = 0;
  long cand = 0;  // next candidate image for position k, -1 signals backtrack
  for (;;) {
    if (cand >= static_cast<long>(dst.size)) {
      if (k == 0) return;
      --k;
      if (injective) used[img[k]] = false;
      cand = static_cast<long>(img[k]) + 1;
      continue;
    }
    img[k] = static_cast<Elt>(cand);
    if (injective && used[img[k]]) {
      ++cand;
      continue;
    }
    budget.charge();
    if (!consistent(k)) {
      ++cand;
      continue;
    }
    if (k + 1 == n) {
      emit(img);
      ++cand;
      continue;
    }
    if (injective) used[img[k]] = true;
    ++k;
    cand = 0;
  }
}

}  // namespace detail

inline std::vector<Mapping> enumerate_endomorphisms(const FiniteAlgebra& alg,
                                                    const Budget& budget = {}) {
  std::vector<Mapping> out;
  detail::search_maps(alg, alg, false, budget, [&](const std::vector<Elt>& img) {
    out.push_back(Mapping{alg.size, alg.size, img});
  });
  return out;  // lexicographic by construction
}

inline std::vector<Mapping> enumerate_automorphisms(const FiniteAlgebra& alg,
                                                    const Budget& budget = {}) {
  std::vector<Mapping> out;
  detail::search_maps(alg, alg, true, budget, [&](const std::vector<Elt>& img) {
    Mapping m{alg.size, alg.size, img};
    if (!m.is_bijection()) return;
    if (!is_homomorphism(m.inverse(), alg, alg).ok) return;  // never fires for finite bijective homs
    out.push_back(std::move(m));
  });
  return out;
}

// least subset containing seed, all constants, and closed under every
// operation; returned sorted
inline std::vector<Elt> subalgebra_closure(const FiniteAlgebra& alg,
                                           std::vector<Elt> seed) {
  for (Elt x : seed)
    if (x >= alg.size)
      throw precondition_error("subalgebra_closure: seed element " +
                               std::to_string(x) + " out of range");
  std::vector<bool> in(alg.size, false);
  for (Elt x : seed) in[x] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t op = 0; op < alg.sig.ops.size(); ++op) {
      for_each_tuple(alg.size, alg.sig.ops[op].arity, [&](std::span<const Elt> args) {
        for (Elt a : args)
          if (!in[a]) return;
        Elt r = alg.apply(op, args);
        if (!in[r]) {
          in[r] = true;
          changed = true;
        }
      });
    }
  }
  std::vector<Elt> out;
  for (Elt x = 0; x < alg.size; ++x)
    if (in[x]) out.push_back(x);
  return out;
}

// induced algebra on a closed subset (sorted); also returns the inclusion
struct Subalgebra {
  FiniteAlgebra algebra;
  Mapping inclusion;  // sub carrier -> ambient carrier
};

inline Subalgebra subalgebra_on(const FiniteAlgebra& alg,
                                const std::vector<Elt>& closed) {
  std::vector<long> pos(alg.size, -1);
  for (std::size_t i = 0; i < closed.size(); ++i) pos[closed[i]] = static_cast<long>(i);
  FiniteAlgebra sub{alg.sig, closed.size(), {}};
  for (std::size_t op = 0; op < alg.sig.ops.size(); ++op) {
    std::size_t ar = alg.sig.ops[op].arity;
    OpTable tab{ar, {}};
    tab.values.reserve(pow_size(closed.size(), ar));
    for_each_tuple(closed.size(), ar, [&](std::span<const Elt> args) {
      std::vector<Elt> amb(ar);
      for (std::size_t i = 0; i < ar; ++i) amb[i] = closed[args[i]];
      Elt r = alg.apply(op, std::span<const Elt>(amb));
      if (pos[r] < 0)
        throw precondition_error("subalgebra_on: subset not closed under '" +
                                 alg.sig.ops[op].symbol + "'");
      tab.values.push_back(static_cast<Elt>(pos[r]));
    });
    sub.tables.push_back(std::move(tab));
  }
  return Subalgebra{std::move(sub), Mapping{closed.size(), alg.size, closed}};
}

}  // namespace omalg
