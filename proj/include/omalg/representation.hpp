// Representations of one finite algebra on another: the domain algebra acts
// on the space algebra by space endomorphisms ("transformations"), and the
// action map is itself a homomorphism with respect to a declared
// interpretation of each domain operation on transformations.
//
// Also here: morphisms of representations, their composition and star lift,
// quotient representations, the kernel/image decomposition of a morphism,
// and the automorphism loop.
#pragma once

#include <algorithm>
#include <map>

#include "algebra.hpp"
#include "core.hpp"

namespace omalg {

enum class InterpMode { Compose, Identity, Inverse, Pointwise };

struct OpInterp {
  InterpMode mode = InterpMode::Compose;
  std::string pointwise_symbol;  // Pointwise only: a space operation of equal arity
  bool operator==(const OpInterp&) const = default;
};

// How each domain operation acts on transformations.  Either a per-op mode
// table aligned with the domain signature, or "induced": the operation on
// transformations is defined through the action map itself,
// op(f(a1..ak)) := f(op(a1..ak)), checked for well-definedness.  Induced
// structure is what skip and extended representations of towers carry.
struct Interp {
  bool induced = false;
  bool dual = false;  // reverse composition order (loaded from right-action input)
  std::vector<OpInterp> ops;  // aligned with domain signature unless induced

  bool operator==(const Interp&) const = default;
};

struct Representation {
  FiniteAlgebra domain;
  FiniteAlgebra space;
  Interp interp;
  std::vector<Mapping> actions;  // one transformation per domain element

  bool operator==(const Representation&) const = default;

  const Mapping& act(Elt a) const { return actions[a]; }
};

inline ValidationReport validate_interp(const Interp& in, const Signature& dom,
                                        const Signature& spc) {
  ValidationReport rep;
  if (in.induced) {
    if (!in.ops.empty()) rep.add("induced interpretation must not list per-op modes");
    return rep;
  }
  if (in.ops.size() != dom.ops.size()) {
    rep.add("interpretation lists " + std::to_string(in.ops.size()) +
            " ops, domain signature has " + std::to_string(dom.ops.size()));
    return rep;
  }
  for (std::size_t i = 0; i < dom.ops.size(); ++i) {
    const Op& op = dom.ops[i];
    const OpInterp& oi = in.ops[i];
    switch (oi.mode) {
      case InterpMode::Compose:
        if (op.arity != 2)
          rep.add("op '" + op.symbol + "': compose interpretation needs arity 2, has " +
                  std::to_string(op.arity));
        break;
      case InterpMode::Identity:
        if (op.arity != 0)
          rep.add("op '" + op.symbol + "': identity interpretation needs arity 0, has " +
                  std::to_string(op.arity));
        break;
      case InterpMode::Inverse:
        if (op.arity != 1)
          rep.add("op '" + op.symbol + "': inverse interpretation needs arity 1, has " +
                  std::to_string(op.arity));
        break;
      case InterpMode::Pointwise: {
        const Op* sp = spc.find(oi.pointwise_symbol);
        if (!sp)
          rep.add("op '" + op.symbol + "': pointwise target '" + oi.pointwise_symbol +
                  "' is not a space operation");
        else if (sp->arity != op.arity)
          rep.add("op '" + op.symbol + "' (arity " + std::to_string(op.arity) +
                  "): pointwise target '" + oi.pointwise_symbol + "' has arity " +
                  std::to_string(sp->arity));
        break;
      }
    }
  }
  return rep;
}

// Apply a declared interpreted operation to transformations of the space.
// Compose follows the left-action convention, result(m) = first(second(m));
// dual representations reverse it.
inline Mapping interp_apply_maps(const Interp& in, const FiniteAlgebra& space,
                                 std::size_t op_index,
                                 std::span<const Mapping> args) {
  if (in.induced)
    throw precondition_error("interp_apply_maps: induced interpretation has no map-level ops");
  const OpInterp& oi = in.ops[op_index];
  switch (oi.mode) {
    case InterpMode::Compose:
      return in.dual ? args[0].then(args[1]) : args[1].then(args[0]);
    case InterpMode::Identity:
      return Mapping::identity(space.size);
    case InterpMode::Inverse:
      if (!args[0].is_bijection())
        throw precondition_error("interp_apply_maps: inverse of a non-bijective transformation");
      return args[0].inverse();
    case InterpMode::Pointwise: {
      std::size_t sp = space.sig.index_of(oi.pointwise_symbol);
      Mapping r{space.size, space.size, std::vector<Elt>(space.size)};
      std::vector<Elt> vals(args.size());
      for (Elt m = 0; m < space.size; ++m) {
        for (std::size_t i = 0; i < args.size(); ++i) vals[i] = args[i](m);
        r.image[m] = space.apply(sp, std::span<const Elt>(vals));
      }
      return r;
    }
  }
  throw error("unreachable interp mode");
}

// Interpreted op as a transformation, given domain elements as arguments.
// Works for both declared and induced interpretations.
inline Mapping interp_apply(const Representation& r, std::size_t op_index,
                            std::span<const Elt> domain_args) {
  if (r.interp.induced)
    return r.actions[r.domain.apply(op_index, domain_args)];
  std::vector<Mapping> args;
  args.reserve(domain_args.size());
  for (Elt a : domain_args) args.push_back(r.actions[a]);
  return interp_apply_maps(r.interp, r.space, op_index, std::span<const Mapping>(args));
}

inline ValidationReport validate_representation(const Representation& r) {
  ValidationReport rep;
  for (auto& p : validate_algebra(r.domain).problems) rep.add("domain: " + p);
  for (auto& p : validate_algebra(r.space).problems) rep.add("space: " + p);
  if (!rep.ok()) return rep;

  if (r.actions.size() != r.domain.size) {
    rep.add("expected " + std::to_string(r.domain.size) + " actions, found " +
            std::to_string(r.actions.size()));
    return rep;
  }
  for (Elt a = 0; a < r.domain.size; ++a) {
    const Mapping& t = r.actions[a];
    if (t.source_size != r.space.size || t.target_size != r.space.size ||
        t.image.size() != r.space.size) {
      rep.add("action of " + std::to_string(a) + " is not a self-map of the space");
      return rep;
    }
    for (Elt v : t.image)
      if (v >= r.space.size) {
        rep.add("action of " + std::to_string(a) + " has value " + std::to_string(v) +
                " out of range");
        return rep;
      }
  }
  // every action must be a space endomorphism
  for (Elt a = 0; a < r.domain.size; ++a) {
    HomCheck hc = is_homomorphism(r.actions[a], r.space, r.space);
    if (!hc.ok)
      rep.add("action of " + std::to_string(a) +
              " is not a space endomorphism: " + hc.witness);
  }

  if (r.interp.induced) {
    // well-definedness: equal actions on the arguments force equal action on
    // the operation result
    for (std::size_t op = 0; op < r.domain.sig.ops.size(); ++op) {
      std::size_t ar = r.domain.sig.ops[op].arity;
      for_each_tuple(r.domain.size, ar, [&](std::span<const Elt> a) {
        for_each_tuple(r.domain.size, ar, [&](std::span<const Elt> b) {
          for (std::size_t i = 0; i < ar; ++i)
            if (!(r.actions[a[i]] == r.actions[b[i]])) return;
          if (!(r.actions[r.domain.apply(op, a)] == r.actions[r.domain.apply(op, b)]))
            rep.add("induced op '" + r.domain.sig.ops[op].symbol +
                    "' ill-defined at " + show_tuple(a) + " vs " + show_tuple(b));
        });
      });
    }
    return rep;
  }

  for (auto& p : validate_interp(r.interp, r.domain.sig, r.space.sig).problems)
    rep.add("interpretation: " + p);
  if (!rep.ok()) return rep;

  // homomorphism law: the action of op(a...) is the interpreted op applied to
  // the actions of a...
  for (std::size_t op = 0; op < r.domain.sig.ops.size(); ++op) {
    const Op& o = r.domain.sig.ops[op];
    for_each_tuple(r.domain.size, o.arity, [&](std::span<const Elt> args) {
      if (r.interp.ops[op].mode == InterpMode::Inverse &&
          !r.actions[args[0]].is_bijection()) {
        rep.add("op '" + o.symbol + "' at " + show_tuple(args) +
                ": inverse interpretation applied to a non-bijective transformation");
        return;
      }
      Mapping want = interp_apply(r, op, args);
      if (!(r.actions[r.domain.apply(op, args)] == want))
        rep.add("op '" + o.symbol + "' at " + show_tuple(args) +
                ": action of the result differs from the interpreted op on actions");
    });
  }
  return rep;
}

// action map injective
inline bool is_effective(const Representation& r) {
  for (Elt a = 0; a < r.domain.size; ++a)
    for (Elt b = a + 1; b < r.domain.size; ++b)
      if (r.actions[a] == r.actions[b]) return false;
  return true;
}

// every point reaches every point under some action
inline bool is_transitive(const Representation& r) {
  for (Elt m = 0; m < r.space.size; ++m)
    for (Elt m2 = 0; m2 < r.space.size; ++m2) {
      bool hit = false;
      for (Elt a = 0; a < r.domain.size && !hit; ++a)
        if (r.actions[a](m) == m2) hit = true;
      if (!hit) return false;
    }
  return true;
}

// ... under exactly one action (equivalently: transitive and effective)
inline bool is_single_transitive(const Representation& r) {
  for (Elt m = 0; m < r.space.size; ++m)
    for (Elt m2 = 0; m2 < r.space.size; ++m2) {
      std::size_t hits = 0;
      for (Elt a = 0; a < r.domain.size; ++a)
        if (r.actions[a](m) == m2) ++hits;
      if (hits != 1) return false;
    }
  return true;
}

struct RepMorphism {
  Mapping dom;  // between domain algebras
  Mapping spc;  // between space algebras
  bool operator==(const RepMorphism&) const = default;
  auto operator<=>(const RepMorphism&) const = default;
};

inline RepMorphism identity_morphism(const Representation& r) {
  return RepMorphism{Mapping::identity(r.domain.size), Mapping::identity(r.space.size)};
}

// both components homomorphisms + the commutation law
// spc(f(a)(m)) == g(dom(a))(spc(m))
inline ValidationReport validate_morphism(const RepMorphism& m,
                                          const Representation& src,
                                          const Representation& dst) {
  if (src.domain.sig != dst.domain.sig || src.space.sig != dst.space.sig)
    throw precondition_error("validate_morphism: signatures differ");
  if (m.dom.source_size != src.domain.size || m.dom.target_size != dst.domain.size ||
      m.spc.source_size != src.space.size || m.spc.target_size != dst.space.size)
    throw precondition_error("validate_morphism: mapping sizes do not match");
  if (m.dom.image.size() != m.dom.source_size || m.spc.image.size() != m.spc.source_size)
    throw precondition_error("validate_morphism: image vector length does not match source size");
  ValidationReport rep;
  HomCheck hd = is_homomorphism(m.dom, src.domain, dst.domain);
  if (!hd.ok) rep.add("domain component not a homomorphism: " + hd.witness);
  HomCheck hs = is_homomorphism(m.spc, src.space, dst.space);
  if (!hs.ok) rep.add("space component not a homomorphism: " + hs.witness);
  for (Elt a = 0; a < src.domain.size; ++a)
    for (Elt x = 0; x < src.space.size; ++x) {
      Elt lhs = m.spc(src.actions[a](x));
      Elt rhs = dst.actions[m.dom(a)](m.spc(x));
      if (lhs != rhs)
        rep.add("commutation fails at domain element " + std::to_string(a) +
                ", space element " + std::to_string(x) + ": " + std::to_string(lhs) +
                " != " + std::to_string(rhs));
    }
  return rep;
}

inline RepMorphism compose_morphisms(const RepMorphism& first,
                                     const RepMorphism& second) {
  return RepMorphism{first.dom.then(second.dom), first.spc.then(second.spc)};
}

// The action map of an effective representation, transported along a
// morphism: lift(f(a)) := g(h(a)) on the sets of transformations.
struct StarLift {
  std::vector<Mapping> src_images;  // distinct source transformations, sorted
  std::vector<Mapping> dst_images;  // distinct target transformations, sorted
  Mapping on_images;                // index map src_images -> dst_images
  ValidationReport report;          // interpreted-op preservation
};

namespace detail {
inline std::vector<Mapping> sorted_actions(const std::vector<Mapping>& acts) {
  std::vector<Mapping> v = acts;
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}
inline std::size_t image_index(const std::vector<Mapping>& sorted, const Mapping& m) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), m);
  if (it == sorted.end() || !(*it == m))
    throw error("transformation not found in image set");
  return static_cast<std::size_t>(it - sorted.begin());
}
}  // namespace detail

inline StarLift star_lift(const RepMorphism& m, const Representation& src,
                          const Representation& dst) {
  if (!is_effective(src))
    throw precondition_error("star_lift: source representation is not effective");
  StarLift out;
  out.src_images = detail::sorted_actions(src.actions);
  out.dst_images = detail::sorted_actions(dst.actions);
  out.on_images = Mapping{out.src_images.size(), out.dst_images.size(),
                          std::vector<Elt>(out.src_images.size())};
  for (Elt a = 0; a < src.domain.size; ++a) {
    std::size_t si = detail::image_index(out.src_images, src.actions[a]);
    out.on_images.image[si] =
        detail::image_index(out.dst_images, dst.actions[m.dom(a)]);
  }
  // preservation of every interpreted domain op, computed on both sides
  for (std::size_t op = 0; op < src.domain.sig.ops.size(); ++op) {
    std::size_t ar = src.domain.sig.ops[op].arity;
    for_each_tuple(src.domain.size, ar, [&](std::span<const Elt> args) {
      Mapping lhs_map = interp_apply(src, op, args);
      std::size_t li = detail::image_index(out.src_images, lhs_map);
      std::vector<Elt> mapped(ar);
      for (std::size_t i = 0; i < ar; ++i) mapped[i] = m.dom(args[i]);
      Mapping rhs_map = interp_apply(dst, op, std::span<const Elt>(mapped));
      if (!(out.dst_images[out.on_images.image[li]] == rhs_map))
        out.report.add("lift does not preserve op '" + src.domain.sig.ops[op].symbol +
                       "' at " + show_tuple(args));
    });
  }
  return out;
}

// equivalent points stay equivalent under the transformation
inline bool is_coordinated(const Mapping& t, const SpaceEquivalence& e) {
  if (t.source_size != e.size)
    throw precondition_error("is_coordinated: sizes do not match");
  for (Elt x = 0; x < e.size; ++x)
    for (Elt y = x + 1; y < e.size; ++y)
      if (e.same_block(x, y) && !e.same_block(t(x), t(y))) return false;
  return true;
}

struct QuotientRep {
  Representation rep;
  Mapping dom_proj;  // domain -> domain blocks
  Mapping spc_proj;  // space -> space blocks
};

// Representation induced on quotients: the action of a domain block on a
// space block is computed through representatives and checked independent of
// the choice.
inline QuotientRep quotient_representation(const Representation& r,
                                           const SpaceEquivalence& S,
                                           const Congruence& s) {
  if (S.size != r.space.size || s.size != r.domain.size)
    throw precondition_error("quotient_representation: partition sizes do not match");
  for (Elt a = 0; a < r.domain.size; ++a)
    if (!is_coordinated(r.actions[a], S))
      throw precondition_error(
          "quotient_representation: action of " + std::to_string(a) +
          " is not coordinated with the space partition");
  // the space partition must also respect space operations, else the
  // quotient space is not an algebra
  {
    ValidationReport c = validate_congruence(r.space, S);
    if (!c.ok())
      throw precondition_error("quotient_representation: space partition: " +
                               c.problems.front());
  }
  Quotient qd = quotient_algebra(r.domain, s);
  Quotient qs = quotient_algebra(r.space, S);
  // equivalent domain elements must act equally on blocks
  for (Elt a = 0; a < r.domain.size; ++a)
    for (Elt b = a + 1; b < r.domain.size; ++b) {
      if (!s.same_block(a, b)) continue;
      for (Elt x = 0; x < r.space.size; ++x)
        if (!S.same_block(r.actions[a](x), r.actions[b](x)))
          throw precondition_error(
              "quotient_representation: domain elements " + std::to_string(a) + " and " +
              std::to_string(b) + " are identified but act differently at space element " +
              std::to_string(x));
    }
  QuotientRep out{Representation{qd.algebra, qs.algebra, r.interp, {}},
                  qd.projection, qs.projection};
  out.rep.actions.assign(qd.algebra.size, Mapping{});
  std::vector<Elt> dom_repr(qd.algebra.size), spc_repr(qs.algebra.size);
  {
    std::vector<bool> seen(qd.algebra.size, false);
    for (Elt a = 0; a < r.domain.size; ++a)
      if (!seen[s.block_of[a]]) {
        seen[s.block_of[a]] = true;
        dom_repr[s.block_of[a]] = a;
      }
  }
  {
    std::vector<bool> seen(qs.algebra.size, false);
    for (Elt x = 0; x < r.space.size; ++x)
      if (!seen[S.block_of[x]]) {
        seen[S.block_of[x]] = true;
        spc_repr[S.block_of[x]] = x;
      }
  }
  for (Elt ab = 0; ab < qd.algebra.size; ++ab) {
    Mapping act{qs.algebra.size, qs.algebra.size, std::vector<Elt>(qs.algebra.size)};
    for (Elt xb = 0; xb < qs.algebra.size; ++xb)
      act.image[xb] = S.block_of[r.actions[dom_repr[ab]](spc_repr[xb])];
    out.rep.actions[ab] = std::move(act);
  }
  return out;
}

// Kernel/image decomposition of a morphism: both components factor as
// projection . bijection . inclusion, the quotient representation sits on
// the kernels and the image representation on the images, and all four
// factor pairs are again morphisms of representations.
struct Decomposition {
  Congruence dom_kernel;        // on the source domain
  SpaceEquivalence spc_kernel;  // on the source space (also a congruence)
  FiniteAlgebra dom_quotient;
  FiniteAlgebra spc_quotient;
  FiniteAlgebra dom_image;
  FiniteAlgebra spc_image;
  Mapping dom_proj, dom_bij, dom_incl;  // dom = proj . bij . incl
  Mapping spc_proj, spc_bij, spc_incl;
  Representation quotient_rep;  // on (domain blocks, space blocks)
  Representation image_rep;     // on (domain image, space image)
  ValidationReport report;      // every factor property, re-verified
};

inline Decomposition decompose_morphism(const RepMorphism& m,
                                        const Representation& src,
                                        const Representation& dst) {
  {
    ValidationReport v = validate_morphism(m, src, dst);
    if (!v.ok())
      throw precondition_error("decompose_morphism: not a morphism: " + v.problems.front());
  }
  Decomposition d;
  d.dom_kernel = kernel_congruence(m.dom, src.domain, dst.domain);
  d.spc_kernel = kernel_congruence(m.spc, src.space, dst.space);

  QuotientRep q = quotient_representation(src, d.spc_kernel, d.dom_kernel);
  d.quotient_rep = q.rep;
  d.dom_quotient = q.rep.domain;
  d.spc_quotient = q.rep.space;
  d.dom_proj = q.dom_proj;
  d.spc_proj = q.spc_proj;

  auto build_side = [&](const Mapping& h, const FiniteAlgebra& dst_alg,
                        const Mapping& proj, FiniteAlgebra& image_alg,
                        Mapping& bij, Mapping& incl) {
    std::vector<Elt> img = h.image;
    std::sort(img.begin(), img.end());
    img.erase(std::unique(img.begin(), img.end()), img.end());
    Subalgebra sub = subalgebra_on(dst_alg, img);
    image_alg = sub.algebra;
    incl = sub.inclusion;
    std::vector<long> pos(dst_alg.size, -1);
    for (std::size_t i = 0; i < img.size(); ++i) pos[img[i]] = static_cast<long>(i);
    std::size_t blocks = proj.target_size;
    bij = Mapping{blocks, img.size(), std::vector<Elt>(blocks)};
    for (Elt x = 0; x < h.source_size; ++x)
      bij.image[proj(x)] = static_cast<Elt>(pos[h(x)]);
  };
  build_side(m.dom, dst.domain, d.dom_proj, d.dom_image, d.dom_bij, d.dom_incl);
  build_side(m.spc, dst.space, d.spc_proj, d.spc_image, d.spc_bij, d.spc_incl);

  // image representation: target actions restricted to the image carriers
  d.image_rep = Representation{d.dom_image, d.spc_image, dst.interp, {}};
  {
    std::vector<long> spos(dst.space.size, -1);
    for (Elt i = 0; i < d.spc_incl.source_size; ++i)
      spos[d.spc_incl(i)] = static_cast<long>(i);
    for (Elt bi = 0; bi < d.dom_incl.source_size; ++bi) {
      const Mapping& big = dst.actions[d.dom_incl(bi)];
      Mapping act{d.spc_image.size, d.spc_image.size,
                  std::vector<Elt>(d.spc_image.size)};
      for (Elt xi = 0; xi < d.spc_image.size; ++xi) {
        long p = spos[big(d.spc_incl(xi))];
        if (p < 0) {
          d.report.add("space image is not closed under the action of image element " +
                       std::to_string(bi));
          p = 0;
        }
        act.image[xi] = static_cast<Elt>(p);
      }
      d.image_rep.actions.push_back(std::move(act));
    }
  }

  auto check = [&](const char* what, bool ok) {
    if (!ok) d.report.add(std::string("check failed: ") + what);
  };
  check("domain factorization proj.bij.incl == morphism",
        d.dom_proj.then(d.dom_bij).then(d.dom_incl) == m.dom);
  check("space factorization proj.bij.incl == morphism",
        d.spc_proj.then(d.spc_bij).then(d.spc_incl) == m.spc);
  check("domain middle factor bijective", d.dom_bij.is_bijection());
  check("space middle factor bijective", d.spc_bij.is_bijection());
  check("domain kernel compatible", validate_congruence(src.domain, d.dom_kernel).ok());
  check("space kernel compatible", validate_congruence(src.space, d.spc_kernel).ok());
  check("quotient representation valid", validate_representation(d.quotient_rep).ok());
  check("image representation valid", validate_representation(d.image_rep).ok());
  check("projection pair is a morphism",
        validate_morphism(RepMorphism{d.dom_proj, d.spc_proj}, src, d.quotient_rep).ok());
  RepMorphism bij_pair{d.dom_bij, d.spc_bij};
  check("bijection pair is a morphism",
        validate_morphism(bij_pair, d.quotient_rep, d.image_rep).ok());
  check("inverse bijection pair is a morphism",
        validate_morphism(RepMorphism{d.dom_bij.inverse(), d.spc_bij.inverse()},
                          d.image_rep, d.quotient_rep)
            .ok());
  check("inclusion pair is a morphism",
        validate_morphism(RepMorphism{d.dom_incl, d.spc_incl}, d.image_rep, dst).ok());
  return d;
}

// Loop structure of the automorphism set: identity, closure, two-sided
// inverses, unique left and right division.  Associativity of the abstract
// loop operation does not come for free, so the report records what the
// concrete composition did.
struct LoopReport {
  bool identity_present = false;
  bool closed = false;
  bool inverses = false;
  bool left_division_unique = false;
  bool right_division_unique = false;
  bool associative = false;
  std::string associativity_checked;  // "full" or "sampled"
  std::vector<std::string> problems;
  bool loop_axioms_hold() const {
    return identity_present && closed && inverses && left_division_unique &&
           right_division_unique;
  }
};

namespace detail {

template <class T, class ComposeFn>
LoopReport loop_report(const std::vector<T>& members, const T& id,
                       ComposeFn&& comp, const Budget& budget) {
  LoopReport rep;
  const std::size_t n = members.size();
  rep.identity_present = std::binary_search(members.begin(), members.end(), id);
  if (!rep.identity_present) rep.problems.push_back("identity missing");
  budget.charge(n * n);
  std::vector<std::size_t> table(n * n, n);
  rep.closed = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      T c = comp(members[i], members[j]);
      auto it = std::lower_bound(members.begin(), members.end(), c);
      if (it == members.end() || !(*it == c)) {
        rep.closed = false;
        rep.problems.push_back("composition of members " + std::to_string(i) + "," +
                               std::to_string(j) + " escapes the set");
      } else {
        table[i * n + j] = static_cast<std::size_t>(it - members.begin());
      }
    }
  if (!rep.closed) return rep;
  std::size_t id_idx = static_cast<std::size_t>(
      std::lower_bound(members.begin(), members.end(), id) - members.begin());
  rep.inverses = true;
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t j = 0; j < n && !found; ++j)
      if (table[i * n + j] == id_idx && table[j * n + i] == id_idx) found = true;
    if (!found) {
      rep.inverses = false;
      rep.problems.push_back("member " + std::to_string(i) + " has no two-sided inverse");
    }
  }
  // unique division <=> every row and every column of the table is a permutation
  rep.left_division_unique = rep.right_division_unique = true;
  std::vector<bool> seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[table[i * n + j]]) {
        rep.right_division_unique = false;
        rep.problems.push_back("row " + std::to_string(i) + " repeats a value");
        break;
      }
      seen[table[i * n + j]] = true;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), false);
    for (std::size_t i = 0; i < n; ++i) {
      if (seen[table[i * n + j]]) {
        rep.left_division_unique = false;
        rep.problems.push_back("column " + std::to_string(j) + " repeats a value");
        break;
      }
      seen[table[i * n + j]] = true;
    }
  }
  // associativity is a property of the concrete composition; observed, not
  // assumed.  Full check when feasible, deterministic sample otherwise.
  rep.associative = true;
  const std::size_t full_cost = n * n * n;
  if (full_cost <= 2'000'000) {
    rep.associativity_checked = "full";
    for (std::size_t i = 0; i < n && rep.associative; ++i)
      for (std::size_t j = 0; j < n && rep.associative; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (table[table[i * n + j] * n + k] != table[i * n + table[j * n + k]]) {
            rep.associative = false;
            rep.problems.push_back("associativity fails at " + std::to_string(i) + "," +
                                   std::to_string(j) + "," + std::to_string(k));
            break;
          }
  } else {
    rep.associativity_checked = "sampled";
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (std::size_t s = 0; s < 200'000 && rep.associative; ++s) {
      auto next = [&] {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        return static_cast<std::size_t>((state >> 33) % n);
      };
      std::size_t i = next(), j = next(), k = next();
      if (table[table[i * n + j] * n + k] != table[i * n + table[j * n + k]]) {
        rep.associative = false;
        rep.problems.push_back("associativity fails at sampled " + std::to_string(i) +
                               "," + std::to_string(j) + "," + std::to_string(k));
      }
    }
  }
  return rep;
}

}  // namespace detail

struct AutomorphismLoop {
  std::vector<RepMorphism> members;  // sorted
  LoopReport report;
};

// All pairs of domain/space automorphisms that commute with the action.
inline AutomorphismLoop automorphism_loop(const Representation& r,
                                          const Budget& budget = {}) {
  std::vector<Mapping> auts_dom = enumerate_automorphisms(r.domain, budget);
  std::vector<Mapping> auts_spc = enumerate_automorphisms(r.space, budget);
  AutomorphismLoop out;
  for (const Mapping& rd : auts_dom)
    for (const Mapping& rs : auts_spc) {
      budget.charge();
      bool ok = true;
      for (Elt a = 0; a < r.domain.size && ok; ++a)
        for (Elt x = 0; x < r.space.size && ok; ++x)
          if (rs(r.actions[a](x)) != r.actions[rd(a)](rs(x))) ok = false;
      if (ok) out.members.push_back(RepMorphism{rd, rs});
    }
  std::sort(out.members.begin(), out.members.end());
  out.report = detail::loop_report(
      out.members, identity_morphism(r),
      [](const RepMorphism& x, const RepMorphism& y) { return compose_morphisms(x, y); },
      budget);
  return out;
}

// For single transitive source and target and a domain homomorphism h, the
// space component is forced once one value is chosen: send the point reached
// from m under a to the point reached from n under h(a).
inline RepMorphism morphism_from_single_transitive(const Representation& src,
                                                   const Representation& dst,
                                                   const Mapping& h, Elt m, Elt n) {
  if (!is_single_transitive(src) || !is_single_transitive(dst))
    throw precondition_error(
        "morphism_from_single_transitive: both representations must be single transitive");
  HomCheck hc = is_homomorphism(h, src.domain, dst.domain);
  if (!hc.ok)
    throw precondition_error("morphism_from_single_transitive: not a homomorphism: " +
                             hc.witness);
  if (m >= src.space.size || n >= dst.space.size)
    throw precondition_error("morphism_from_single_transitive: base points out of range");
  Mapping H{src.space.size, dst.space.size, std::vector<Elt>(src.space.size)};
  for (Elt x = 0; x < src.space.size; ++x) {
    Elt the_a = src.domain.size;  // unique a with f(a)(m) == x
    for (Elt a = 0; a < src.domain.size; ++a)
      if (src.actions[a](m) == x) {
        the_a = a;
        break;
      }
    H.image[x] = dst.actions[h(the_a)](n);
  }
  return RepMorphism{h, H};
}

}  // namespace omalg
