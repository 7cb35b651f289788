// Core value types: finite signatures, algebras given by operation tables,
// mappings between carriers, partitions, enumeration budgets.
//
// Carriers are always {0, ..., n-1}.  Element names, when any exist, live in
// the document layer, not here.
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace omalg {

using Elt = std::size_t;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// thrown when an enumeration would exceed its candidate budget
struct budget_error : error {
  using error::error;
};

// thrown when an operation is called outside its stated precondition
struct precondition_error : error {
  using error::error;
};

// Cap on enumeration work.  Charged per explored candidate, so pruned
// search never pays for subtrees it skips.  Exceeding the cap throws;
// results are never silently truncated.
struct Budget {
  std::size_t max_candidates = 1'000'000;
  mutable std::size_t used = 0;

  void charge(std::size_t amount = 1) const {
    used += amount;
    if (used > max_candidates) {
      std::ostringstream os;
      os << "enumeration budget exceeded (" << used << " > " << max_candidates
         << " candidates)";
      throw budget_error(os.str());
    }
  }
};

struct Op {
  std::string symbol;
  std::size_t arity = 0;
  bool operator==(const Op&) const = default;
};

struct Signature {
  std::vector<Op> ops;

  bool operator==(const Signature&) const = default;

  const Op* find(std::string_view symbol) const {
    for (const auto& op : ops)
      if (op.symbol == symbol) return &op;
    return nullptr;
  }
  std::size_t index_of(std::string_view symbol) const {
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (ops[i].symbol == symbol) return i;
    throw error("unknown operation symbol: " + std::string(symbol));
  }
};

// Total operation table.  values is row-major over argument tuples in
// lexicographic order; a nullary table has exactly one entry.
struct OpTable {
  std::size_t arity = 0;
  std::vector<Elt> values;
  bool operator==(const OpTable&) const = default;
};

inline std::size_t pow_size(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

// visit all tuples in {0..size-1}^arity in lexicographic order
template <class Fn>
void for_each_tuple(std::size_t size, std::size_t arity, Fn&& fn) {
  std::vector<Elt> tup(arity, 0);
  if (arity == 0) {
    fn(std::span<const Elt>(tup.data(), 0));
    return;
  }
  if (size == 0) return;
  for (;;) {
    fn(std::span<const Elt>(tup.data(), arity));
    std::size_t i = arity;
    while (i > 0) {
      --i;
      if (++tup[i] < size) break;
      tup[i] = 0;
      if (i == 0) return;
    }
  }
}

inline std::size_t tuple_index(std::size_t size, std::span<const Elt> args) {
  std::size_t idx = 0;
  for (Elt a : args) idx = idx * size + a;
  return idx;
}

struct FiniteAlgebra {
  Signature sig;
  std::size_t size = 0;
  std::vector<OpTable> tables;  // aligned with sig.ops

  bool operator==(const FiniteAlgebra&) const = default;

  Elt apply(std::size_t op, std::span<const Elt> args) const {
    return tables[op].values[tuple_index(size, args)];
  }
  Elt apply(std::string_view symbol, std::initializer_list<Elt> args) const {
    std::vector<Elt> a(args);
    return apply(sig.index_of(symbol), std::span<const Elt>(a));
  }

  static FiniteAlgebra plain_set(std::size_t n) {
    return FiniteAlgebra{Signature{}, n, {}};
  }
};

// Map between two carriers, stored as its image vector.
struct Mapping {
  std::size_t source_size = 0;
  std::size_t target_size = 0;
  std::vector<Elt> image;

  bool operator==(const Mapping&) const = default;
  auto operator<=>(const Mapping&) const = default;

  Elt operator()(Elt x) const { return image[x]; }

  static Mapping identity(std::size_t n) {
    Mapping m{n, n, std::vector<Elt>(n)};
    std::iota(m.image.begin(), m.image.end(), Elt{0});
    return m;
  }

  // g.after(f) would read backwards; then = "apply this, then g"
  Mapping then(const Mapping& g) const {
    if (g.source_size != target_size)
      throw precondition_error("mapping composition: size mismatch");
    Mapping r{source_size, g.target_size, {}};
    r.image.reserve(source_size);
    for (Elt x : image) r.image.push_back(g.image[x]);
    return r;
  }

  bool is_bijection() const {
    if (source_size != target_size) return false;
    std::vector<bool> seen(target_size, false);
    for (Elt x : image) {
      if (seen[x]) return false;
      seen[x] = true;
    }
    return true;
  }

  Mapping inverse() const {
    if (!is_bijection()) throw precondition_error("inverse of non-bijection");
    Mapping r{target_size, source_size, std::vector<Elt>(target_size)};
    for (Elt x = 0; x < source_size; ++x) r.image[image[x]] = x;
    return r;
  }
};

// Partition of {0..size-1} into blocks, ids dense and numbered by first
// occurrence.  Used both for congruences (compatibility checked against an
// algebra where needed) and for plain equivalences on a space.
struct Partition {
  std::size_t size = 0;
  std::vector<Elt> block_of;

  bool operator==(const Partition&) const = default;

  std::size_t block_count() const {
    std::size_t k = 0;
    for (Elt b : block_of) k = std::max(k, static_cast<std::size_t>(b) + 1);
    return block_of.empty() ? 0 : k;
  }
  bool same_block(Elt a, Elt b) const { return block_of[a] == block_of[b]; }

  static Partition discrete(std::size_t n) {
    Partition p{n, std::vector<Elt>(n)};
    std::iota(p.block_of.begin(), p.block_of.end(), Elt{0});
    return p;
  }

  // canonical renumbering: block ids ordered by first occurrence
  static Partition from_labels(std::size_t n, const std::vector<Elt>& labels) {
    Partition p{n, std::vector<Elt>(n)};
    std::vector<long> remap;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Elt l = labels[i];
      if (l >= remap.size()) remap.resize(l + 1, -1);
      if (remap[l] < 0) remap[l] = static_cast<long>(next++);
      p.block_of[i] = static_cast<Elt>(remap[l]);
    }
    return p;
  }

  bool well_formed() const {
    if (block_of.size() != size) return false;
    std::size_t next = 0;
    for (Elt b : block_of) {
      if (b > next) return false;  // ids must appear in first-occurrence order
      if (b == next) ++next;
    }
    return size == 0 || next > 0;
  }
};

using Congruence = Partition;       // + compatibility, checked contextually
using SpaceEquivalence = Partition; // no compatibility requirement

struct ValidationReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
  void add(std::string p) { problems.push_back(std::move(p)); }
  std::string joined() const {
    std::string s;
    for (const auto& p : problems) {
      s += p;
      s += '\n';
    }
    return s;
  }
};

inline std::string show_tuple(std::span<const Elt> args) {
  std::string s = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(args[i]);
  }
  return s + ")";
}

}  // namespace omalg
