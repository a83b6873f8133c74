#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fodm/error.hpp"
#include "fodm/scaling.hpp"

namespace fodm {

/// A set of scale-attribute indices over a fixed universe size.
class AttrSet {
 public:
  AttrSet() = default;
  explicit AttrSet(std::size_t universe)
      : universe_(universe), bits_((universe + 63) / 64, 0) {}

  std::size_t universe_size() const { return universe_; }
  bool test(std::size_t i) const { return (bits_[i / 64] >> (i % 64)) & 1u; }
  void set(std::size_t i) { bits_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { bits_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto b : bits_) c += static_cast<std::size_t>(__builtin_popcountll(b));
    return c;
  }
  bool empty() const {
    for (auto b : bits_)
      if (b) return false;
    return true;
  }
  bool is_subset_of(const AttrSet& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] & ~other.bits_[i]) return false;
    return true;
  }
  bool is_proper_subset_of(const AttrSet& other) const {
    return is_subset_of(other) && !(*this == other);
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < universe_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  bool operator==(const AttrSet& other) const = default;

  // set-lexicographic: at the first index where membership differs, the set
  // containing it comes first
  bool operator<(const AttrSet& other) const {
    for (std::size_t i = 0; i < universe_; ++i) {
      const bool a = test(i), b = other.test(i);
      if (a != b) return a;
    }
    return false;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// A closed intent paired with its fuzzy extent. extent[o] is the min of
/// the object's cells over the intent; 0 marks objects outside the support.
struct FuzzyConcept {
  AttrSet intent;
  std::vector<double> extent;

  std::size_t support_size() const {
    std::size_t c = 0;
    for (double d : extent) c += d > 0.0 ? 1 : 0;
    return c;
  }
};

struct ConceptLattice {
  std::vector<FuzzyConcept> concepts;        // lectic order: front = top, back = bottom
  std::vector<std::pair<int, int>> covers;   // (parent, child) concept indices
  int top = 0;
  int bottom = 0;
};

/// The lattice with extents dropped: intent-only nodes, same covers.
struct FuzzyClusterLattice {
  std::vector<AttrSet> nodes;
  std::vector<std::pair<int, int>> covers;
};

/// Galois closure of an attribute set under the support (cell-present)
/// relation: attributes shared by every object that has all of `intent`.
inline AttrSet closure(const FuzzyFormalContext& ctx, const AttrSet& intent) {
  const std::size_t m = ctx.scale_attributes.size();
  const std::size_t n = ctx.object_ids.size();
  AttrSet closed(m);
  for (std::size_t a = 0; a < m; ++a) closed.set(a);
  bool any_object = false;
  for (std::size_t o = 0; o < n; ++o) {
    bool supports = true;
    for (std::size_t a = 0; a < m && supports; ++a)
      if (intent.test(a) && !ctx.at(o, a)) supports = false;
    if (!supports) continue;
    any_object = true;
    for (std::size_t a = 0; a < m; ++a)
      if (closed.test(a) && !ctx.at(o, a)) closed.reset(a);
  }
  if (!any_object) {
    // empty support: the closure is the full attribute set
    AttrSet full(m);
    for (std::size_t a = 0; a < m; ++a) full.set(a);
    return full;
  }
  return closed;
}

/// Fuzzy extent of an intent: an object belongs iff every intent cell is
/// present, with degree min over those cells; the empty intent yields every
/// object at degree 1.
inline std::vector<double> fuzzy_extent(const FuzzyFormalContext& ctx, const AttrSet& intent) {
  const std::size_t n = ctx.object_ids.size();
  std::vector<double> extent(n, 0.0);
  for (std::size_t o = 0; o < n; ++o) {
    double degree = 1.0;
    bool in = true;
    for (std::size_t a = 0; a < intent.universe_size() && in; ++a) {
      if (!intent.test(a)) continue;
      const auto& cell = ctx.at(o, a);
      if (!cell)
        in = false;
      else
        degree = std::min(degree, *cell);
    }
    if (in) extent[o] = degree;
  }
  return extent;
}

/// fuzzy_extent with the intent given as cluster ids.
inline std::vector<double> fuzzy_extent(const FuzzyFormalContext& ctx,
                                        const std::vector<std::string>& cluster_ids) {
  AttrSet intent(ctx.scale_attributes.size());
  for (const auto& id : cluster_ids) {
    bool found = false;
    for (std::size_t a = 0; a < ctx.scale_attributes.size(); ++a)
      if (ctx.scale_attributes[a].cluster_id == id) {
        intent.set(a);
        found = true;
      }
    if (!found) throw ValidationError("unknown scale attribute id: " + id);
  }
  return fuzzy_extent(ctx, intent);
}

/// Similarity of two fuzzy object sets: sigma-count of the min over the
/// sigma-count of the max. Two empty sets are identical, hence 1.
inline double similarity(const std::vector<double>& e1, const std::vector<double>& e2) {
  if (e1.size() != e2.size()) throw InternalError("similarity over different object universes");
  double num = 0.0, den = 0.0;
  for (std::size_t o = 0; o < e1.size(); ++o) {
    num += std::min(e1[o], e2[o]);
    den += std::max(e1[o], e2[o]);
  }
  if (den == 0.0) return 1.0;
  return num / den;
}

namespace detail {

// Lectically next closed set after A, or nullopt when A is the last (the
// full attribute set). Ganter's NextClosure step.
inline std::optional<AttrSet> next_closure(const FuzzyFormalContext& ctx, AttrSet a) {
  const std::size_t m = ctx.scale_attributes.size();
  for (std::size_t ii = m; ii-- > 0;) {
    if (a.test(ii)) {
      a.reset(ii);
      continue;
    }
    AttrSet candidate = a;
    candidate.set(ii);
    AttrSet closed = closure(ctx, candidate);
    bool introduces_smaller = false;
    for (std::size_t j = 0; j < ii && !introduces_smaller; ++j)
      if (closed.test(j) && !a.test(j)) introduces_smaller = true;
    if (!introduces_smaller) return closed;
  }
  return std::nullopt;
}

inline std::vector<std::pair<int, int>> transitive_reduction(const std::vector<AttrSet>& intents) {
  std::vector<std::pair<int, int>> covers;
  const int c = static_cast<int>(intents.size());
  for (int parent = 0; parent < c; ++parent) {
    for (int child = 0; child < c; ++child) {
      if (parent == child || !intents[parent].is_proper_subset_of(intents[child])) continue;
      bool direct = true;
      for (int mid = 0; mid < c && direct; ++mid) {
        if (mid == parent || mid == child) continue;
        if (intents[parent].is_proper_subset_of(intents[mid]) &&
            intents[mid].is_proper_subset_of(intents[child]))
          direct = false;
      }
      if (direct) covers.emplace_back(parent, child);
    }
  }
  std::sort(covers.begin(), covers.end());
  return covers;
}

}  // namespace detail

/// Enumerates every concept of the context in lectic order (NextClosure),
/// attaches fuzzy extents, and computes the cover relation.
inline ConceptLattice enumerate_concepts(const FuzzyFormalContext& ctx) {
  ConceptLattice lattice;
  AttrSet current = closure(ctx, AttrSet(ctx.scale_attributes.size()));
  std::vector<AttrSet> intents{current};
  while (auto next = detail::next_closure(ctx, current)) {
    current = *next;
    intents.push_back(current);
  }

  const std::size_t dim = std::min(ctx.object_ids.size(), ctx.scale_attributes.size());
  if (dim < 63 && intents.size() > (std::size_t{1} << dim))
    throw InternalError("concept count exceeds the 2^min(|G|,|M|) bound");

  lattice.concepts.reserve(intents.size());
  for (const AttrSet& intent : intents)
    lattice.concepts.push_back({intent, fuzzy_extent(ctx, intent)});
  lattice.covers = detail::transitive_reduction(intents);
  lattice.top = 0;
  lattice.bottom = static_cast<int>(intents.size()) - 1;
  return lattice;
}

/// Drops extents, keeping node order and covers.
inline FuzzyClusterLattice to_fcl(const ConceptLattice& lattice) {
  FuzzyClusterLattice fcl;
  fcl.nodes.reserve(lattice.concepts.size());
  for (const auto& c : lattice.concepts) fcl.nodes.push_back(c.intent);
  fcl.covers = lattice.covers;
  return fcl;
}

/// Exhaustive ground truth: the closure of every attribute subset,
/// deduplicated. Guarded because it enumerates 2^m subsets.
inline std::set<AttrSet> brute_force_concepts(const FuzzyFormalContext& ctx) {
  const std::size_t m = ctx.scale_attributes.size();
  if (m > 20) throw ValidationError("context too large for the exhaustive oracle");
  const std::size_t n = ctx.object_ids.size();
  std::set<AttrSet> intents;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    // direct double derivation, kept free of the NextClosure helpers
    std::vector<std::size_t> support;
    for (std::size_t o = 0; o < n; ++o) {
      bool has_all = true;
      for (std::size_t a = 0; a < m && has_all; ++a)
        if ((mask >> a) & 1u)
          if (!ctx.at(o, a)) has_all = false;
      if (has_all) support.push_back(o);
    }
    AttrSet closed(m);
    if (support.empty()) {
      for (std::size_t a = 0; a < m; ++a) closed.set(a);
    } else {
      for (std::size_t a = 0; a < m; ++a) {
        bool common = true;
        for (std::size_t o : support)
          if (!ctx.at(o, a)) {
            common = false;
            break;
          }
        if (common) closed.set(a);
      }
    }
    intents.insert(closed);
  }
  return intents;
}

}  // namespace fodm
