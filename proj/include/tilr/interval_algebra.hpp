#pragma once

// Allen's interval algebra over closed integer intervals.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tilr/interval.hpp"

namespace tilr {

enum class BaseRelation : std::uint8_t {
  kBefore = 0,
  kAfter,
  kMeets,
  kMetBy,
  kOverlaps,
  kOverlappedBy,
  kStarts,
  kStartedBy,
  kDuring,
  kContains,
  kFinishes,
  kFinishedBy,
  kEqual,
};

inline constexpr int kNumBaseRelations = 13;

inline constexpr std::array<BaseRelation, kNumBaseRelations> kAllBaseRelations = {
    BaseRelation::kBefore,   BaseRelation::kAfter,        BaseRelation::kMeets,
    BaseRelation::kMetBy,    BaseRelation::kOverlaps,     BaseRelation::kOverlappedBy,
    BaseRelation::kStarts,   BaseRelation::kStartedBy,    BaseRelation::kDuring,
    BaseRelation::kContains, BaseRelation::kFinishes,     BaseRelation::kFinishedBy,
    BaseRelation::kEqual,
};

constexpr int index_of(BaseRelation r) { return static_cast<int>(r); }

/// Upper-case name used in rule files, e.g. "MET_BY".
std::string_view relation_name(BaseRelation r);
std::optional<BaseRelation> parse_relation(std::string_view name);

/// Classifies a pair of valid intervals. Point intervals are handled by the
/// same endpoint decision table; branch precedence is EQUAL, STARTS/STARTED_BY,
/// FINISHES/FINISHED_BY, MEETS/MET_BY, BEFORE/AFTER, DURING/CONTAINS,
/// OVERLAPS/OVERLAPPED_BY.
BaseRelation classify(const Interval& a, const Interval& b);

constexpr BaseRelation inverse(BaseRelation r) {
  switch (r) {
    case BaseRelation::kBefore: return BaseRelation::kAfter;
    case BaseRelation::kAfter: return BaseRelation::kBefore;
    case BaseRelation::kMeets: return BaseRelation::kMetBy;
    case BaseRelation::kMetBy: return BaseRelation::kMeets;
    case BaseRelation::kOverlaps: return BaseRelation::kOverlappedBy;
    case BaseRelation::kOverlappedBy: return BaseRelation::kOverlaps;
    case BaseRelation::kStarts: return BaseRelation::kStartedBy;
    case BaseRelation::kStartedBy: return BaseRelation::kStarts;
    case BaseRelation::kDuring: return BaseRelation::kContains;
    case BaseRelation::kContains: return BaseRelation::kDuring;
    case BaseRelation::kFinishes: return BaseRelation::kFinishedBy;
    case BaseRelation::kFinishedBy: return BaseRelation::kFinishes;
    case BaseRelation::kEqual: return BaseRelation::kEqual;
  }
  return r;
}

/// A subset of the 13 base relations. Empty means inconsistent, full means
/// unconstrained.
class RelationSet {
 public:
  static constexpr std::uint16_t kFullMask = (1u << kNumBaseRelations) - 1;

  constexpr RelationSet() = default;
  constexpr explicit RelationSet(std::uint16_t mask) : mask_(mask & kFullMask) {}
  constexpr RelationSet(BaseRelation r) : mask_(static_cast<std::uint16_t>(1u << index_of(r))) {}
  constexpr RelationSet(std::initializer_list<BaseRelation> rs) {
    for (BaseRelation r : rs) mask_ |= static_cast<std::uint16_t>(1u << index_of(r));
  }

  static constexpr RelationSet full() { return RelationSet(kFullMask); }
  static constexpr RelationSet empty_set() { return RelationSet(); }

  constexpr std::uint16_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr bool is_full() const { return mask_ == kFullMask; }
  constexpr bool contains(BaseRelation r) const { return (mask_ >> index_of(r)) & 1u; }
  constexpr int size() const { return __builtin_popcount(mask_); }
  constexpr bool subset_of(RelationSet other) const { return (mask_ & ~other.mask_) == 0; }

  std::vector<BaseRelation> members() const;

  /// "{BEFORE,MEETS}" in base-relation order.
  std::string to_string() const;
  static std::optional<RelationSet> parse(std::string_view text);

  friend constexpr bool operator==(RelationSet, RelationSet) = default;

 private:
  std::uint16_t mask_ = 0;
};

constexpr RelationSet intersect(RelationSet a, RelationSet b) {
  return RelationSet(static_cast<std::uint16_t>(a.mask() & b.mask()));
}
constexpr RelationSet unite(RelationSet a, RelationSet b) {
  return RelationSet(static_cast<std::uint16_t>(a.mask() | b.mask()));
}

RelationSet inverse_set(RelationSet s);

/// Composition of two base relations, read from the precomputed table.
RelationSet compose(BaseRelation r1, BaseRelation r2);
RelationSet compose_sets(RelationSet s1, RelationSet s2);

}  // namespace tilr
