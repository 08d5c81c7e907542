#include "tilr/interval_algebra.hpp"

#include <array>

#include "compose_table.inc"

namespace tilr {
namespace {

constexpr std::array<std::string_view, kNumBaseRelations> kNames = {
    "BEFORE",   "AFTER",    "MEETS",       "MET_BY",   "OVERLAPS",
    "OVERLAPPED_BY", "STARTS", "STARTED_BY", "DURING", "CONTAINS",
    "FINISHES", "FINISHED_BY", "EQUAL",
};

}  // namespace

std::string_view relation_name(BaseRelation r) { return kNames[index_of(r)]; }

std::optional<BaseRelation> parse_relation(std::string_view name) {
  for (BaseRelation r : kAllBaseRelations) {
    if (kNames[index_of(r)] == name) return r;
  }
  return std::nullopt;
}

BaseRelation classify(const Interval& a, const Interval& b) {
  if (a.start == b.start && a.end == b.end) return BaseRelation::kEqual;
  if (a.start == b.start) return a.end < b.end ? BaseRelation::kStarts : BaseRelation::kStartedBy;
  if (a.end == b.end) return a.start > b.start ? BaseRelation::kFinishes : BaseRelation::kFinishedBy;
  if (a.end == b.start) return BaseRelation::kMeets;
  if (b.end == a.start) return BaseRelation::kMetBy;
  if (a.end < b.start) return BaseRelation::kBefore;
  if (b.end < a.start) return BaseRelation::kAfter;
  if (a.start > b.start && a.end < b.end) return BaseRelation::kDuring;
  if (a.start < b.start && a.end > b.end) return BaseRelation::kContains;
  return a.start < b.start ? BaseRelation::kOverlaps : BaseRelation::kOverlappedBy;
}

std::vector<BaseRelation> RelationSet::members() const {
  std::vector<BaseRelation> out;
  for (BaseRelation r : kAllBaseRelations) {
    if (contains(r)) out.push_back(r);
  }
  return out;
}

std::string RelationSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (BaseRelation r : kAllBaseRelations) {
    if (!contains(r)) continue;
    if (!first) out += ',';
    out += relation_name(r);
    first = false;
  }
  out += '}';
  return out;
}

std::optional<RelationSet> RelationSet::parse(std::string_view text) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') return std::nullopt;
  text = text.substr(1, text.size() - 2);
  RelationSet out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = text.substr(0, comma);
    const auto rel = parse_relation(token);
    if (!rel) return std::nullopt;
    out = unite(out, *rel);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) return std::nullopt;
  }
  return out;
}

RelationSet inverse_set(RelationSet s) {
  RelationSet out;
  for (BaseRelation r : kAllBaseRelations) {
    if (s.contains(r)) out = unite(out, inverse(r));
  }
  return out;
}

RelationSet compose(BaseRelation r1, BaseRelation r2) {
  return RelationSet(detail::kComposeTable[index_of(r1)][index_of(r2)]);
}

RelationSet compose_sets(RelationSet s1, RelationSet s2) {
  std::uint16_t out = 0;
  for (BaseRelation a : kAllBaseRelations) {
    if (!s1.contains(a)) continue;
    for (BaseRelation b : kAllBaseRelations) {
      if (s2.contains(b)) out |= detail::kComposeTable[index_of(a)][index_of(b)];
      if (out == RelationSet::kFullMask) return RelationSet::full();
    }
  }
  return RelationSet(out);
}

}  // namespace tilr
