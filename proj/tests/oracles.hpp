#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. None of them calls into the code they check.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "tilr/constraint_network.hpp"
#include "tilr/hypergraph.hpp"
#include "tilr/interval_algebra.hpp"
#include "tilr/query.hpp"
#include "tilr/rule.hpp"

namespace oracle {

using tilr::BaseRelation;
using tilr::Interval;

// Relation predicates straight from endpoint comparisons. Several may hold
// when a point interval is involved.
inline bool holds(BaseRelation r, const Interval& a, const Interval& b) {
  const auto as = a.start, ae = a.end, bs = b.start, be = b.end;
  switch (r) {
    case BaseRelation::kBefore: return ae < bs;
    case BaseRelation::kAfter: return be < as;
    case BaseRelation::kMeets: return ae == bs;
    case BaseRelation::kMetBy: return be == as;
    case BaseRelation::kOverlaps: return as < bs && bs < ae && ae < be;
    case BaseRelation::kOverlappedBy: return bs < as && as < be && be < ae;
    case BaseRelation::kStarts: return as == bs && ae < be;
    case BaseRelation::kStartedBy: return as == bs && be < ae;
    case BaseRelation::kDuring: return bs < as && ae < be;
    case BaseRelation::kContains: return as < bs && be < ae;
    case BaseRelation::kFinishes: return bs < as && ae == be;
    case BaseRelation::kFinishedBy: return as < bs && ae == be;
    case BaseRelation::kEqual: return as == bs && ae == be;
  }
  return false;
}

inline constexpr std::array<BaseRelation, 13> kPrecedence = {
    BaseRelation::kEqual,    BaseRelation::kStarts,   BaseRelation::kStartedBy,
    BaseRelation::kFinishes, BaseRelation::kFinishedBy, BaseRelation::kMeets,
    BaseRelation::kMetBy,    BaseRelation::kBefore,   BaseRelation::kAfter,
    BaseRelation::kDuring,   BaseRelation::kContains, BaseRelation::kOverlaps,
    BaseRelation::kOverlappedBy,
};

inline std::vector<BaseRelation> holding(const Interval& a, const Interval& b) {
  std::vector<BaseRelation> out;
  for (BaseRelation r : kPrecedence)
    if (holds(r, a, b)) out.push_back(r);
  return out;
}

/// First holding relation in precedence order.
inline std::optional<BaseRelation> relation(const Interval& a, const Interval& b) {
  for (BaseRelation r : kPrecedence)
    if (holds(r, a, b)) return r;
  return std::nullopt;
}

inline std::vector<Interval> all_intervals(tilr::Tick lo, tilr::Tick hi) {
  std::vector<Interval> out;
  for (auto s = lo; s <= hi; ++s)
    for (auto e = s; e <= hi; ++e) out.push_back({s, e});
  return out;
}

/// table[r1][r2] = mask of relation(A, C) over all A, B, C with
/// relation(A, B) = r1 and relation(B, C) = r2.
inline std::array<std::array<std::uint16_t, 13>, 13> composition_table(tilr::Tick lo, tilr::Tick hi) {
  std::array<std::array<std::uint16_t, 13>, 13> table{};
  const auto iv = all_intervals(lo, hi);
  const std::size_t n = iv.size();
  std::vector<int> rel(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rel[i * n + j] = static_cast<int>(*relation(iv[i], iv[j]));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        table[rel[a * n + b]][rel[b * n + c]] |= static_cast<std::uint16_t>(1u << rel[a * n + c]);
      }
  return table;
}

/// Whether integer intervals with endpoints in [lo, hi] realize every cell
/// of the network (each cell: allowed relation mask for i < j).
inline bool realizable(std::size_t nodes, const std::function<std::uint16_t(std::size_t, std::size_t)>& cell,
                       tilr::Tick lo, tilr::Tick hi) {
  const auto iv = all_intervals(lo, hi);
  std::vector<Interval> chosen;
  std::function<bool()> extend = [&]() -> bool {
    const std::size_t k = chosen.size();
    if (k == nodes) return true;
    for (const Interval& cand : iv) {
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        ok = (cell(i, k) >> static_cast<int>(*relation(chosen[i], cand))) & 1u;
      }
      if (!ok) continue;
      chosen.push_back(cand);
      if (extend()) return true;
      chosen.pop_back();
    }
    return false;
  };
  return extend();
}

/// Every injective choice of events for the body atoms, then every
/// permutation-based variable binding. True iff some choice is consistent.
inline bool grounding_exists(const tilr::TemporalRule& rule, const tilr::TemporalHypergraph& g,
                             const tilr::Query& q) {
  const std::size_t n = rule.body.size();
  const std::size_t nv = rule.num_vars();
  std::vector<std::size_t> pick(n);

  // Binds vars to a permutation of entities; returns all extensions.
  auto bind_all = [](const std::vector<tilr::VarId>& vars, std::vector<tilr::EntityId> ents,
                     const std::vector<std::optional<tilr::EntityId>>& sigma) {
    std::vector<std::vector<std::optional<tilr::EntityId>>> out;
    if (vars.size() != ents.size()) return out;
    std::sort(ents.begin(), ents.end());
    do {
      auto s = sigma;
      bool ok = true;
      for (std::size_t i = 0; i < vars.size() && ok; ++i) {
        if (s[vars[i]] && *s[vars[i]] != ents[i]) ok = false;
        s[vars[i]] = ents[i];
      }
      if (ok) out.push_back(std::move(s));
    } while (std::next_permutation(ents.begin(), ents.end()));
    return out;
  };

  std::vector<std::vector<std::optional<tilr::EntityId>>> starts{std::vector<std::optional<tilr::EntityId>>(nv)};
  const bool graph_level = q.heads.empty() && q.tails.empty();
  if (!graph_level && !(rule.head.head_vars.empty() && rule.head.tail_vars.empty())) {
    std::vector<std::vector<std::optional<tilr::EntityId>>> next;
    for (auto& s : bind_all(rule.head.head_vars, q.heads, starts[0]))
      for (auto& t : bind_all(rule.head.tail_vars, q.tails, s)) next.push_back(t);
    starts = std::move(next);
  }

  std::function<bool(std::size_t)> choose = [&](std::size_t i) -> bool {
    if (i < n) {
      for (std::size_t e = 0; e < g.num_events(); ++e) {
        if (std::find(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(i), e) !=
            pick.begin() + static_cast<std::ptrdiff_t>(i)) {
          continue;
        }
        if (q.event && q.event->index() == e) continue;
        pick[i] = e;
        if (choose(i + 1)) return true;
      }
      return false;
    }
    for (std::size_t a = 0; a < n; ++a) {
      const tilr::Event& ev = g.event(tilr::EventId(pick[a]));
      if (g.predicate_name(ev.predicate) != rule.body[a].predicate) return false;
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const auto r = *relation(g.event(tilr::EventId(pick[a])).interval, g.event(tilr::EventId(pick[b])).interval);
        if (!rule.time_net.at(a, b).contains(r)) return false;
      }
    auto frontier = starts;
    for (std::size_t a = 0; a < n && !frontier.empty(); ++a) {
      const tilr::Event& ev = g.event(tilr::EventId(pick[a]));
      std::vector<std::vector<std::optional<tilr::EntityId>>> next;
      for (auto& s : frontier)
        for (auto& h : bind_all(rule.body[a].head_vars, ev.heads, s))
          for (auto& t : bind_all(rule.body[a].tail_vars, ev.tails, h)) next.push_back(std::move(t));
      frontier = std::move(next);
    }
    return !frontier.empty();
  };
  return choose(0);
}

/// Random B-graph: `nodes` entities n0.., `edges` events with 1-3 distinct
/// heads and one tail not among them.
inline tilr::TemporalHypergraph random_b_graph(std::mt19937_64& rng, std::size_t nodes, std::size_t edges) {
  tilr::TemporalHypergraph g;
  std::uniform_int_distribution<std::size_t> node(0, nodes - 1);
  std::uniform_int_distribution<std::size_t> arity(1, std::min<std::size_t>(3, nodes - 1));
  std::uniform_int_distribution<int> time(0, 20);
  for (std::size_t i = 0; i < nodes; ++i) g.intern_entity("n" + std::to_string(i));
  for (std::size_t e = 0; e < edges; ++e) {
    const std::size_t k = arity(rng);
    std::set<std::size_t> heads;
    while (heads.size() < k) heads.insert(node(rng));
    std::size_t tail = node(rng);
    while (heads.contains(tail)) tail = node(rng);
    std::vector<std::string> hn, tn{"n" + std::to_string(tail)};
    for (auto h : heads) hn.push_back("n" + std::to_string(h));
    int s = time(rng), t = time(rng);
    if (s > t) std::swap(s, t);
    g.add_event("E" + std::to_string(k), hn, tn, {s, t});
  }
  return g;
}

}  // namespace oracle
