#include "tilr/hypergraph.hpp"

#include <algorithm>

namespace tilr {
namespace {

void require_distinct(std::span<const std::string> names, const char* role) {
  if (names.empty()) throw GraphError(std::string("empty ") + role + " set");
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) throw GraphError(std::string("empty entity name in ") + role + " set");
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (names[i] == names[j]) {
        throw GraphError("duplicate " + std::string(role) + " entity '" + names[i] + "'");
      }
    }
  }
}

void require_interval(Interval t) {
  if (!t.valid()) {
    throw GraphError("interval start " + std::to_string(t.start) + " exceeds end " +
                     std::to_string(t.end));
  }
}

}  // namespace

EntityId TemporalHypergraph::intern_entity(std::string_view name) {
  const EntityId id = entities_.intern(name);
  if (head_index_.size() < entities_.size()) {
    head_index_.resize(entities_.size());
    tail_index_.resize(entities_.size());
  }
  return id;
}

PredicateId TemporalHypergraph::declare_predicate(std::string_view name,
                                                  std::optional<std::size_t> head_arity,
                                                  std::size_t tail_arity) {
  if (name.empty()) throw GraphError("empty predicate name");
  if (head_arity && *head_arity == 0) throw GraphError("head arity must be positive");
  if (tail_arity == 0) throw GraphError("tail arity must be positive");
  if (auto existing = predicates_.find(name)) {
    const PredicateInfo& info = predicate_info_[existing->index()];
    if (info.head_arity != head_arity || info.tail_arity != tail_arity) {
      throw GraphError("conflicting arity declaration for predicate '" + std::string(name) + "'");
    }
    return *existing;
  }
  const PredicateId id = predicates_.intern(name);
  predicate_info_.push_back({std::string(name), head_arity, tail_arity});
  predicate_index_.emplace_back();
  return id;
}

void TemporalHypergraph::check_arity(PredicateId p, std::size_t heads, std::size_t tails) {
  const PredicateInfo& info = predicate_info_[p.index()];
  if ((info.head_arity && *info.head_arity != heads) || info.tail_arity != tails) {
    throw GraphError("arity mismatch for predicate '" + info.name + "': got " +
                     std::to_string(heads) + " heads and " + std::to_string(tails) + " tails");
  }
}

EventId TemporalHypergraph::add_event(std::string_view predicate,
                                      std::span<const std::string> heads,
                                      std::span<const std::string> tails, Interval interval) {
  if (predicate.empty()) throw GraphError("empty predicate name");
  require_distinct(heads, "head");
  require_distinct(tails, "tail");
  require_interval(interval);

  PredicateId p;
  if (auto existing = predicates_.find(predicate)) {
    p = *existing;
    check_arity(p, heads.size(), tails.size());
  } else {
    const std::optional<std::size_t> head_arity =
        heads.size() > 1 ? std::nullopt : std::optional<std::size_t>(heads.size());
    p = declare_predicate(predicate, head_arity, tails.size());
  }

  std::vector<EntityId> head_ids;
  std::vector<EntityId> tail_ids;
  for (const auto& h : heads) head_ids.push_back(intern_entity(h));
  for (const auto& t : tails) tail_ids.push_back(intern_entity(t));
  return add_event_ids(p, std::move(head_ids), std::move(tail_ids), interval);
}

EventId TemporalHypergraph::add_event(std::string_view predicate,
                                      std::initializer_list<std::string_view> heads,
                                      std::initializer_list<std::string_view> tails,
                                      Interval interval) {
  const std::vector<std::string> h(heads.begin(), heads.end());
  const std::vector<std::string> t(tails.begin(), tails.end());
  return add_event(predicate, h, t, interval);
}

EventId TemporalHypergraph::add_event_ids(PredicateId predicate, std::vector<EntityId> heads,
                                          std::vector<EntityId> tails, Interval interval) {
  std::sort(heads.begin(), heads.end());
  std::sort(tails.begin(), tails.end());
  const EventId id(events_.size());
  for (EntityId h : heads) head_index_[h.index()].push_back(id);
  for (EntityId t : tails) tail_index_[t.index()].push_back(id);
  predicate_index_[predicate.index()].push_back(id);
  events_.push_back({id, predicate, std::move(heads), std::move(tails), interval});
  return id;
}

std::span<const EventId> TemporalHypergraph::head_events(EntityId x) const {
  if (!entities_.contains(x)) throw GraphError("unknown entity id " + std::to_string(x.value));
  return head_index_[x.index()];
}

std::span<const EventId> TemporalHypergraph::tail_events(EntityId x) const {
  if (!entities_.contains(x)) throw GraphError("unknown entity id " + std::to_string(x.value));
  return tail_index_[x.index()];
}

std::span<const EventId> TemporalHypergraph::predicate_events(PredicateId p) const {
  if (!predicates_.contains(p)) throw GraphError("unknown predicate id " + std::to_string(p.value));
  return predicate_index_[p.index()];
}

std::size_t TemporalHypergraph::out_degree(EntityId x) const { return head_events(x).size(); }

bool TemporalHypergraph::is_b_graph() const {
  return std::all_of(events_.begin(), events_.end(),
                     [](const Event& e) { return e.tails.size() == 1; });
}

std::vector<EventId> TemporalHypergraph::enabled_edges(const std::set<EntityId>& reached,
                                                       const std::set<EventId>& traversed) const {
  std::vector<EventId> out;
  for (EntityId x : reached) {
    if (!entities_.contains(x)) continue;
    for (EventId e : head_index_[x.index()]) {
      if (traversed.contains(e)) continue;
      const auto& heads = events_[e.index()].heads;
      // Visit each edge once, from its smallest head.
      if (heads.front() != x) continue;
      if (std::all_of(heads.begin(), heads.end(),
                      [&](EntityId h) { return reached.contains(h); })) {
        out.push_back(e);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Interval TemporalHypergraph::span() const {
  if (events_.empty()) return {0, 0};
  Interval out = events_.front().interval;
  for (const Event& e : events_) {
    out.start = std::min(out.start, e.interval.start);
    out.end = std::max(out.end, e.interval.end);
  }
  return out;
}

}  // namespace tilr
