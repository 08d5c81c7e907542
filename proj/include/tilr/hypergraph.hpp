#pragma once

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tilr/ids.hpp"
#include "tilr/interval.hpp"

namespace tilr {

/// Raised for invariant violations while building or querying a graph.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Head/tail arity of a predicate. A variadic head accepts any non-zero count.
struct PredicateInfo {
  std::string name;
  std::optional<std::size_t> head_arity;  // nullopt: variadic
  std::size_t tail_arity = 1;
};

struct Event {
  EventId id;
  PredicateId predicate;
  std::vector<EntityId> heads;  // sorted, distinct
  std::vector<EntityId> tails;  // sorted, distinct
  Interval interval;

  /// Class labels and unary relations: heads == tails == {x}.
  bool is_unary() const { return heads.size() == 1 && heads == tails; }
};

/// Bidirectional string <-> dense id table.
template <typename Id>
class SymbolTable {
 public:
  Id intern(std::string_view name) {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    const Id id(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }
  std::optional<Id> find(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    return std::nullopt;
  }
  const std::string& name(Id id) const { return names_.at(id.index()); }
  std::size_t size() const { return names_.size(); }
  bool contains(Id id) const { return id.index() < names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Id> index_;
};

/// Events connecting head entity sets to tail entity sets over time intervals.
///
/// Entities and predicates are interned on first use. Event ids follow
/// insertion order. Head/tail/predicate indices are kept in ascending event id
/// order. The graph is read-only once built; const member functions are safe
/// to call concurrently.
class TemporalHypergraph {
 public:
  EventId add_event(std::string_view predicate, std::span<const std::string> heads,
                    std::span<const std::string> tails, Interval interval);
  EventId add_event(std::string_view predicate, std::initializer_list<std::string_view> heads,
                    std::initializer_list<std::string_view> tails, Interval interval);

  EntityId intern_entity(std::string_view name);

  /// Declares arities up front; otherwise the first event fixes them (a
  /// predicate first seen with several heads is treated as variadic).
  PredicateId declare_predicate(std::string_view name, std::optional<std::size_t> head_arity,
                                std::size_t tail_arity);

  std::optional<EntityId> find_entity(std::string_view name) const { return entities_.find(name); }
  std::optional<PredicateId> find_predicate(std::string_view name) const {
    return predicates_.find(name);
  }
  const std::string& entity_name(EntityId id) const { return entities_.name(id); }
  const std::string& predicate_name(PredicateId id) const { return predicates_.name(id); }
  const PredicateInfo& predicate_info(PredicateId id) const { return predicate_info_.at(id.index()); }

  std::size_t num_entities() const { return entities_.size(); }
  std::size_t num_predicates() const { return predicates_.size(); }
  std::size_t num_events() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  const Event& event(EventId id) const { return events_.at(id.index()); }
  std::span<const Event> events() const { return events_; }

  std::span<const EventId> head_events(EntityId x) const;
  std::span<const EventId> tail_events(EntityId x) const;
  std::span<const EventId> predicate_events(PredicateId p) const;

  /// Number of distinct events with x in the head set.
  std::size_t out_degree(EntityId x) const;

  /// True iff every event has exactly one tail.
  bool is_b_graph() const;

  /// Events not yet traversed whose heads are all reached, ascending by id.
  std::vector<EventId> enabled_edges(const std::set<EntityId>& reached,
                                     const std::set<EventId>& traversed) const;

  /// [earliest start, latest end] over all events; [0, 0] when empty.
  Interval span() const;

  const std::optional<std::string>& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

 private:
  EventId add_event_ids(PredicateId predicate, std::vector<EntityId> heads,
                        std::vector<EntityId> tails, Interval interval);
  void check_arity(PredicateId p, std::size_t heads, std::size_t tails);

  SymbolTable<EntityId> entities_;
  SymbolTable<PredicateId> predicates_;
  std::vector<PredicateInfo> predicate_info_;
  std::vector<Event> events_;
  std::vector<std::vector<EventId>> head_index_;
  std::vector<std::vector<EventId>> tail_index_;
  std::vector<std::vector<EventId>> predicate_index_;
  std::optional<std::string> label_;
};

}  // namespace tilr
