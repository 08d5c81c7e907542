#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tilr/ids.hpp"

namespace tilr {

/// A query against one graph of a corpus.
///
/// Graph-level queries (classification) bind no entities; event queries bind
/// the rule head variables to the event's heads and tail. `event` names the
/// query's own event, which walks and groundings never use.
struct Query {
  std::size_t graph = 0;
  std::string predicate;
  std::vector<EntityId> heads;
  std::vector<EntityId> tails;
  std::optional<EventId> event;

  bool is_graph_query() const { return heads.empty() && tails.empty(); }

  friend bool operator==(const Query&, const Query&) = default;
};

}  // namespace tilr
