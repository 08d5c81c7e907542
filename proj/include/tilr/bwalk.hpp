#pragma once

// Multi-start random B-walks.
//
// A walk starts from a set of entities, each holding mass 1, and repeatedly
// traverses one enabled B-edge: an untraversed edge whose heads have all been
// reached. Edge e carries weight min over heads h of mass(h) / out_degree(h);
// the sampler normalizes these weights over the enabled set, while the
// newly reached tail records the unnormalized weight as its arrival mass.
//
// Each start seeds its own path. When an edge joins entities reached from
// different paths, their temporal networks are merged through the joining
// event and resolved with path consistency.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "tilr/constraint_network.hpp"
#include "tilr/hypergraph.hpp"
#include "tilr/query.hpp"

namespace tilr {

class WalkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WalkRng = std::mt19937_64;

struct WalkParams {
  std::size_t max_steps = 4;
  std::size_t num_walks = 100;
  std::uint64_t seed = 0;
  /// Used when the query itself names no target.
  std::optional<EntityId> target;
  bool record_temporal = true;
  /// Graph-level queries start from the heads of this many earliest events.
  std::size_t num_start_events = 3;
};

enum class StepResult { kMoved, kDeadEnd, kInconsistent };

class WalkState;
WalkState init_walk(const TemporalHypergraph& graph, const std::vector<EntityId>& starts,
                    bool record_temporal = true);
/// Samples one enabled edge proportionally to its weight and traverses it.
StepResult step(const TemporalHypergraph& graph, WalkState& state, WalkRng& rng);
std::vector<EventId> enabled_edges(const TemporalHypergraph& graph, const WalkState& state);

class WalkState {
 public:
  /// Entities in arrival order, starts first.
  std::vector<EntityId> reached;
  std::unordered_map<EntityId, double> arrival_mass;
  std::vector<EventId> trace;
  std::size_t step = 0;
  /// Network over trace events in trace order; present when recording.
  std::optional<IANetwork> time_net;

  bool is_reached(EntityId x) const { return x.index() < reached_mask_.size() && reached_mask_[x.index()]; }
  bool is_traversed(EventId e) const {
    return e.index() < traversed_mask_.size() && traversed_mask_[e.index()];
  }
  /// Marks an event as unusable without adding it to the trace.
  void exclude(EventId e) { traversed_mask_.at(e.index()) = 1; }

 private:
  friend WalkState init_walk(const TemporalHypergraph&, const std::vector<EntityId>&, bool);
  friend StepResult step(const TemporalHypergraph&, WalkState&, WalkRng&);
  friend std::vector<EventId> enabled_edges(const TemporalHypergraph&, const WalkState&);

  std::size_t path_root(std::size_t p) const;
  void rebuild_time_net();

  bool record_temporal_ = true;
  std::vector<char> reached_mask_;
  std::vector<char> traversed_mask_;
  std::vector<std::size_t> entity_path_;  // npos when unreached
  std::vector<std::size_t> path_parent_;
  std::vector<IANetwork> path_nets_;
};

/// Unnormalized transition weight of an enabled edge.
double edge_weight(const TemporalHypergraph& graph, const WalkState& state, EventId e);

/// Deterministic reach score of `target` within `horizon` breadth-order
/// expansions: the sum of weights of edges into the target as they become
/// enabled. A score, not a normalized probability.
double reach_probability(const TemporalHypergraph& graph, const std::vector<EntityId>& starts,
                         EntityId target, std::size_t horizon);

/// Heads of the k earliest-starting events (ties by event id), deduplicated.
std::vector<EntityId> default_starts(const TemporalHypergraph& graph, std::size_t k);

struct WalkTrace {
  std::vector<EventId> trace;
  std::optional<IANetwork> time_net;
  friend bool operator==(const WalkTrace&, const WalkTrace&) = default;
};

struct WalkDiagnostics {
  std::size_t walks_run = 0;
  std::size_t dead_ended = 0;
  std::size_t inconsistent = 0;
  std::size_t missed_target = 0;
  std::size_t kept = 0;

  WalkDiagnostics& operator+=(const WalkDiagnostics& o);
};

struct WalkResult {
  std::vector<WalkTrace> traces;  // walk index order
  WalkDiagnostics diagnostics;
};

/// Seed for walk `index` of a run seeded with `seed`.
std::uint64_t walk_seed(std::uint64_t seed, std::uint64_t index);

/// Runs params.num_walks independent walks for the query.
///
/// With a target (the query's single tail, else params.target) a walk stops on
/// reaching it and is kept; otherwise it is discarded after max_steps. Without
/// a target every walk that moved at least once is kept when it reaches
/// max_steps or runs out of enabled edges.
WalkResult mrbw(const TemporalHypergraph& graph, const Query& query, const WalkParams& params);

}  // namespace tilr
