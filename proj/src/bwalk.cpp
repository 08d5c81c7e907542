#include "tilr/bwalk.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace tilr {
namespace {

constexpr std::size_t kNoPath = std::numeric_limits<std::size_t>::max();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void require_known(const TemporalHypergraph& graph, EntityId x) {
  if (x.index() >= graph.num_entities()) {
    throw WalkError("unknown start entity id " + std::to_string(x.value));
  }
}

}  // namespace

std::uint64_t walk_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL));
}

WalkDiagnostics& WalkDiagnostics::operator+=(const WalkDiagnostics& o) {
  walks_run += o.walks_run;
  dead_ended += o.dead_ended;
  inconsistent += o.inconsistent;
  missed_target += o.missed_target;
  kept += o.kept;
  return *this;
}

std::size_t WalkState::path_root(std::size_t p) const {
  while (path_parent_[p] != p) p = path_parent_[p];
  return p;
}

void WalkState::rebuild_time_net() {
  std::vector<std::uint32_t> keys;
  keys.reserve(trace.size());
  for (EventId e : trace) keys.push_back(e.value);
  IANetwork net(NodeKind::kEvent, keys);

  // Each trace event belongs to the path that owns its network node.
  std::vector<std::size_t> owner(trace.size(), kNoPath);
  std::vector<std::size_t> local(trace.size(), 0);
  for (std::size_t p = 0; p < path_nets_.size(); ++p) {
    if (path_root(p) != p) continue;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const std::size_t at = path_nets_[p].find(keys[i]);
      if (at < path_nets_[p].size()) {
        owner[i] = p;
        local[i] = at;
      }
    }
  }
  for (std::size_t i = 0; i < trace.size(); ++i)
    for (std::size_t j = i + 1; j < trace.size(); ++j) {
      if (owner[i] != kNoPath && owner[i] == owner[j]) {
        net.set(i, j, path_nets_[owner[i]].at(local[i], local[j]));
      }
    }
  time_net = std::move(net);
}

WalkState init_walk(const TemporalHypergraph& graph, const std::vector<EntityId>& starts,
                    bool record_temporal) {
  if (starts.empty()) throw WalkError("walk needs at least one start entity");
  if (!graph.is_b_graph()) throw WalkError("random B-walks require a B-graph");

  WalkState state;
  state.record_temporal_ = record_temporal;
  state.reached_mask_.assign(graph.num_entities(), 0);
  state.traversed_mask_.assign(graph.num_events(), 0);
  state.entity_path_.assign(graph.num_entities(), kNoPath);
  for (EntityId s : starts) {
    require_known(graph, s);
    if (state.reached_mask_[s.index()]) continue;
    state.reached_mask_[s.index()] = 1;
    state.reached.push_back(s);
    state.arrival_mass[s] = 1.0;
    state.entity_path_[s.index()] = state.path_parent_.size();
    state.path_parent_.push_back(state.path_parent_.size());
    state.path_nets_.emplace_back(NodeKind::kEvent, std::vector<std::uint32_t>{});
  }
  if (record_temporal) state.time_net = IANetwork(NodeKind::kEvent, {});
  return state;
}

std::vector<EventId> enabled_edges(const TemporalHypergraph& graph, const WalkState& state) {
  std::vector<EventId> out;
  for (EntityId x : state.reached) {
    for (EventId e : graph.head_events(x)) {
      if (state.is_traversed(e)) continue;
      const auto& heads = graph.event(e).heads;
      if (heads.front() != x) continue;
      if (std::all_of(heads.begin(), heads.end(), [&](EntityId h) { return state.is_reached(h); })) {
        out.push_back(e);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double edge_weight(const TemporalHypergraph& graph, const WalkState& state, EventId e) {
  if (e.index() >= graph.num_events()) throw WalkError("unknown event id");
  const Event& ev = graph.event(e);
  if (state.is_traversed(e)) throw WalkError("edge already traversed");
  double weight = std::numeric_limits<double>::infinity();
  for (EntityId h : ev.heads) {
    if (!state.is_reached(h)) throw WalkError("edge is not enabled: head not reached");
    const double mass = state.arrival_mass.at(h);
    weight = std::min(weight, mass / static_cast<double>(graph.out_degree(h)));
  }
  return weight;
}

StepResult step(const TemporalHypergraph& graph, WalkState& state, WalkRng& rng) {
  const std::vector<EventId> enabled = enabled_edges(graph, state);
  if (enabled.empty()) return StepResult::kDeadEnd;

  std::vector<double> cumulative;
  cumulative.reserve(enabled.size());
  double total = 0.0;
  for (EventId e : enabled) {
    total += edge_weight(graph, state, e);
    cumulative.push_back(total);
  }
  std::uniform_real_distribution<double> pick(0.0, total);
  const double u = pick(rng);
  const std::size_t chosen = std::min<std::size_t>(
      static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                               cumulative.begin()),
      enabled.size() - 1);
  const EventId e = enabled[chosen];
  const Event& ev = graph.event(e);
  const EntityId tail = ev.tails.front();
  const double weight = edge_weight(graph, state, e);

  std::vector<std::size_t> roots;
  for (EntityId h : ev.heads) roots.push_back(state.path_root(state.entity_path_[h.index()]));
  if (state.is_reached(tail)) roots.push_back(state.path_root(state.entity_path_[tail.index()]));
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  if (state.record_temporal_) {
    auto extend = [&](std::size_t root) {
      IANetwork net = state.path_nets_[root];
      const std::size_t at = net.add_node(e.value);
      for (std::size_t k = 0; k < at; ++k) {
        net.set(k, at, classify(graph.event(EventId(net.key(k))).interval, ev.interval));
      }
      return net;
    };
    IANetwork joined = extend(roots.front());
    if (roots.size() == 1) {
      ResolveResult r = resolve_time(std::move(joined));
      if (!r.consistent) return StepResult::kInconsistent;
      joined = std::move(r.refined);
    } else {
      const std::uint32_t shared[] = {e.value};
      for (std::size_t i = 1; i < roots.size(); ++i) {
        ResolveResult r = merge_paths(joined, extend(roots[i]), shared);
        if (!r.consistent) return StepResult::kInconsistent;
        joined = std::move(r.refined);
      }
    }
    state.path_nets_[roots.front()] = std::move(joined);
  }
  for (std::size_t i = 1; i < roots.size(); ++i) state.path_parent_[roots[i]] = roots.front();

  state.traversed_mask_[e.index()] = 1;
  state.trace.push_back(e);
  if (!state.is_reached(tail)) {
    state.reached_mask_[tail.index()] = 1;
    state.reached.push_back(tail);
    state.arrival_mass[tail] = weight;
    state.entity_path_[tail.index()] = roots.front();
  }
  ++state.step;
  if (state.record_temporal_) state.rebuild_time_net();
  return StepResult::kMoved;
}

double reach_probability(const TemporalHypergraph& graph, const std::vector<EntityId>& starts,
                         EntityId target, std::size_t horizon) {
  if (horizon == 0) throw WalkError("reach horizon must be at least 1");
  std::vector<double> mass(graph.num_entities(), 0.0);
  std::vector<char> reached(graph.num_entities(), 0);
  std::vector<char> used(graph.num_events(), 0);
  std::vector<EntityId> frontier;
  for (EntityId s : starts) {
    require_known(graph, s);
    if (reached[s.index()]) continue;
    reached[s.index()] = 1;
    mass[s.index()] = 1.0;
    frontier.push_back(s);
  }

  double score = 0.0;
  std::vector<EntityId> all_reached = frontier;
  for (std::size_t t = 0; t < horizon; ++t) {
    std::map<EntityId, double> incoming;
    bool any = false;
    for (EntityId x : all_reached) {
      for (EventId e : graph.head_events(x)) {
        const Event& ev = graph.event(e);
        if (used[e.index()] || ev.heads.front() != x) continue;
        if (!std::all_of(ev.heads.begin(), ev.heads.end(),
                         [&](EntityId h) { return reached[h.index()] != 0; })) {
          continue;
        }
        double w = std::numeric_limits<double>::infinity();
        for (EntityId h : ev.heads) {
          w = std::min(w, mass[h.index()] / static_cast<double>(graph.out_degree(h)));
        }
        used[e.index()] = 1;
        any = true;
        for (EntityId tl : ev.tails) {
          if (tl == target) score += w;
          if (!reached[tl.index()]) incoming[tl] += w;
        }
      }
    }
    if (!any) break;
    for (const auto& [x, m] : incoming) {
      reached[x.index()] = 1;
      mass[x.index()] = m;
      all_reached.push_back(x);
    }
  }
  return score;
}

std::vector<EntityId> default_starts(const TemporalHypergraph& graph, std::size_t k) {
  std::vector<EventId> order;
  for (const Event& e : graph.events()) order.push_back(e.id);
  std::stable_sort(order.begin(), order.end(), [&](EventId a, EventId b) {
    return graph.event(a).interval.start < graph.event(b).interval.start;
  });
  std::vector<EntityId> starts;
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) {
    for (EntityId h : graph.event(order[i]).heads) {
      if (std::find(starts.begin(), starts.end(), h) == starts.end()) starts.push_back(h);
    }
  }
  return starts;
}

WalkResult mrbw(const TemporalHypergraph& graph, const Query& query, const WalkParams& params) {
  if (params.max_steps == 0 || params.num_walks == 0) {
    throw WalkError("max_steps and num_walks must be positive");
  }
  const std::vector<EntityId> starts =
      query.heads.empty() ? default_starts(graph, params.num_start_events) : query.heads;
  std::optional<EntityId> target = params.target;
  if (query.tails.size() == 1) target = query.tails.front();

  WalkResult result;
  if (starts.empty()) return result;

  for (std::size_t w = 0; w < params.num_walks; ++w) {
    WalkRng rng(walk_seed(params.seed, w));
    WalkState state = init_walk(graph, starts, params.record_temporal);
    if (query.event) state.exclude(*query.event);
    ++result.diagnostics.walks_run;

    StepResult last = StepResult::kMoved;
    bool hit = false;
    while (state.step < params.max_steps) {
      last = step(graph, state, rng);
      if (last != StepResult::kMoved) break;
      if (target && graph.event(state.trace.back()).tails.front() == *target) {
        hit = true;
        break;
      }
    }

    if (last == StepResult::kInconsistent) {
      ++result.diagnostics.inconsistent;
    } else if (target) {
      if (hit) {
        ++result.diagnostics.kept;
        result.traces.push_back({std::move(state.trace), std::move(state.time_net)});
      } else if (last == StepResult::kDeadEnd) {
        ++result.diagnostics.dead_ended;
      } else {
        ++result.diagnostics.missed_target;
      }
    } else if (state.trace.empty()) {
      ++result.diagnostics.dead_ended;
    } else {
      ++result.diagnostics.kept;
      result.traces.push_back({std::move(state.trace), std::move(state.time_net)});
    }
  }
  return result;
}

}  // namespace tilr
