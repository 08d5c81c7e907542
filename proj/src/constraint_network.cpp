#include "tilr/constraint_network.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace tilr {

IANetwork::IANetwork(NodeKind kind, std::vector<std::uint32_t> keys)
    : kind_(kind), keys_(std::move(keys)), cells_(keys_.size() * keys_.size(), RelationSet::full()) {
  for (std::size_t i = 0; i < keys_.size(); ++i) cells_[i * keys_.size() + i] = BaseRelation::kEqual;
}

IANetwork IANetwork::from_observed(NodeKind kind, std::span<const KeyedInterval> events) {
  std::vector<std::uint32_t> keys;
  keys.reserve(events.size());
  for (const auto& e : events) {
    if (!e.interval.valid()) throw NetworkError("invalid interval in observed network");
    keys.push_back(e.key);
  }
  IANetwork net(kind, std::move(keys));
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      net.set(i, j, classify(events[i].interval, events[j].interval));
    }
  }
  return net;
}

std::size_t IANetwork::find(std::uint32_t key) const {
  return static_cast<std::size_t>(std::find(keys_.begin(), keys_.end(), key) - keys_.begin());
}

void IANetwork::set(std::size_t i, std::size_t j, RelationSet s) {
  const std::size_t n = keys_.size();
  if (i == j) {
    cells_[i * n + i] = intersect(s, BaseRelation::kEqual);
    return;
  }
  cells_[i * n + j] = s;
  cells_[j * n + i] = inverse_set(s);
}

std::size_t IANetwork::add_node(std::uint32_t key) {
  const std::size_t n = keys_.size();
  std::vector<RelationSet> grown((n + 1) * (n + 1), RelationSet::full());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) grown[i * (n + 1) + j] = cells_[i * n + j];
  grown[n * (n + 1) + n] = BaseRelation::kEqual;
  cells_ = std::move(grown);
  keys_.push_back(key);
  return n;
}

bool IANetwork::has_empty_cell() const {
  return std::any_of(cells_.begin(), cells_.end(), [](RelationSet s) { return s.empty(); });
}

bool IANetwork::is_path_consistent() const {
  const std::size_t n = keys_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (!at(i, j).subset_of(compose_sets(at(i, k), at(k, j)))) return false;
      }
  return true;
}

std::size_t IANetwork::total_cardinality() const {
  std::size_t total = 0;
  for (RelationSet s : cells_) total += static_cast<std::size_t>(s.size());
  return total;
}

std::string IANetwork::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j) {
      if (at(i, j).is_full()) continue;
      out << keys_[i] << ' ' << at(i, j).to_string() << ' ' << keys_[j] << '\n';
    }
  return out.str();
}

ResolveResult resolve_time(IANetwork net) {
  const std::size_t n = net.size();
  if (net.has_empty_cell()) return {false, std::move(net)};

  std::deque<std::pair<std::size_t, std::size_t>> queue;
  std::vector<char> queued(n * n, 0);
  auto enqueue = [&](std::size_t i, std::size_t j) {
    if (i == j || queued[i * n + j]) return;
    queued[i * n + j] = 1;
    queue.emplace_back(i, j);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) enqueue(i, j);

  // Refines target = target ∩ (left ∘ right); false when the cell empties.
  auto refine = [&](std::size_t a, std::size_t b, RelationSet via) -> bool {
    const RelationSet old = net.at(a, b);
    const RelationSet updated = intersect(old, via);
    if (updated == old) return true;
    net.set(a, b, updated);
    if (updated.empty()) return false;
    enqueue(std::min(a, b), std::max(a, b));
    return true;
  };

  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    queued[i * n + j] = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      // m[i][k] ⊆ m[i][j] ∘ m[j][k]
      if (!refine(i, k, compose_sets(net.at(i, j), net.at(j, k)))) return {false, std::move(net)};
      // m[k][j] ⊆ m[k][i] ∘ m[i][j]
      if (!refine(k, j, compose_sets(net.at(k, i), net.at(i, j)))) return {false, std::move(net)};
    }
  }
  return {true, std::move(net)};
}

ResolveResult merge_paths(const IANetwork& a, const IANetwork& b,
                          std::span<const std::uint32_t> shared_keys) {
  if (a.size() > 0 && b.size() > 0 && a.kind() != b.kind()) {
    throw NetworkError("cannot merge networks over different key kinds");
  }
  for (std::uint32_t k : shared_keys) {
    if (a.find(k) == a.size() || b.find(k) == b.size()) {
      throw NetworkError("shared key " + std::to_string(k) + " missing from one path");
    }
  }

  std::vector<std::uint32_t> keys(a.keys().begin(), a.keys().end());
  for (std::uint32_t k : b.keys()) {
    if (a.find(k) == a.size()) keys.push_back(k);
  }
  IANetwork merged(a.size() > 0 ? a.kind() : b.kind(), keys);

  std::vector<std::size_t> from_b(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) from_b[i] = merged.find(b.key(i));

  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) merged.set(i, j, a.at(i, j));
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      const std::size_t mi = from_b[i];
      const std::size_t mj = from_b[j];
      merged.set(mi, mj, intersect(merged.at(mi, mj), b.at(i, j)));
    }
  return resolve_time(std::move(merged));
}

IANetwork generalize(const IANetwork& rule_net, const IANetwork& observed_net) {
  if (rule_net.kind() != observed_net.kind() ||
      !std::equal(rule_net.keys().begin(), rule_net.keys().end(), observed_net.keys().begin(),
                  observed_net.keys().end())) {
    throw NetworkError("generalize requires identical node keys");
  }
  IANetwork out = rule_net;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      out.set(i, j, unite(rule_net.at(i, j), observed_net.at(i, j)));
    }
  return resolve_time(std::move(out)).refined;
}

}  // namespace tilr
