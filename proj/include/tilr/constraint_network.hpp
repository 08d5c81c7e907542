#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tilr/interval_algebra.hpp"

namespace tilr {

class NetworkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// What a network node stands for.
enum class NodeKind : std::uint8_t { kEvent, kAtom };

struct KeyedInterval {
  std::uint32_t key;
  Interval interval;
};

/// Qualitative constraint network: one RelationSet per ordered pair of nodes.
///
/// Maintains m[i][i] == {EQUAL} and m[j][i] == inverse(m[i][j]). An empty
/// cell anywhere means the network is inconsistent.
class IANetwork {
 public:
  IANetwork() = default;
  /// Unconstrained network (full set off the diagonal).
  IANetwork(NodeKind kind, std::vector<std::uint32_t> keys);

  /// Singleton network of a concrete grounding.
  static IANetwork from_observed(NodeKind kind, std::span<const KeyedInterval> events);

  std::size_t size() const { return keys_.size(); }
  NodeKind kind() const { return kind_; }
  std::span<const std::uint32_t> keys() const { return keys_; }
  std::uint32_t key(std::size_t i) const { return keys_[i]; }
  /// Node index of a key, or size() when absent.
  std::size_t find(std::uint32_t key) const;

  RelationSet at(std::size_t i, std::size_t j) const { return cells_[i * keys_.size() + j]; }
  /// Sets m[i][j] and m[j][i] together.
  void set(std::size_t i, std::size_t j, RelationSet s);

  /// Appends an unconstrained node and returns its index.
  std::size_t add_node(std::uint32_t key);

  bool has_empty_cell() const;
  bool is_path_consistent() const;
  /// Total number of base relations over all cells.
  std::size_t total_cardinality() const;

  /// "a {REL,...} b" for every i < j whose cell is not full, one per line.
  std::string to_string() const;

  friend bool operator==(const IANetwork&, const IANetwork&) = default;

 private:
  NodeKind kind_ = NodeKind::kEvent;
  std::vector<std::uint32_t> keys_;
  std::vector<RelationSet> cells_;
};

struct ResolveResult {
  bool consistent = true;
  IANetwork refined;
};

/// Path consistency over a FIFO worklist of node pairs. Stops at the first
/// empty cell and reports the network inconsistent.
ResolveResult resolve_time(IANetwork net);

/// Joins two path networks: union of keys, intersection where both define a
/// cell, unconstrained across paths, then path consistency.
ResolveResult merge_paths(const IANetwork& a, const IANetwork& b,
                          std::span<const std::uint32_t> shared_keys);

/// Cellwise union with an observed network over the same keys, then closure.
IANetwork generalize(const IANetwork& rule_net, const IANetwork& observed_net);

}  // namespace tilr
