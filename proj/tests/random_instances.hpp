#pragma once

// Random graph/rule/query triples for matching tests.

#include <random>
#include <set>
#include <string>

#include "tilr/rule.hpp"

namespace testing_support {

struct MatchInstance {
  tilr::TemporalHypergraph graph;
  tilr::TemporalRule rule;
  tilr::Query query;
};

inline MatchInstance random_match_instance(std::mt19937_64& rng) {
  using namespace tilr;
  MatchInstance inst;
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  // Predicates P, Q: one head; M: two heads. Entities e0..e4, times 0..10.
  const char* preds[] = {"P", "Q", "M"};
  const int num_events = uniform(1, 12);
  for (int i = 0; i < num_events; ++i) {
    const int p = uniform(0, 2);
    std::set<int> heads;
    while (static_cast<int>(heads.size()) < (p == 2 ? 2 : 1)) heads.insert(uniform(0, 4));
    const int tail = uniform(0, 4);
    std::vector<std::string> hn, tn{"e" + std::to_string(tail)};
    for (int h : heads) hn.push_back("e" + std::to_string(h));
    int s = uniform(0, 10), e = uniform(0, 10);
    if (s > e) std::swap(s, e);
    inst.graph.add_event(preds[p], hn, tn, {s, e});
  }

  const int body = uniform(1, 3);
  inst.rule.head.predicate = "T";
  for (int i = 0; i < body; ++i) {
    const int p = uniform(0, 2);
    Atom a{preds[p], {}, {}};
    a.head_vars.push_back(static_cast<VarId>(uniform(0, 3)));
    if (p == 2) a.head_vars.push_back(static_cast<VarId>(uniform(0, 3)));
    a.tail_vars.push_back(static_cast<VarId>(uniform(0, 3)));
    inst.rule.body.push_back(std::move(a));
  }
  std::vector<std::uint32_t> keys;
  for (int i = 0; i < body; ++i) keys.push_back(static_cast<std::uint32_t>(i));
  inst.rule.time_net = IANetwork(NodeKind::kAtom, keys);
  for (int i = 0; i < body; ++i)
    for (int j = i + 1; j < body; ++j) {
      if (uniform(0, 1) == 0) continue;
      std::uint16_t mask = 0;
      const int k = uniform(1, 4);
      for (int r = 0; r < k; ++r) mask |= static_cast<std::uint16_t>(1u << uniform(0, 12));
      inst.rule.time_net.set(i, j, RelationSet(mask));
    }

  if (uniform(0, 1) == 1) {
    const auto& ev = inst.graph.event(EventId(static_cast<std::size_t>(uniform(0, num_events - 1))));
    if (ev.heads.size() == 1) {
      inst.query.predicate = "T";
      inst.query.heads = ev.heads;
      inst.query.tails = ev.tails;
      inst.query.event = ev.id;
      inst.rule.head.head_vars = {static_cast<VarId>(uniform(0, 3))};
      inst.rule.head.tail_vars = {static_cast<VarId>(uniform(0, 3))};
    }
  }
  return inst;
}

}  // namespace testing_support
