#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "random_instances.hpp"
#include "tilr/rule.hpp"

using namespace tilr;
using R = BaseRelation;

namespace {

EntityId id(const TemporalHypergraph& g, const char* name) { return *g.find_entity(name); }

IANetwork observed(const TemporalHypergraph& g, std::initializer_list<std::uint32_t> events) {
  std::vector<KeyedInterval> ev;
  for (auto e : events) ev.push_back({e, g.event(EventId(e)).interval});
  return IANetwork::from_observed(NodeKind::kEvent, ev);
}

struct Kitchen {
  TemporalHypergraph g;
  Query q;
  Kitchen(Interval put, Interval fry) {
    g.add_event("Put", {"bacon"}, {"pan"}, put);
    g.add_event("Fry", {"pan"}, {"pan"}, fry);
    q.predicate = "Cooked";
    q.heads = {id(g, "bacon")};
    q.tails = {id(g, "pan")};
  }
};

TemporalRule cooked_rule() {
  Kitchen k({3, 5}, {6, 9});
  const EventId trace[] = {EventId(0), EventId(1)};
  return *trace_to_rule(k.g, trace, observed(k.g, {0, 1}), k.q);
}

}  // namespace

TEST(TraceToRule, LiftsTraceWithTemporalRelation) {
  const auto rule = cooked_rule();
  EXPECT_EQ(rule.to_string(), "w=0 Cooked(X0,X1) <- Put(X0,X1) , Fry(X1,X1) | 0 {BEFORE} 1");
  EXPECT_NO_THROW(rule.validate());
}

TEST(TraceToRule, SingleEdge) {
  Kitchen k({3, 5}, {6, 9});
  const EventId trace[] = {EventId(0)};
  const auto rule = *trace_to_rule(k.g, trace, observed(k.g, {0}), k.q);
  ASSERT_EQ(rule.body.size(), 1u);
  EXPECT_EQ(rule.time_net.size(), 1u);
  EXPECT_EQ(rule.time_net.at(0, 0), RelationSet(R::kEqual));
}

TEST(TraceToRule, CanonicalSignature) {
  Kitchen k({3, 5}, {6, 9});
  const EventId forward[] = {EventId(0), EventId(1)};
  const EventId backward[] = {EventId(1), EventId(0)};
  const auto a = trace_to_rule(k.g, forward, std::nullopt, k.q);
  const auto b = trace_to_rule(k.g, backward, std::nullopt, k.q);
  EXPECT_EQ(a->signature(), b->signature());
  EXPECT_EQ(a->signature(), trace_to_rule(k.g, forward, std::nullopt, k.q)->signature());
}

TEST(TraceToRule, SignatureIgnoresVariableNames) {
  auto a = TemporalRule::parse("w=1 T() <- A(X0,X1) , B(X1,X2)");
  auto b = TemporalRule::parse("w=1 T() <- A(X5,X3) , B(X3,X9)");
  EXPECT_EQ(a.signature(), b.signature());
}

TEST(TraceToRule, DisconnectedTraceIsRejected) {
  TemporalHypergraph g;
  g.add_event("P", {"a"}, {"b"}, {0, 1});
  g.add_event("P", {"c"}, {"d"}, {2, 3});
  Query q;
  q.heads = {id(g, "a")};
  q.tails = {id(g, "b")};
  const EventId trace[] = {EventId(0), EventId(1)};
  EXPECT_FALSE(trace_to_rule(g, trace, std::nullopt, q).has_value());
}

TEST(TraceToRule, ClassAtoms) {
  TemporalHypergraph g;
  g.add_event("Put", {"bacon"}, {"pan"}, {3, 5});
  g.add_event("Food", {"bacon"}, {"bacon"}, {0, 20});
  Query q;
  q.predicate = "T";
  const EventId trace[] = {EventId(0)};
  TraceToRuleOptions opt;
  opt.class_predicates = {"Food"};
  const auto rule = *trace_to_rule(g, trace, std::nullopt, q, opt);
  EXPECT_EQ(rule.to_string(), "w=0 T() <- Put(X0,X1) , Food(X0,X0)");
}

TEST(RuleText, RoundTrip) {
  const char* line = "w=2.5 T() <- A(X0,X1) , M(X0,X1,X2) , B(X2,X3) | 0 {BEFORE,MEETS} 2 ; 1 {DURING} 2";
  const auto rule = TemporalRule::parse(line);
  EXPECT_EQ(rule.to_string(), line);
  EXPECT_EQ(rule.weight, 2.5);
  EXPECT_EQ(rule.body[1].head_vars.size(), 2u);
  EXPECT_EQ(rule.time_net.at(2, 0), (RelationSet{R::kAfter, R::kMetBy}));
}

TEST(RuleText, Errors) {
  EXPECT_THROW(TemporalRule::parse("T() <- A(X0,X1)"), RuleError);
  EXPECT_THROW(TemporalRule::parse("w=1 T() A(X0,X1)"), RuleError);
  EXPECT_THROW(TemporalRule::parse("w=1 T() <- A(X0,X1) | 0 {BEFORE} 3"), RuleError);
  EXPECT_THROW(TemporalRule::parse("w=1 T() <- A(X0,X1) , B(X5,X6)"), RuleError);
  EXPECT_THROW(TemporalRule::parse("w=1 T() <- A(X0,X1) , B(X1,X2) | 0 {SOON} 1"), RuleError);
}

TEST(Evaluate, SelfMatchAndReversedOrder) {
  const auto rule = cooked_rule();
  Kitchen same({3, 5}, {6, 9});
  EXPECT_TRUE(evaluate(rule, same.g, same.q));
  Kitchen reversed({6, 9}, {3, 5});
  EXPECT_FALSE(evaluate(rule, reversed.g, reversed.q));
}

TEST(Evaluate, FullNetworkIsRelational) {
  auto rule = cooked_rule();
  rule.time_net = IANetwork(NodeKind::kAtom, {0, 1});
  Kitchen reversed({6, 9}, {3, 5});
  EXPECT_TRUE(evaluate(rule, reversed.g, reversed.q));
}

TEST(Evaluate, HeadBindingRestrictsGroundings) {
  const auto rule = cooked_rule();
  Kitchen k({3, 5}, {6, 9});
  k.g.add_event("Put", {"egg"}, {"bowl"}, {1, 2});
  Query other = k.q;
  other.heads = {id(k.g, "egg")};
  other.tails = {id(k.g, "bowl")};
  EXPECT_FALSE(evaluate(rule, k.g, other));
}

TEST(Evaluate, HeadSetsMatchAsSets) {
  TemporalHypergraph g;
  g.add_event("M", {"a", "b"}, {"c"}, {0, 1});
  g.add_event("P", {"b"}, {"d"}, {2, 3});
  const auto rule = TemporalRule::parse("w=1 T() <- M(X0,X1,X2) , P(X0,X3)");
  EXPECT_TRUE(evaluate(rule, g, Query{}));
}

TEST(Evaluate, EventsAreUsedOnce) {
  TemporalHypergraph g;
  g.add_event("P", {"a"}, {"b"}, {0, 1});
  const auto rule = TemporalRule::parse("w=1 T() <- P(X0,X1) , P(X0,X1)");
  EXPECT_FALSE(evaluate(rule, g, Query{}));
  g.add_event("P", {"a"}, {"b"}, {4, 5});
  EXPECT_TRUE(evaluate(rule, g, Query{}));
}

TEST(Evaluate, BudgetExhaustion) {
  TemporalHypergraph g;
  for (int i = 0; i < 30; ++i) g.add_event("P", {"a" + std::to_string(i)}, {"b"}, {i, i});
  const auto rule = TemporalRule::parse("w=1 T() <- P(X0,X1) , P(X2,X1) , P(X3,X1) , Q(X3,X4)");
  const auto r = match(rule, g, Query{}, 1000);
  EXPECT_TRUE(r.exhausted);
  EXPECT_FALSE(r.matched);
  EXPECT_FALSE(match(rule, g, Query{}).exhausted);
}

TEST(Evaluate, AgreesWithBruteForce) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing_support::random_match_instance(rng);
    EXPECT_EQ(evaluate(inst.rule, inst.graph, inst.query),
              oracle::grounding_exists(inst.rule, inst.graph, inst.query))
        << inst.rule.to_string();
  }
}

TEST(Coverage, Span) {
  TemporalHypergraph g;
  g.add_event("A", {"a"}, {"b"}, {3, 5});
  g.add_event("B", {"b"}, {"c"}, {6, 9});
  g.add_event("C", {"c"}, {"d"}, {2, 2});
  g.add_event("D", {"d"}, {"e"}, {1, 10});
  g.add_event("E", {"e"}, {"f"}, {4, 5});
  EXPECT_EQ(coverage_span({{}, {EventId(0), EventId(1)}}, g), (Interval{3, 9}));
  EXPECT_EQ(coverage_span({{}, {EventId(2)}}, g), (Interval{2, 2}));
  EXPECT_EQ(coverage_span({{}, {EventId(3), EventId(4)}}, g), (Interval{1, 10}));
  EXPECT_THROW(coverage_span({}, g), RuleError);
}

TEST(Coverage, Filter) {
  TemporalHypergraph g;
  g.add_event("A", {"a"}, {"b"}, {0, 30});
  g.add_event("B", {"b"}, {"c"}, {20, 60});
  g.add_event("Z", {"x"}, {"y"}, {0, 100});
  const auto full = TemporalRule::parse("w=1 T() <- Z(X0,X1)");
  const auto partial = TemporalRule::parse("w=1 T() <- A(X0,X1) , B(X1,X2)");
  EXPECT_TRUE(coverage_filter(full, g, 1.0));
  EXPECT_FALSE(coverage_filter(partial, g, 1.0));
  EXPECT_TRUE(coverage_filter(partial, g, 0.5));
  EXPECT_THROW(coverage_filter(partial, g, 0.0), RuleError);
  EXPECT_THROW(coverage_filter(partial, g, 1.5), RuleError);
}

TEST(Mine, UniquePathRankedFirst) {
  std::vector<TemporalHypergraph> graphs(1);
  auto& g = graphs[0];
  g.add_event("P", {"a"}, {"b"}, {0, 1});
  g.add_event("Q", {"b"}, {"c"}, {2, 3});
  Query q;
  q.predicate = "T";
  q.heads = {id(g, "a")};
  q.tails = {id(g, "c")};
  MineParams p;
  p.walk.num_walks = 10;
  for (MineMode mode : {MineMode::kMrbw, MineMode::kMrbwPc}) {
    const auto r = mine_rules(graphs, std::span(&q, 1), p, mode);
    ASSERT_EQ(r.rules.size(), 1u);
    EXPECT_EQ(r.rules[0].count, 10u);
    EXPECT_EQ(r.rules[0].rule.signature(), "T(X0,X1) <- P(X0,X2) , Q(X2,X1)");
    EXPECT_EQ(r.rules[0].rule.time_net.at(0, 1).is_full(), mode == MineMode::kMrbw);
  }
}

TEST(Mine, GeneralizesAcrossOccurrences) {
  std::vector<TemporalHypergraph> graphs(2);
  graphs[0].add_event("A", {"a"}, {"b"}, {0, 1});
  graphs[0].add_event("B", {"b"}, {"c"}, {3, 4});
  graphs[1].add_event("A", {"a"}, {"b"}, {0, 2});
  graphs[1].add_event("B", {"b"}, {"c"}, {2, 4});
  std::vector<Query> qs(2);
  qs[1].graph = 1;
  MineParams p;
  p.walk.num_walks = 5;
  p.walk.max_steps = 2;
  const auto r = mine_rules(graphs, qs, p, MineMode::kMrbwPc);
  const auto it = std::find_if(r.rules.begin(), r.rules.end(),
                               [](const MinedRule& m) { return m.rule.body.size() == 2; });
  ASSERT_NE(it, r.rules.end());
  EXPECT_TRUE((RelationSet{R::kBefore, R::kMeets}).subset_of(it->rule.time_net.at(0, 1)));
  EXPECT_TRUE(it->rule.time_net.is_path_consistent());
}

TEST(Mine, CoverageDropsShortRules) {
  std::vector<TemporalHypergraph> graphs(1);
  graphs[0].add_event("A", {"a"}, {"b"}, {0, 1});
  graphs[0].add_event("B", {"b"}, {"c"}, {5, 10});
  Query q;
  MineParams p;
  p.walk.num_walks = 5;
  p.walk.max_steps = 2;
  const auto r = mine_rules(graphs, std::span(&q, 1), p, MineMode::kMrbwPc);
  ASSERT_EQ(r.rules.size(), 1u);
  EXPECT_EQ(r.rules[0].rule.body.size(), 2u);
  EXPECT_GT(r.diagnostics.failed_coverage, 0u);
  p.apply_coverage = false;
  // A alone, B alone, and both.
  EXPECT_EQ(mine_rules(graphs, std::span(&q, 1), p, MineMode::kMrbwPc).rules.size(), 3u);
}

TEST(Mine, Deterministic) {
  std::mt19937_64 rng(4);
  std::vector<TemporalHypergraph> graphs;
  for (int i = 0; i < 3; ++i) graphs.push_back(oracle::random_b_graph(rng, 8, 16));
  std::vector<Query> qs(3);
  for (int i = 0; i < 3; ++i) qs[i].graph = i;
  MineParams p;
  p.apply_coverage = false;
  const auto a = mine_rules(graphs, qs, p, MineMode::kMrbwPc);
  const auto b = mine_rules(graphs, qs, p, MineMode::kMrbwPc);
  ASSERT_EQ(a.rules.size(), b.rules.size());
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    EXPECT_EQ(a.rules[i].rule.to_string(), b.rules[i].rule.to_string());
    EXPECT_EQ(a.rules[i].count, b.rules[i].count);
  }
}

TEST(Mine, ModeNames) {
  EXPECT_EQ(parse_mode(mode_name(MineMode::kMrbw)), MineMode::kMrbw);
  EXPECT_EQ(parse_mode(mode_name(MineMode::kMrbwPc)), MineMode::kMrbwPc);
  EXPECT_EQ(parse_mode("other"), std::nullopt);
}
