#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tilr/bwalk.hpp"
#include "tilr/constraint_network.hpp"
#include "tilr/hypergraph.hpp"
#include "tilr/query.hpp"

namespace tilr {

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using VarId = std::uint32_t;

/// Predicate applied to logical variables. Body atoms come from B-edges and
/// carry exactly one tail variable; a graph-level head atom carries none.
struct Atom {
  std::string predicate;
  std::vector<VarId> head_vars;
  std::vector<VarId> tail_vars;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Chain rule: head <- body[0] ∧ body[1] ∧ ... with pairwise Allen
/// constraints between body atoms (time_net nodes are body indices).
struct TemporalRule {
  Atom head;
  std::vector<Atom> body;
  IANetwork time_net;
  double weight = 0.0;

  std::size_t num_vars() const;

  /// Relational part with variables renumbered by first appearance. Two rules
  /// that differ only by variable names share a signature.
  std::string signature() const;

  /// One line of the rule file format:
  ///   w=<weight> <Head>(<vars>) <- <P1>(<vars>) , ... | <i> {REL,...} <j> ; ...
  std::string to_string() const;
  static TemporalRule parse(std::string_view line);

  /// Checks the chain and network invariants; throws RuleError.
  void validate() const;
};

struct Grounding {
  std::vector<std::optional<EntityId>> vars;
  std::vector<EventId> atoms;
};

struct TraceToRuleOptions {
  /// Predicates whose unary events are class labels; one label atom is added
  /// per rule variable that carries one.
  std::set<std::string> class_predicates;
};

/// Lifts a walk trace into a rule. Body atoms are reordered so each shares a
/// variable with the query or an earlier atom, preferring earlier events.
/// Returns nullopt when the trace does not form a connected chain.
std::optional<TemporalRule> trace_to_rule(const TemporalHypergraph& graph,
                                          std::span<const EventId> trace,
                                          const std::optional<IANetwork>& time_net,
                                          const Query& query,
                                          const TraceToRuleOptions& options = {});

inline constexpr std::size_t kDefaultEvalBudget = 1'000'000;

struct MatchResult {
  bool matched = false;
  /// The step budget ran out before the search finished.
  bool exhausted = false;
  std::size_t steps = 0;
  Grounding grounding;
};

/// Backtracking search for a grounding: body atoms in order, candidate events
/// in ascending id, each event used at most once and never the query's own
/// event. Query entities bind the rule head variables.
MatchResult match(const TemporalRule& rule, const TemporalHypergraph& graph, const Query& query,
                  std::size_t budget = kDefaultEvalBudget);

bool evaluate(const TemporalRule& rule, const TemporalHypergraph& graph, const Query& query,
              std::size_t budget = kDefaultEvalBudget);

Interval coverage_span(const Grounding& grounding, const TemporalHypergraph& graph);

/// True iff one grounding spans at least rho of the graph's event span.
bool coverage_filter(const TemporalRule& rule, const TemporalHypergraph& graph, double rho,
                     std::size_t budget = kDefaultEvalBudget);

enum class MineMode { kMrbw, kMrbwPc };

std::string_view mode_name(MineMode mode);
std::optional<MineMode> parse_mode(std::string_view name);

struct MineParams {
  WalkParams walk;
  double rho = 1.0;
  /// Coverage applies to graph-level queries only.
  bool apply_coverage = true;
  /// Graph-level queries also count every prefix of each kept trace.
  bool include_prefixes = true;
  /// Keep at most this many rules; 0 keeps all.
  std::size_t top_k = 0;
  std::size_t eval_budget = kDefaultEvalBudget;
  TraceToRuleOptions rule_options;
};

struct MinedRule {
  TemporalRule rule;
  std::size_t count = 0;
};

struct MineDiagnostics {
  WalkDiagnostics walks;
  std::size_t disconnected = 0;
  std::size_t candidates = 0;
  std::size_t failed_coverage = 0;
};

struct MineResult {
  std::vector<MinedRule> rules;  // by count desc, then signature
  MineDiagnostics diagnostics;
};

/// Walks from every positive query, lifts traces to rules and aggregates them
/// by signature. kMrbw drops temporal constraints; kMrbwPc unions the observed
/// networks of each signature and closes them under path consistency.
MineResult mine_rules(std::span<const TemporalHypergraph> graphs,
                      std::span<const Query> positives, const MineParams& params, MineMode mode);

}  // namespace tilr
