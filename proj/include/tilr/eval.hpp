#pragma once

// Query sets, ranking metrics, train/test splits, the synthetic planted-rule
// corpus generator and the three-variant experiment runner.

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tilr/hypergraph.hpp"
#include "tilr/learner.hpp"
#include "tilr/query.hpp"
#include "tilr/rule.hpp"

namespace tilr {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TaskMode { kClassification, kLinkPrediction };

std::string_view task_name(TaskMode mode);

struct QuerySet {
  std::vector<Query> positives;
  std::vector<Query> negatives;
  TaskMode mode = TaskMode::kClassification;
};

/// One graph-level query per graph; positives are the graphs labeled `target`.
QuerySet build_classification_queries(std::span<const std::string> labels, const std::string& target);
/// Labels of a corpus (graphs without a label get "").
std::vector<std::string> corpus_labels(std::span<const TemporalHypergraph> graphs);

/// One query per event of `graph`, split by predicate membership.
QuerySet build_event_queries(const TemporalHypergraph& graph,
                             const std::set<std::string>& positive_predicates,
                             std::size_t graph_index = 0);

double mrr(std::span<const double> ranks);
/// Percentage of ranks ≤ k.
double hits_at_k(std::span<const double> ranks, double k);

/// 1-based rank of scores[true_index] under descending score; a tied block
/// shares the mean of its positions.
double rank_positive(std::size_t true_index, std::span<const double> scores);

struct Split {
  std::vector<Query> train_pos, train_neg, test_pos, test_neg;
};

/// Seeded shuffle of each side, then the first train_fraction goes to train.
Split split_queries(const QuerySet& queries, double train_fraction, std::uint64_t seed);

enum class FeatureKind { kBinary, kReach };

/// Row per query (positives first, label 1), column per rule.
FeatureMatrix build_features(std::span<const TemporalHypergraph> graphs,
                             std::span<const TemporalRule> rules, std::span<const Query> positives,
                             std::span<const Query> negatives, FeatureKind kind = FeatureKind::kBinary,
                             std::size_t budget = kDefaultEvalBudget);

std::vector<double> feature_row(std::span<const TemporalHypergraph> graphs,
                                std::span<const TemporalRule> rules, const Query& query,
                                FeatureKind kind = FeatureKind::kBinary,
                                std::size_t budget = kDefaultEvalBudget);

/// Untrained score: the summed occurrence counts of the mined rules that hold.
double count_score(std::span<const TemporalHypergraph> graphs, std::span<const MinedRule> rules,
                   const Query& query, std::size_t budget = kDefaultEvalBudget);

using Scorer = std::function<double(const Query&)>;

struct Metrics {
  double mrr = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
  std::size_t n_queries = 0;
};

/// Ranks every positive against the negatives (for link prediction, only
/// the negatives with the same head and tail arity).
Metrics rank_queries(std::span<const Query> positives, std::span<const Query> negatives,
                     TaskMode mode, const Scorer& scorer);

struct ExperimentConfig {
  MineParams mine;
  /// Rules kept as features by the trained variant.
  std::size_t num_features = 20;
  TrainConfig train;
  double train_fraction = 0.8;
  /// Seeds the split; mining uses mine.walk.seed.
  std::uint64_t seed = 0;
  FeatureKind features = FeatureKind::kBinary;
};

struct MethodReport {
  std::string method;  // mrbw, mrbw-pc, mrbw-pc-train
  Metrics metrics;
};

struct ExperimentReport {
  std::vector<MethodReport> methods;
  std::size_t rules_mrbw = 0;
  std::size_t rules_pc = 0;
};

ExperimentReport run_experiment(std::span<const TemporalHypergraph> graphs, const QuerySet& queries,
                                const ExperimentConfig& config);

/// One-vs-rest over each target label, metrics macro-averaged per method.
ExperimentReport run_classification(std::span<const TemporalHypergraph> graphs,
                                    std::span<const std::string> targets, const ExperimentConfig& config);

/// Single-line JSON record.
std::string metrics_record(const Metrics& m, std::string_view method, TaskMode mode, std::uint64_t seed);
std::string metrics_table(const ExperimentReport& report);

struct SynthSpec {
  std::size_t num_pos = 50;
  std::size_t num_neg = 50;
  TemporalRule planted;
  std::size_t noise_events = 10;
  std::uint64_t seed = 0;
  Tick horizon = 100;
  Tick max_duration = 20;
  std::size_t noise_predicates = 4;
  std::size_t noise_entities = 6;
};

struct SynthCorpus {
  std::vector<TemporalHypergraph> graphs;  // positives first
  std::vector<std::string> labels;
};

/// Positives hold a grounding of the planted rule, negatives the same atoms
/// with at least one constraint violated; both get noise_events binary noise
/// events inside the planted span. Every graph is checked with evaluate.
SynthCorpus synth_generate(const SynthSpec& spec);

std::string negative_label(const std::string& positive);

}  // namespace tilr
