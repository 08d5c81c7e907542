#include "tilr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "json.hpp"

namespace tilr {
namespace {

std::size_t train_count(std::size_t n, double fraction) {
  auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
  if (n >= 2) k = std::clamp<std::size_t>(k, 1, n - 1);
  return std::min(k, n);
}

template <class T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(v[i - 1], v[pick(rng)]);
  }
}

const TemporalHypergraph& graph_of(std::span<const TemporalHypergraph> graphs, const Query& q) {
  if (q.graph >= graphs.size()) throw EvalError("query names graph " + std::to_string(q.graph) + " of " +
                                                std::to_string(graphs.size()));
  return graphs[q.graph];
}

bool same_arity(const Query& a, const Query& b) {
  return a.heads.size() == b.heads.size() && a.tails.size() == b.tails.size();
}

Metrics average(std::span<const Metrics> parts) {
  Metrics out;
  if (parts.empty()) return out;
  for (const Metrics& m : parts) {
    out.mrr += m.mrr;
    out.hits3 += m.hits3;
    out.hits10 += m.hits10;
    out.n_queries += m.n_queries;
  }
  const double n = static_cast<double>(parts.size());
  out.mrr /= n;
  out.hits3 /= n;
  out.hits10 /= n;
  return out;
}

// Synthetic generation ------------------------------------------------------

using Rng = std::mt19937_64;

Interval random_interval(Rng& rng, Tick lo, Tick hi, Tick max_duration) {
  std::uniform_int_distribution<Tick> start(lo, std::max(lo, hi - max_duration));
  const Tick s = start(rng);
  std::uniform_int_distribution<Tick> duration(0, std::min(max_duration, hi - s));
  return {s, s + duration(rng)};
}

bool satisfies(const IANetwork& net, const std::vector<Interval>& iv) {
  for (std::size_t i = 0; i < iv.size(); ++i)
    for (std::size_t j = i + 1; j < iv.size(); ++j) {
      if (!net.at(i, j).contains(classify(iv[i], iv[j]))) return false;
    }
  return true;
}

bool violates_some(const IANetwork& net, const std::vector<Interval>& iv) {
  for (std::size_t i = 0; i < iv.size(); ++i)
    for (std::size_t j = i + 1; j < iv.size(); ++j) {
      if (!net.at(i, j).is_full() && !net.at(i, j).contains(classify(iv[i], iv[j]))) return true;
    }
  return false;
}

constexpr std::size_t kMaxIntervalAttempts = 100000;
constexpr std::size_t kMaxGraphAttempts = 1000;

std::vector<Interval> sample_planted(const SynthSpec& spec, const IANetwork& net, bool positive, Rng& rng) {
  std::vector<Interval> iv(spec.planted.body.size());
  for (std::size_t attempt = 0; attempt < kMaxIntervalAttempts; ++attempt) {
    for (auto& t : iv) t = random_interval(rng, 0, spec.horizon, spec.max_duration);
    if (positive ? satisfies(net, iv) : violates_some(net, iv)) return iv;
  }
  throw EvalError(positive ? "could not sample intervals satisfying the planted rule"
                           : "could not sample intervals violating the planted rule");
}

TemporalHypergraph build_synth_graph(const SynthSpec& spec, const IANetwork& net, bool positive, Rng& rng) {
  const TemporalRule& rule = spec.planted;
  const auto intervals = sample_planted(spec, net, positive, rng);

  auto var_name = [](VarId v) { return "x" + std::to_string(v); };
  TemporalHypergraph g;
  Interval span = intervals.front();
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    const Atom& a = rule.body[i];
    std::vector<std::string> heads, tails;
    for (VarId v : a.head_vars) heads.push_back(var_name(v));
    for (VarId v : a.tail_vars) tails.push_back(var_name(v));
    g.add_event(a.predicate, heads, tails, intervals[i]);
    span.start = std::min(span.start, intervals[i].start);
    span.end = std::max(span.end, intervals[i].end);
  }

  std::vector<std::string> pool;
  for (VarId v = 0; v < rule.num_vars(); ++v) pool.push_back(var_name(v));
  for (std::size_t k = 0; k < spec.noise_entities; ++k) pool.push_back("n" + std::to_string(k));
  if (spec.noise_events > 0 && (pool.size() < 2 || spec.noise_predicates == 0)) {
    throw EvalError("noise needs at least two entities and one predicate");
  }
  std::uniform_int_distribution<std::size_t> pick_pred(0, spec.noise_predicates == 0 ? 0 : spec.noise_predicates - 1);
  std::uniform_int_distribution<std::size_t> pick_entity(0, pool.size() - 1);
  for (std::size_t k = 0; k < spec.noise_events; ++k) {
    const std::string predicate = "N" + std::to_string(pick_pred(rng));
    const std::size_t h = pick_entity(rng);
    std::size_t t = pick_entity(rng);
    while (t == h) t = pick_entity(rng);
    std::uniform_int_distribution<Tick> start(span.start, span.end);
    const Tick s = start(rng);
    std::uniform_int_distribution<Tick> end(s, span.end);
    g.add_event(predicate, {pool[h]}, {pool[t]}, Interval{s, end(rng)});
  }
  g.set_label(positive ? rule.head.predicate : negative_label(rule.head.predicate));
  return g;
}

}  // namespace

std::string_view task_name(TaskMode mode) {
  return mode == TaskMode::kClassification ? "classification" : "link_prediction";
}

std::string negative_label(const std::string& positive) { return "not_" + positive; }

QuerySet build_classification_queries(std::span<const std::string> labels, const std::string& target) {
  QuerySet out;
  out.mode = TaskMode::kClassification;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    Query q;
    q.graph = i;
    q.predicate = target;
    (labels[i] == target ? out.positives : out.negatives).push_back(std::move(q));
  }
  if (out.positives.empty()) throw EvalError("no graph is labeled '" + target + "'");
  if (out.negatives.empty()) throw EvalError("every graph is labeled '" + target + "'; no negatives");
  return out;
}

std::vector<std::string> corpus_labels(std::span<const TemporalHypergraph> graphs) {
  std::vector<std::string> out;
  for (const auto& g : graphs) out.push_back(g.label().value_or(""));
  return out;
}

QuerySet build_event_queries(const TemporalHypergraph& graph, const std::set<std::string>& positive_predicates,
                             std::size_t graph_index) {
  for (const auto& p : positive_predicates) {
    if (!graph.find_predicate(p)) throw EvalError("predicate '" + p + "' does not occur in the graph");
  }
  QuerySet out;
  out.mode = TaskMode::kLinkPrediction;
  for (const Event& e : graph.events()) {
    Query q;
    q.graph = graph_index;
    q.predicate = graph.predicate_name(e.predicate);
    q.heads = e.heads;
    q.tails = e.tails;
    q.event = e.id;
    (positive_predicates.contains(q.predicate) ? out.positives : out.negatives).push_back(std::move(q));
  }
  return out;
}

double mrr(std::span<const double> ranks) {
  if (ranks.empty()) throw EvalError("mrr of no ranks");
  double total = 0.0;
  for (double r : ranks) {
    if (!(r >= 1.0)) throw EvalError("ranks must be at least 1");
    total += 1.0 / r;
  }
  return total / static_cast<double>(ranks.size());
}

double hits_at_k(std::span<const double> ranks, double k) {
  if (ranks.empty()) throw EvalError("hits of no ranks");
  std::size_t hits = 0;
  for (double r : ranks) {
    if (!(r >= 1.0)) throw EvalError("ranks must be at least 1");
    hits += r <= k;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double rank_positive(std::size_t true_index, std::span<const double> scores) {
  if (true_index >= scores.size()) throw EvalError("true query is not in the candidate pool");
  const double s = scores[true_index];
  std::size_t greater = 0, tied = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i == true_index) continue;
    if (scores[i] > s) ++greater;
    else if (scores[i] == s) ++tied;
  }
  // Positions greater+1 .. greater+tied+1 share their mean.
  return static_cast<double>(greater) + 1.0 + static_cast<double>(tied) / 2.0;
}

Split split_queries(const QuerySet& queries, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw EvalError("train fraction must lie in (0, 1)");
  Split out;
  auto divide = [&](std::vector<Query> v, std::uint64_t s, std::vector<Query>& train, std::vector<Query>& test) {
    seeded_shuffle(v, s);
    const std::size_t k = train_count(v.size(), train_fraction);
    train.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
    test.assign(v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  };
  divide(queries.positives, walk_seed(seed, 0), out.train_pos, out.test_pos);
  divide(queries.negatives, walk_seed(seed, 1), out.train_neg, out.test_neg);
  return out;
}

std::vector<double> feature_row(std::span<const TemporalHypergraph> graphs, std::span<const TemporalRule> rules,
                                const Query& query, FeatureKind kind, std::size_t budget) {
  const TemporalHypergraph& g = graph_of(graphs, query);
  std::vector<double> row(rules.size(), 0.0);
  for (std::size_t c = 0; c < rules.size(); ++c) {
    if (!evaluate(rules[c], g, query, budget)) continue;
    if (kind == FeatureKind::kReach && !query.is_graph_query() && query.tails.size() == 1) {
      const double reach = reach_probability(g, query.heads, query.tails.front(), rules[c].body.size());
      row[c] = std::clamp(reach, 0.0, 1.0);
    } else {
      row[c] = 1.0;
    }
  }
  return row;
}

FeatureMatrix build_features(std::span<const TemporalHypergraph> graphs, std::span<const TemporalRule> rules,
                             std::span<const Query> positives, std::span<const Query> negatives, FeatureKind kind,
                             std::size_t budget) {
  FeatureMatrix m(positives.size() + negatives.size(), rules.size());
  std::size_t r = 0;
  for (int label : {1, 0}) {
    for (const Query& q : label == 1 ? positives : negatives) {
      const auto row = feature_row(graphs, rules, q, kind, budget);
      for (std::size_t c = 0; c < row.size(); ++c) m.at(r, c) = row[c];
      m.labels()[r] = label;
      ++r;
    }
  }
  return m;
}

double count_score(std::span<const TemporalHypergraph> graphs, std::span<const MinedRule> rules, const Query& query,
                   std::size_t budget) {
  const TemporalHypergraph& g = graph_of(graphs, query);
  double total = 0.0;
  for (const MinedRule& r : rules) {
    if (evaluate(r.rule, g, query, budget)) total += static_cast<double>(r.count);
  }
  return total;
}

Metrics rank_queries(std::span<const Query> positives, std::span<const Query> negatives, TaskMode mode,
                     const Scorer& scorer) {
  if (positives.empty()) throw EvalError("no positive queries to rank");
  std::vector<double> negative_scores;
  negative_scores.reserve(negatives.size());
  for (const Query& q : negatives) negative_scores.push_back(scorer(q));

  std::vector<double> ranks;
  for (const Query& p : positives) {
    std::vector<double> pool{scorer(p)};
    for (std::size_t i = 0; i < negatives.size(); ++i) {
      if (mode == TaskMode::kLinkPrediction && !same_arity(p, negatives[i])) continue;
      pool.push_back(negative_scores[i]);
    }
    ranks.push_back(rank_positive(0, pool));
  }
  return {mrr(ranks), hits_at_k(ranks, 3), hits_at_k(ranks, 10), ranks.size()};
}

ExperimentReport run_experiment(std::span<const TemporalHypergraph> graphs, const QuerySet& queries,
                                const ExperimentConfig& config) {
  const Split split = split_queries(queries, config.train_fraction, config.seed);
  if (split.train_pos.empty() || split.test_pos.empty()) {
    throw EvalError("need at least two positive queries for a train/test split");
  }
  const std::size_t budget = config.mine.eval_budget;
  ExperimentReport report;

  const MineResult plain = mine_rules(graphs, split.train_pos, config.mine, MineMode::kMrbw);
  const MineResult pc = mine_rules(graphs, split.train_pos, config.mine, MineMode::kMrbwPc);
  report.rules_mrbw = plain.rules.size();
  report.rules_pc = pc.rules.size();

  for (const auto* mined : {&plain, &pc}) {
    const Scorer scorer = [&](const Query& q) { return count_score(graphs, mined->rules, q, budget); };
    report.methods.push_back({mined == &plain ? "mrbw" : "mrbw-pc",
                              rank_queries(split.test_pos, split.test_neg, queries.mode, scorer)});
  }

  std::vector<TemporalRule> features;
  for (std::size_t i = 0; i < pc.rules.size() && i < config.num_features; ++i) features.push_back(pc.rules[i].rule);
  const FeatureMatrix m = build_features(graphs, features, split.train_pos, split.train_neg, config.features, budget);
  const TrainResult trained = train(m, config.train);
  const Scorer scorer = [&](const Query& q) {
    return score(feature_row(graphs, features, q, config.features, budget), trained.params);
  };
  report.methods.push_back({"mrbw-pc-train", rank_queries(split.test_pos, split.test_neg, queries.mode, scorer)});
  return report;
}

ExperimentReport run_classification(std::span<const TemporalHypergraph> graphs, std::span<const std::string> targets,
                                    const ExperimentConfig& config) {
  if (targets.empty()) throw EvalError("no target labels");
  const auto labels = corpus_labels(graphs);
  std::map<std::string, std::vector<Metrics>> per_method;
  std::vector<std::string> order;
  ExperimentReport out;
  for (const std::string& target : targets) {
    const ExperimentReport r = run_experiment(graphs, build_classification_queries(labels, target), config);
    out.rules_mrbw += r.rules_mrbw;
    out.rules_pc += r.rules_pc;
    for (const MethodReport& m : r.methods) {
      if (!per_method.contains(m.method)) order.push_back(m.method);
      per_method[m.method].push_back(m.metrics);
    }
  }
  for (const auto& name : order) out.methods.push_back({name, average(per_method[name])});
  return out;
}

std::string metrics_record(const Metrics& m, std::string_view method, TaskMode mode, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["method"] = method;
  j["mode"] = task_name(mode);
  j["mrr"] = m.mrr;
  j["hits@3"] = m.hits3;
  j["hits@10"] = m.hits10;
  j["n_queries"] = m.n_queries;
  j["seed"] = seed;
  return j.dump();
}

std::string metrics_table(const ExperimentReport& report) {
  std::string out = "method          MRR     Hits@3  Hits@10  queries\n";
  char line[128];
  for (const MethodReport& m : report.methods) {
    std::snprintf(line, sizeof(line), "%-14s  %6.4f  %6.2f  %7.2f  %7zu\n", m.method.c_str(), m.metrics.mrr,
                  m.metrics.hits3, m.metrics.hits10, m.metrics.n_queries);
    out += line;
  }
  return out;
}

SynthCorpus synth_generate(const SynthSpec& spec) {
  const TemporalRule& rule = spec.planted;
  rule.validate();
  if (!rule.head.head_vars.empty() || !rule.head.tail_vars.empty()) {
    throw EvalError("the planted rule must have a graph-level head");
  }
  bool constrained = false;
  for (std::size_t i = 0; i < rule.time_net.size(); ++i)
    for (std::size_t j = i + 1; j < rule.time_net.size(); ++j) constrained |= !rule.time_net.at(i, j).is_full();
  if (!constrained) throw EvalError("the planted rule has no temporal constraint");
  if (spec.horizon < 1 || spec.max_duration < 0) throw EvalError("bad horizon or duration");

  const ResolveResult resolved = resolve_time(rule.time_net);
  if (!resolved.consistent) throw EvalError("the planted rule's temporal constraints are unsatisfiable");

  SynthCorpus out;
  const Query whole_graph;
  for (std::size_t i = 0; i < spec.num_pos + spec.num_neg; ++i) {
    const bool positive = i < spec.num_pos;
    Rng rng(walk_seed(spec.seed, i));
    bool done = false;
    for (std::size_t attempt = 0; attempt < kMaxGraphAttempts && !done; ++attempt) {
      TemporalHypergraph g = build_synth_graph(spec, resolved.refined, positive, rng);
      if (evaluate(rule, g, whole_graph) != positive) continue;
      out.labels.push_back(*g.label());
      out.graphs.push_back(std::move(g));
      done = true;
    }
    if (!done) throw EvalError("could not generate graph " + std::to_string(i));
  }
  return out;
}

}  // namespace tilr
