#include "tilr/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "tilr/eval.hpp"
#include "tilr/io.hpp"
#include "tilr/learner.hpp"
#include "tilr/rule.hpp"

namespace tilr {
namespace fs = std::filesystem;
namespace {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MiningFlags {
  std::string mode = "mrbw-pc";
  std::size_t walks = 200;
  std::size_t max_steps = 3;
  std::uint64_t seed = 0;
  double rho = 1.0;
  std::size_t top_k = 0;
  std::size_t start_events = 3;
  std::vector<std::string> class_predicates;
  bool no_prefixes = false;

  void add_to(CLI::App& app) {
    app.add_option("--mode", mode, "mrbw or mrbw-pc")->check(CLI::IsMember({"mrbw", "mrbw-pc"}));
    app.add_option("--walks", walks, "walks per positive query")->check(CLI::PositiveNumber);
    app.add_option("--max-steps", max_steps, "edges per walk")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "random seed");
    app.add_option("--rho", rho, "time-span coverage ratio in (0, 1]");
    app.add_option("--top-k", top_k, "keep the k most frequent rules (0 = all)");
    app.add_option("--start-events", start_events, "graph queries start from the heads of this many earliest events")
        ->check(CLI::PositiveNumber);
    app.add_option("--class-predicates", class_predicates, "unary predicates treated as class labels")
        ->delimiter(',');
    app.add_flag("--no-prefixes", no_prefixes, "do not count trace prefixes as rules");
  }

  MineParams params() const {
    MineParams p;
    p.walk.num_walks = walks;
    p.walk.max_steps = max_steps;
    p.walk.seed = seed;
    p.walk.num_start_events = start_events;
    p.rho = rho;
    p.top_k = top_k;
    p.include_prefixes = !no_prefixes;
    p.rule_options.class_predicates = {class_predicates.begin(), class_predicates.end()};
    return p;
  }
};

struct TrainingFlags {
  double lr = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;
  std::size_t features = 20;
  std::string feature_kind = "binary";

  void add_to(CLI::App& app) {
    app.add_option("--lr", lr, "learning rate");
    app.add_option("--epochs", epochs, "gradient descent epochs")->check(CLI::PositiveNumber);
    app.add_option("--l2", l2, "L2 penalty");
    app.add_option("--features", features, "rules used as features")->check(CLI::PositiveNumber);
    app.add_option("--feature-kind", feature_kind, "binary or reach")->check(CLI::IsMember({"binary", "reach"}));
  }

  TrainConfig config(std::uint64_t seed) const { return {lr, epochs, l2, seed}; }
  FeatureKind kind() const { return feature_kind == "reach" ? FeatureKind::kReach : FeatureKind::kBinary; }
};

struct QueryFlags {
  std::string corpus;
  std::vector<std::string> targets;
  std::vector<std::string> predicates;
  bool split_multi_tail = false;

  void add_to(CLI::App& app) {
    app.add_option("--corpus", corpus, "hypergraph file or directory of .thg files")->required();
    app.add_option("--target", targets, "graph label(s) to classify")->delimiter(',');
    app.add_option("--predicates", predicates, "event predicates forming the positive link queries")
        ->delimiter(',');
    app.add_flag("--split-multi-tail", split_multi_tail, "split multi-tail events into B-edges");
  }

  std::vector<TemporalHypergraph> load() const {
    const LoadOptions options{split_multi_tail};
    if (fs::is_directory(corpus)) return load_corpus(corpus, options);
    std::vector<TemporalHypergraph> one;
    one.push_back(load_graph(corpus, options));
    return one;
  }

  void require_task() const {
    if (targets.empty() == predicates.empty()) {
      throw CLI::ValidationError("exactly one of --target and --predicates is required");
    }
  }

  QuerySet queries(std::span<const TemporalHypergraph> graphs, const std::string& target) const {
    if (!targets.empty()) return build_classification_queries(corpus_labels(graphs), target);
    QuerySet all;
    all.mode = TaskMode::kLinkPrediction;
    bool found = false;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      std::set<std::string> present;
      for (const auto& p : predicates) {
        if (graphs[i].find_predicate(p)) present.insert(p);
      }
      found |= !present.empty();
      QuerySet part = build_event_queries(graphs[i], present, i);
      all.positives.insert(all.positives.end(), part.positives.begin(), part.positives.end());
      all.negatives.insert(all.negatives.end(), part.negatives.begin(), part.negatives.end());
    }
    if (!found) throw DataError("none of the --predicates occurs in the corpus");
    return all;
  }
};

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path);
  f << text;
}

std::vector<TemporalRule> load_rules(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return read_rules(in, path);
}

std::string rules_text(std::span<const MinedRule> mined) {
  std::vector<TemporalRule> rules;
  for (const auto& m : mined) rules.push_back(m.rule);
  std::ostringstream s;
  write_rules(s, rules);
  return s.str();
}

MineResult mine_all(std::span<const TemporalHypergraph> graphs, const QueryFlags& qf, const MineParams& params,
                    MineMode mode) {
  std::vector<Query> positives;
  const std::vector<std::string> targets = qf.targets.empty() ? std::vector<std::string>{""} : qf.targets;
  for (const auto& t : targets) {
    const QuerySet qs = qf.queries(graphs, t);
    positives.insert(positives.end(), qs.positives.begin(), qs.positives.end());
  }
  return mine_rules(graphs, positives, params, mode);
}

std::string inspect_text(std::span<const TemporalHypergraph> graphs) {
  std::ostringstream s;
  std::size_t total = 0, points = 0, min_facts = SIZE_MAX, max_facts = 0;
  bool all_b = true;
  std::map<std::string, std::pair<std::string, std::size_t>> predicates;  // name -> arity, facts
  std::map<std::string, std::size_t> labels;
  std::set<std::string> entities;
  for (const auto& g : graphs) {
    total += g.num_events();
    min_facts = std::min(min_facts, g.num_events());
    max_facts = std::max(max_facts, g.num_events());
    all_b &= g.is_b_graph();
    if (g.label()) ++labels[*g.label()];
    for (const Event& e : g.events()) {
      points += e.interval.start == e.interval.end;
      const auto& info = g.predicate_info(e.predicate);
      const std::string head = info.head_arity ? std::to_string(*info.head_arity) : "n";
      auto& entry = predicates[info.name];
      entry.first = head + "->" + std::to_string(info.tail_arity);
      ++entry.second;
    }
    for (std::size_t i = 0; i < g.num_entities(); ++i) entities.insert(g.entity_name(EntityId(i)));
  }
  if (graphs.empty()) min_facts = 0;

  std::map<std::string, std::size_t> by_arity;
  for (const auto& [name, entry] : predicates) ++by_arity[entry.first];

  s << "graphs: " << graphs.size() << '\n';
  s << "facts: " << total << '\n';
  if (!graphs.empty()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", static_cast<double>(total) / static_cast<double>(graphs.size()));
    s << "facts per graph: min " << min_facts << " mean " << buf << " max " << max_facts << '\n';
  }
  s << "entity names: " << entities.size() << '\n';
  s << "predicates: " << predicates.size() << '\n';
  for (const auto& [arity, n] : by_arity) s << "  arity " << arity << ": " << n << '\n';
  s << "point intervals: " << points << " of " << total << '\n';
  s << "b-graphs: " << (all_b ? "yes" : "no") << '\n';
  if (!labels.empty()) {
    s << "labels:\n";
    for (const auto& [label, n] : labels) s << "  " << label << ": " << n << '\n';
  }
  s << "facts by predicate:\n";
  for (const auto& [name, entry] : predicates) s << "  " << name << " (" << entry.first << "): " << entry.second << '\n';
  return s.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporal inductive logic reasoning over temporal hypergraphs", "tilr"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic planted-rule corpus");
  std::string gen_rule, gen_out;
  SynthSpec synth;
  gen->add_option("--rule", gen_rule, "rule file; its first rule is planted")->required();
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--pos", synth.num_pos, "positive graphs");
  gen->add_option("--neg", synth.num_neg, "negative graphs");
  gen->add_option("--noise", synth.noise_events, "noise events per graph");
  gen->add_option("--seed", synth.seed, "random seed");
  gen->add_option("--horizon", synth.horizon, "time horizon of planted intervals")->check(CLI::PositiveNumber);
  gen->add_option("--max-duration", synth.max_duration, "longest planted interval")->check(CLI::NonNegativeNumber);

  // mine
  auto* mine = app.add_subcommand("mine", "mine temporal rules from positive queries");
  QueryFlags mine_q;
  MiningFlags mine_m;
  std::string mine_out;
  mine_q.add_to(*mine);
  mine_m.add_to(*mine);
  mine->add_option("--out", mine_out, "rule file (default stdout)");

  // train
  auto* trn = app.add_subcommand("train", "mine with path consistency and fit rule weights");
  QueryFlags train_q;
  MiningFlags train_m;
  TrainingFlags train_t;
  std::string train_rules_out, train_model_out;
  train_q.add_to(*trn);
  train_m.add_to(*trn);
  train_t.add_to(*trn);
  trn->add_option("--rules-out", train_rules_out, "feature rule file")->required();
  trn->add_option("--model-out", train_model_out, "model file")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "rank held-out queries with the three method variants");
  QueryFlags eval_q;
  MiningFlags eval_m;
  TrainingFlags eval_t;
  double eval_fraction = 0.8;
  std::string eval_rules, eval_model;
  bool eval_json_only = false;
  eval_q.add_to(*ev);
  eval_m.add_to(*ev);
  eval_t.add_to(*ev);
  ev->add_option("--train-fraction", eval_fraction, "share of queries used for mining and training");
  ev->add_option("--rules", eval_rules, "score all queries with these rules and --model instead");
  ev->add_option("--model", eval_model, "model file from train");
  ev->add_flag("--json", eval_json_only, "print only the metrics records");

  // convert
  auto* conv = app.add_subcommand("convert", "convert graphs or a temporal KG");
  std::string conv_in, conv_out;
  bool conv_clique = false, conv_points = false, conv_tkg = false, conv_split = false;
  conv->add_option("--in", conv_in, "input file or directory")->required();
  conv->add_option("--out", conv_out, "output file, or directory for a corpus")->required();
  conv->add_flag("--clique-expand", conv_clique, "replace hyperedges by head x tail binary events");
  conv->add_flag("--time-points", conv_points, "collapse intervals to their start");
  conv->add_flag("--from-tkg", conv_tkg, "read tab-separated head/predicate/tail/time quadruples");
  conv->add_flag("--split-multi-tail", conv_split, "split multi-tail events into B-edges");

  // inspect
  auto* insp = app.add_subcommand("inspect", "print corpus statistics");
  std::string insp_in;
  bool insp_split = false;
  insp->add_option("input", insp_in, "hypergraph file or directory")->required();
  insp->add_flag("--split-multi-tail", insp_split, "split multi-tail events into B-edges");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      const auto rules = load_rules(gen_rule);
      if (rules.empty()) throw DataError(gen_rule + " holds no rule");
      synth.planted = rules.front();
      const SynthCorpus corpus = synth_generate(synth);
      save_corpus(gen_out, corpus.graphs);
      out << "wrote " << corpus.graphs.size() << " graphs to " << gen_out << '\n';
    } else if (*mine) {
      mine_q.require_task();
      const auto graphs = mine_q.load();
      const MineResult r = mine_all(graphs, mine_q, mine_m.params(), *parse_mode(mine_m.mode));
      write_text(mine_out, rules_text(r.rules), out);
      err << "rules " << r.rules.size() << ", walks " << r.diagnostics.walks.walks_run << ", kept "
          << r.diagnostics.walks.kept << ", failed coverage " << r.diagnostics.failed_coverage << '\n';
    } else if (*trn) {
      train_q.require_task();
      const auto graphs = train_q.load();
      MineParams params = train_m.params();
      params.top_k = train_t.features;
      const MineResult r = mine_all(graphs, train_q, params, MineMode::kMrbwPc);
      std::vector<TemporalRule> rules;
      std::vector<std::string> signatures;
      for (const auto& m : r.rules) {
        rules.push_back(m.rule);
        signatures.push_back(m.rule.signature());
      }
      std::vector<Query> pos, neg;
      const std::vector<std::string> targets = train_q.targets.empty() ? std::vector<std::string>{""} : train_q.targets;
      for (const auto& t : targets) {
        const QuerySet qs = train_q.queries(graphs, t);
        pos.insert(pos.end(), qs.positives.begin(), qs.positives.end());
        neg.insert(neg.end(), qs.negatives.begin(), qs.negatives.end());
      }
      const FeatureMatrix m = build_features(graphs, rules, pos, neg, train_t.kind(), params.eval_budget);
      const TrainResult tr = train(m, train_t.config(train_m.seed));
      std::ostringstream rules_s, model_s;
      write_rules(rules_s, rules);
      write_model(model_s, tr.params, signatures);
      write_text(train_rules_out, rules_s.str(), out);
      write_text(train_model_out, model_s.str(), out);
      char buf[128];
      std::snprintf(buf, sizeof(buf), "rules %zu, final loss %.6f, training accuracy %.4f\n", rules.size(),
                    tr.losses.back(), accuracy(m, tr.params));
      err << buf;
    } else if (*ev) {
      eval_q.require_task();
      const auto graphs = eval_q.load();
      const std::vector<std::string> targets = eval_q.targets.empty() ? std::vector<std::string>{""} : eval_q.targets;
      const TaskMode mode = eval_q.targets.empty() ? TaskMode::kLinkPrediction : TaskMode::kClassification;
      ExperimentReport report;
      if (!eval_rules.empty() || !eval_model.empty()) {
        if (eval_rules.empty() || eval_model.empty()) throw CLI::ValidationError("--rules and --model go together");
        const auto rules = load_rules(eval_rules);
        std::ifstream model_in(eval_model);
        if (!model_in) throw DataError("cannot open " + eval_model);
        const LoadedModel model = read_model(model_in);
        if (model.signatures.size() != rules.size()) throw DataError("model and rule file disagree in size");
        for (std::size_t i = 0; i < rules.size(); ++i) {
          if (rules[i].signature() != model.signatures[i]) throw DataError("model weight " + std::to_string(i) +
                                                                           " belongs to a different rule");
        }
        std::vector<Metrics> parts;
        for (const auto& t : targets) {
          const QuerySet qs = eval_q.queries(graphs, t);
          const Scorer scorer = [&](const Query& q) {
            return score(feature_row(graphs, rules, q, eval_t.kind()), model.params);
          };
          parts.push_back(rank_queries(qs.positives, qs.negatives, qs.mode, scorer));
        }
        Metrics avg;
        for (const auto& p : parts) {
          avg.mrr += p.mrr / static_cast<double>(parts.size());
          avg.hits3 += p.hits3 / static_cast<double>(parts.size());
          avg.hits10 += p.hits10 / static_cast<double>(parts.size());
          avg.n_queries += p.n_queries;
        }
        report.methods.push_back({"model", avg});
      } else {
        ExperimentConfig config;
        config.mine = eval_m.params();
        config.num_features = eval_t.features;
        config.train = eval_t.config(eval_m.seed);
        config.train_fraction = eval_fraction;
        config.seed = eval_m.seed;
        config.features = eval_t.kind();
        if (mode == TaskMode::kClassification) {
          report = run_classification(graphs, targets, config);
        } else {
          report = run_experiment(graphs, eval_q.queries(graphs, ""), config);
        }
      }
      for (const auto& m : report.methods) out << metrics_record(m.metrics, m.method, mode, eval_m.seed) << '\n';
      if (!eval_json_only) out << metrics_table(report);
    } else if (*conv) {
      if (conv_tkg && (conv_clique || conv_split)) {
        throw CLI::ValidationError("--from-tkg cannot be combined with --clique-expand or --split-multi-tail");
      }
      std::vector<TemporalHypergraph> graphs;
      if (conv_tkg) {
        std::ifstream in(conv_in);
        if (!in) throw DataError("cannot open " + conv_in);
        const auto snapshots = read_tkg(in, conv_in);
        graphs.push_back(temporal_kg_adapt(snapshots));
      } else if (fs::is_directory(conv_in)) {
        graphs = load_corpus(conv_in, LoadOptions{conv_split});
      } else {
        graphs.push_back(load_graph(conv_in, LoadOptions{conv_split}));
      }
      for (auto& g : graphs) {
        if (conv_clique) g = clique_expand(g);
        if (conv_points) g = to_time_points(g);
      }
      if (graphs.size() == 1 && !fs::is_directory(conv_in)) {
        save_graph(conv_out, graphs.front());
      } else {
        save_corpus(conv_out, graphs);
      }
    } else if (*insp) {
      std::vector<TemporalHypergraph> graphs;
      if (fs::is_directory(insp_in)) {
        graphs = load_corpus(insp_in, LoadOptions{insp_split});
      } else {
        graphs.push_back(load_graph(insp_in, LoadOptions{insp_split}));
      }
      out << inspect_text(graphs);
    }
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace tilr
