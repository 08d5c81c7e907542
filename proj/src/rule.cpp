#include "tilr/rule.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <unordered_map>

namespace tilr {
namespace {

std::string render_atom(const Atom& atom, const std::function<std::string(VarId)>& name) {
  std::string out = atom.predicate + "(";
  bool first = true;
  for (const auto* list : {&atom.head_vars, &atom.tail_vars}) {
    for (VarId v : *list) {
      if (!first) out += ',';
      out += name(v);
      first = false;
    }
  }
  out += ')';
  return out;
}

std::string plain_var(VarId v) { return "X" + std::to_string(v); }

std::string format_weight(double w) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

std::vector<std::string_view> split(std::string_view text, std::string_view sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto at = text.find(sep);
    out.push_back(text.substr(0, at));
    if (at == std::string_view::npos) break;
    text.remove_prefix(at + sep.size());
  }
  return out;
}

VarId parse_var(std::string_view token) {
  VarId v = 0;
  if (token.size() < 2 || token[0] != 'X') throw RuleError("bad variable '" + std::string(token) + "'");
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data() + 1, end, v);
  if (ec != std::errc() || ptr != end) throw RuleError("bad variable '" + std::string(token) + "'");
  return v;
}

Atom parse_atom(std::string_view text) {
  const auto open = text.find('(');
  if (open == std::string_view::npos || open == 0 || text.back() != ')') {
    throw RuleError("bad atom '" + std::string(text) + "'");
  }
  Atom atom;
  atom.predicate = std::string(text.substr(0, open));
  const auto inner = text.substr(open + 1, text.size() - open - 2);
  if (inner.empty()) return atom;
  std::vector<VarId> vars;
  for (auto token : split(inner, ",")) vars.push_back(parse_var(token));
  atom.tail_vars.push_back(vars.back());
  vars.pop_back();
  atom.head_vars = std::move(vars);
  return atom;
}

std::size_t parse_index(std::string_view token) {
  std::size_t v = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) throw RuleError("bad atom index '" + std::string(token) + "'");
  return v;
}

IANetwork unconstrained(std::size_t n) {
  std::vector<std::uint32_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = static_cast<std::uint32_t>(i);
  return IANetwork(NodeKind::kAtom, std::move(keys));
}

// Depth-first grounding search shared by match() and coverage_filter().
class Matcher {
 public:
  using Visit = std::function<bool(const Grounding&)>;  // true stops the search

  Matcher(const TemporalRule& rule, const TemporalHypergraph& graph, const Query& query,
          std::size_t budget)
      : rule_(rule), graph_(graph), query_(query), budget_(budget) {
    vars_.assign(rule.num_vars(), std::nullopt);
    used_.assign(graph.num_events(), 0);
    for (const Atom& a : rule.body) preds_.push_back(graph.find_predicate(a.predicate));
  }

  /// Returns true when the visitor stopped the search.
  bool run(const Visit& visit) {
    visit_ = &visit;
    const Atom& head = rule_.head;
    const bool bind_head = !query_.is_graph_query() &&
                           !(head.head_vars.empty() && head.tail_vars.empty());
    if (!bind_head) return search(0);
    if (head.head_vars.size() != query_.heads.size() ||
        head.tail_vars.size() != query_.tails.size()) {
      throw RuleError("query arity does not match rule head " + head.predicate);
    }
    return assign(head.head_vars, query_.heads, 0, 0, [&] {
      return assign(head.tail_vars, query_.tails, 0, 0, [&] { return search(0); });
    });
  }

  bool exhausted() const { return exhausted_; }
  std::size_t steps() const { return steps_; }

 private:
  bool assign(std::span<const VarId> vars, std::span<const EntityId> entities, std::size_t pos,
              std::uint64_t taken, const std::function<bool()>& next) {
    if (pos == vars.size()) return next();
    const VarId v = vars[pos];
    if (vars_[v]) {
      for (std::size_t i = 0; i < entities.size(); ++i) {
        if (!((taken >> i) & 1u) && entities[i] == *vars_[v]) {
          return assign(vars, entities, pos + 1, taken | (1ULL << i), next);
        }
      }
      return false;
    }
    for (std::size_t i = 0; i < entities.size(); ++i) {
      if ((taken >> i) & 1u) continue;
      vars_[v] = entities[i];
      const bool stop = assign(vars, entities, pos + 1, taken | (1ULL << i), next);
      vars_[v].reset();
      if (stop) return true;
    }
    return false;
  }

  bool search(std::size_t i) {
    if (i == rule_.body.size()) return (*visit_)(Grounding{vars_, chosen_});
    if (!preds_[i]) return false;
    const Atom& atom = rule_.body[i];
    for (EventId e : graph_.predicate_events(*preds_[i])) {
      if (++steps_ > budget_) {
        exhausted_ = true;
        return true;
      }
      if (used_[e.index()] || (query_.event && *query_.event == e)) continue;
      const Event& ev = graph_.event(e);
      if (ev.heads.size() != atom.head_vars.size() || ev.tails.size() != atom.tail_vars.size()) {
        continue;
      }
      if (ev.heads.size() > 64 || ev.tails.size() > 64) continue;
      bool temporal_ok = true;
      for (std::size_t j = 0; j < i && temporal_ok; ++j) {
        temporal_ok = rule_.time_net.at(j, i).contains(
            classify(graph_.event(chosen_[j]).interval, ev.interval));
      }
      if (!temporal_ok) continue;

      used_[e.index()] = 1;
      chosen_.push_back(e);
      const bool stop = assign(atom.head_vars, ev.heads, 0, 0, [&] {
        return assign(atom.tail_vars, ev.tails, 0, 0, [&] { return search(i + 1); });
      });
      chosen_.pop_back();
      used_[e.index()] = 0;
      if (stop) return true;
    }
    return false;
  }

  const TemporalRule& rule_;
  const TemporalHypergraph& graph_;
  const Query& query_;
  std::size_t budget_;
  std::vector<std::optional<PredicateId>> preds_;
  std::vector<std::optional<EntityId>> vars_;
  std::vector<EventId> chosen_;
  std::vector<char> used_;
  std::size_t steps_ = 0;
  bool exhausted_ = false;
  const Visit* visit_ = nullptr;
};

}  // namespace

std::size_t TemporalRule::num_vars() const {
  std::size_t n = 0;
  auto scan = [&](const Atom& a) {
    for (VarId v : a.head_vars) n = std::max<std::size_t>(n, v + 1);
    for (VarId v : a.tail_vars) n = std::max<std::size_t>(n, v + 1);
  };
  scan(head);
  for (const Atom& a : body) scan(a);
  return n;
}

std::string TemporalRule::signature() const {
  std::unordered_map<VarId, VarId> remap;
  auto name = [&](VarId v) {
    auto [it, inserted] = remap.try_emplace(v, static_cast<VarId>(remap.size()));
    return plain_var(it->second);
  };
  std::string out = render_atom(head, name) + " <-";
  for (std::size_t i = 0; i < body.size(); ++i) {
    out += i == 0 ? " " : " , ";
    out += render_atom(body[i], name);
  }
  return out;
}

std::string TemporalRule::to_string() const {
  std::string out = "w=" + format_weight(weight) + " " + render_atom(head, plain_var) + " <-";
  for (std::size_t i = 0; i < body.size(); ++i) {
    out += i == 0 ? " " : " , ";
    out += render_atom(body[i], plain_var);
  }
  std::string temporal;
  for (std::size_t i = 0; i < time_net.size(); ++i)
    for (std::size_t j = i + 1; j < time_net.size(); ++j) {
      if (time_net.at(i, j).is_full()) continue;
      if (!temporal.empty()) temporal += " ; ";
      temporal += std::to_string(i) + " " + time_net.at(i, j).to_string() + " " + std::to_string(j);
    }
  if (!temporal.empty()) out += " | " + temporal;
  return out;
}

TemporalRule TemporalRule::parse(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n' || line.back() == ' ')) {
    line.remove_suffix(1);
  }
  if (line.substr(0, 2) != "w=") throw RuleError("rule line must start with w=");
  const auto space = line.find(' ');
  if (space == std::string_view::npos) throw RuleError("rule line has no head");
  const std::string weight_text(line.substr(2, space - 2));
  char* end = nullptr;
  TemporalRule rule;
  rule.weight = std::strtod(weight_text.c_str(), &end);
  if (weight_text.empty() || end != weight_text.c_str() + weight_text.size()) {
    throw RuleError("bad weight '" + weight_text + "'");
  }
  line.remove_prefix(space + 1);

  const auto arrow = line.find(" <- ");
  if (arrow == std::string_view::npos) throw RuleError("rule line has no ' <- '");
  rule.head = parse_atom(line.substr(0, arrow));
  line.remove_prefix(arrow + 4);

  const auto bar = line.find(" | ");
  const auto body_text = line.substr(0, bar);
  for (auto atom_text : split(body_text, " , ")) rule.body.push_back(parse_atom(atom_text));
  rule.time_net = unconstrained(rule.body.size());

  if (bar != std::string_view::npos) {
    for (auto triple : split(line.substr(bar + 3), " ; ")) {
      const auto parts = split(triple, " ");
      if (parts.size() != 3) throw RuleError("bad temporal constraint '" + std::string(triple) + "'");
      const std::size_t i = parse_index(parts[0]);
      const std::size_t j = parse_index(parts[2]);
      const auto set = RelationSet::parse(parts[1]);
      if (!set) throw RuleError("bad relation set '" + std::string(parts[1]) + "'");
      if (i >= rule.body.size() || j >= rule.body.size() || i == j) {
        throw RuleError("temporal constraint refers to missing atoms");
      }
      rule.time_net.set(i, j, intersect(rule.time_net.at(i, j), *set));
    }
  }
  rule.validate();
  return rule;
}

void TemporalRule::validate() const {
  if (body.empty()) throw RuleError("rule body is empty");
  if (head.tail_vars.size() > 1) throw RuleError("rule head has more than one tail variable");
  if (time_net.size() != body.size() || time_net.kind() != NodeKind::kAtom) {
    throw RuleError("temporal network does not match the rule body");
  }
  std::vector<char> known(num_vars(), 0);
  for (VarId v : head.head_vars) known[v] = 1;
  for (VarId v : head.tail_vars) known[v] = 1;
  bool any_known = std::find(known.begin(), known.end(), 1) != known.end();
  for (std::size_t i = 0; i < body.size(); ++i) {
    const Atom& a = body[i];
    if (a.head_vars.empty() || a.tail_vars.size() != 1) {
      throw RuleError("body atom " + a.predicate + " must have heads and exactly one tail");
    }
    bool linked = !any_known;
    for (const auto* list : {&a.head_vars, &a.tail_vars})
      for (VarId v : *list) linked = linked || known[v];
    if (!linked) throw RuleError("body atom " + std::to_string(i) + " is not chained to earlier atoms");
    for (const auto* list : {&a.head_vars, &a.tail_vars})
      for (VarId v : *list) known[v] = 1;
    any_known = true;
  }
}

std::optional<TemporalRule> trace_to_rule(const TemporalHypergraph& graph,
                                          std::span<const EventId> trace,
                                          const std::optional<IANetwork>& time_net,
                                          const Query& query, const TraceToRuleOptions& options) {
  if (trace.empty()) throw RuleError("cannot lift an empty trace");

  // Order atoms so that each touches an already-known entity.
  std::set<EntityId> known(query.heads.begin(), query.heads.end());
  known.insert(query.tails.begin(), query.tails.end());
  std::vector<EventId> order;
  std::vector<char> placed(trace.size(), 0);
  auto earlier = [&](EventId a, EventId b) {
    const Interval& ia = graph.event(a).interval;
    const Interval& ib = graph.event(b).interval;
    return std::tie(ia.start, ia.end, a) < std::tie(ib.start, ib.end, b);
  };
  for (std::size_t round = 0; round < trace.size(); ++round) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      if (placed[i]) continue;
      const Event& ev = graph.event(trace[i]);
      bool touches = known.empty();
      for (const auto* list : {&ev.heads, &ev.tails})
        for (EntityId x : *list) touches = touches || known.contains(x);
      if (touches && (!best || earlier(trace[i], trace[*best]))) best = i;
    }
    if (!best) return std::nullopt;
    placed[*best] = 1;
    order.push_back(trace[*best]);
    const Event& ev = graph.event(trace[*best]);
    known.insert(ev.heads.begin(), ev.heads.end());
    known.insert(ev.tails.begin(), ev.tails.end());
  }

  std::map<EntityId, VarId> var_of;
  std::vector<EntityId> entity_of;
  auto var = [&](EntityId x) {
    auto [it, inserted] = var_of.try_emplace(x, static_cast<VarId>(entity_of.size()));
    if (inserted) entity_of.push_back(x);
    return it->second;
  };

  TemporalRule rule;
  rule.head.predicate = query.predicate;
  for (EntityId h : query.heads) rule.head.head_vars.push_back(var(h));
  for (EntityId t : query.tails) rule.head.tail_vars.push_back(var(t));
  for (EventId e : order) {
    const Event& ev = graph.event(e);
    Atom atom{graph.predicate_name(ev.predicate), {}, {}};
    for (EntityId h : ev.heads) atom.head_vars.push_back(var(h));
    for (EntityId t : ev.tails) atom.tail_vars.push_back(var(t));
    rule.body.push_back(std::move(atom));
  }

  rule.time_net = unconstrained(order.size());
  if (time_net) {
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b) {
        const std::size_t pa = time_net->find(order[a].value);
        const std::size_t pb = time_net->find(order[b].value);
        if (pa < time_net->size() && pb < time_net->size()) rule.time_net.set(a, b, time_net->at(pa, pb));
      }
  }

  if (!options.class_predicates.empty()) {
    const std::size_t num_vars = entity_of.size();
    for (VarId v = 0; v < num_vars; ++v) {
      const bool has_label = std::any_of(rule.body.begin(), rule.body.end(), [&](const Atom& a) {
        return options.class_predicates.contains(a.predicate) && a.head_vars == std::vector<VarId>{v} &&
               a.tail_vars == std::vector<VarId>{v};
      });
      if (has_label) continue;
      for (EventId e : graph.head_events(entity_of[v])) {
        const Event& ev = graph.event(e);
        if (!ev.is_unary() || !options.class_predicates.contains(graph.predicate_name(ev.predicate))) {
          continue;
        }
        if (std::find(order.begin(), order.end(), e) != order.end()) continue;
        rule.body.push_back({graph.predicate_name(ev.predicate), {v}, {v}});
        rule.time_net.add_node(static_cast<std::uint32_t>(rule.body.size() - 1));
        break;
      }
    }
  }
  return rule;
}

MatchResult match(const TemporalRule& rule, const TemporalHypergraph& graph, const Query& query,
                  std::size_t budget) {
  MatchResult result;
  Matcher matcher(rule, graph, query, budget);
  matcher.run([&](const Grounding& g) {
    result.matched = true;
    result.grounding = g;
    return true;
  });
  result.exhausted = matcher.exhausted();
  result.steps = matcher.steps();
  if (result.exhausted) result.matched = false;
  return result;
}

bool evaluate(const TemporalRule& rule, const TemporalHypergraph& graph, const Query& query,
              std::size_t budget) {
  return match(rule, graph, query, budget).matched;
}

Interval coverage_span(const Grounding& grounding, const TemporalHypergraph& graph) {
  if (grounding.atoms.empty()) throw RuleError("empty grounding has no span");
  Interval out = graph.event(grounding.atoms.front()).interval;
  for (EventId e : grounding.atoms) {
    const Interval& t = graph.event(e).interval;
    out.start = std::min(out.start, t.start);
    out.end = std::max(out.end, t.end);
  }
  return out;
}

bool coverage_filter(const TemporalRule& rule, const TemporalHypergraph& graph, double rho,
                     std::size_t budget) {
  if (!(rho > 0.0 && rho <= 1.0)) throw RuleError("rho must lie in (0, 1]");
  const double needed = rho * static_cast<double>(graph.span().duration());
  bool covered = false;
  const Query whole_graph;
  Matcher matcher(rule, graph, whole_graph, budget);
  matcher.run([&](const Grounding& g) {
    covered = static_cast<double>(coverage_span(g, graph).duration()) >= needed;
    return covered;
  });
  return covered && !matcher.exhausted();
}

std::string_view mode_name(MineMode mode) {
  return mode == MineMode::kMrbw ? "mrbw" : "mrbw-pc";
}

std::optional<MineMode> parse_mode(std::string_view name) {
  if (name == "mrbw") return MineMode::kMrbw;
  if (name == "mrbw-pc") return MineMode::kMrbwPc;
  return std::nullopt;
}

MineResult mine_rules(std::span<const TemporalHypergraph> graphs,
                      std::span<const Query> positives, const MineParams& params, MineMode mode) {
  struct Aggregate {
    TemporalRule rule;
    std::size_t count = 0;
  };
  std::map<std::string, Aggregate> by_signature;
  MineResult result;
  bool graph_queries = !positives.empty();

  for (std::size_t qi = 0; qi < positives.size(); ++qi) {
    const Query& q = positives[qi];
    graph_queries = graph_queries && q.is_graph_query();
    const TemporalHypergraph& graph = graphs[q.graph];
    WalkParams walk = params.walk;
    walk.seed = walk_seed(params.walk.seed, qi);
    walk.record_temporal = mode == MineMode::kMrbwPc;
    WalkResult walks = mrbw(graph, q, walk);
    result.diagnostics.walks += walks.diagnostics;

    for (const WalkTrace& t : walks.traces) {
      const std::size_t first_len = q.is_graph_query() && params.include_prefixes ? 1 : t.trace.size();
      for (std::size_t len = first_len; len <= t.trace.size(); ++len) {
        auto rule = trace_to_rule(graph, std::span(t.trace).first(len), t.time_net, q,
                                  params.rule_options);
        if (!rule) {
          ++result.diagnostics.disconnected;
          continue;
        }
        if (mode == MineMode::kMrbw) rule->time_net = unconstrained(rule->body.size());
        std::string sig = rule->signature();
        auto [it, inserted] = by_signature.try_emplace(std::move(sig));
        Aggregate& agg = it->second;
        if (inserted) {
          agg.rule = std::move(*rule);
        } else if (mode == MineMode::kMrbwPc) {
          agg.rule.time_net = generalize(agg.rule.time_net, rule->time_net);
        }
        ++agg.count;
      }
    }
  }
  result.diagnostics.candidates = by_signature.size();

  std::vector<std::size_t> positive_graphs;
  for (const Query& q : positives) positive_graphs.push_back(q.graph);
  std::sort(positive_graphs.begin(), positive_graphs.end());
  positive_graphs.erase(std::unique(positive_graphs.begin(), positive_graphs.end()),
                        positive_graphs.end());

  for (auto& [sig, agg] : by_signature) {
    if (params.apply_coverage && graph_queries) {
      const bool covers = std::all_of(positive_graphs.begin(), positive_graphs.end(), [&](std::size_t g) {
        return coverage_filter(agg.rule, graphs[g], params.rho, params.eval_budget);
      });
      if (!covers) {
        ++result.diagnostics.failed_coverage;
        continue;
      }
    }
    agg.rule.weight = static_cast<double>(agg.count);
    result.rules.push_back({std::move(agg.rule), agg.count});
  }
  // by_signature iterates in signature order, so a stable sort on count
  // leaves ties ordered lexicographically.
  std::stable_sort(result.rules.begin(), result.rules.end(),
                   [](const MinedRule& a, const MinedRule& b) { return a.count > b.count; });
  if (params.top_k > 0 && result.rules.size() > params.top_k) result.rules.resize(params.top_k);
  return result;
}

}  // namespace tilr
