#include "tilr/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace tilr {
namespace fs = std::filesystem;
namespace {

constexpr std::string_view kHeader = "#thg v1";
constexpr std::string_view kLabelPrefix = "#label ";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto at = text.find(sep);
    out.push_back(text.substr(0, at));
    if (at == std::string_view::npos) break;
    text.remove_prefix(at + 1);
  }
  return out;
}

std::vector<std::string> parse_names(std::string_view field, const std::string& source,
                                     std::size_t line, const char* role) {
  std::vector<std::string> names;
  if (trim(field).empty()) throw ParseError(source, line, std::string("empty ") + role + " set");
  for (auto token : split(field, ',')) {
    const auto name = trim(token);
    if (name.empty()) throw ParseError(source, line, std::string("empty name in ") + role + " set");
    names.emplace_back(name);
  }
  return names;
}

Tick parse_tick(std::string_view token, const std::string& source, std::size_t line) {
  Tick v = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(source, line, "bad time value '" + std::string(token) + "'");
  }
  return v;
}

void require_writable_name(const std::string& name) {
  const bool bad = name.empty() || name.find_first_of("|,\n\r") != std::string::npos ||
                   trim(name) != name || name.front() == '#';
  if (bad) throw GraphError("name '" + name + "' cannot be written to a hypergraph file");
}

std::vector<std::string> names_of(const TemporalHypergraph& g, std::span<const EntityId> ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (EntityId id : ids) out.push_back(g.entity_name(id));
  return out;
}

TemporalHypergraph empty_like(const TemporalHypergraph& graph) {
  TemporalHypergraph out;
  if (graph.label()) out.set_label(*graph.label());
  return out;
}

}  // namespace

TemporalHypergraph read_graph(std::istream& in, const LoadOptions& options,
                              const std::string& source) {
  TemporalHypergraph graph;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != kHeader) throw ParseError(source, line_no, "expected '#thg v1' header");
      seen_header = true;
      continue;
    }
    if (line.front() == '#') {
      if (line.substr(0, kLabelPrefix.size()) == kLabelPrefix) {
        graph.set_label(std::string(trim(line.substr(kLabelPrefix.size()))));
      }
      continue;
    }

    const auto fields = split(line, '|');
    if (fields.size() != 4) throw ParseError(source, line_no, "expected 4 '|'-separated fields");
    const std::string predicate(trim(fields[0]));
    if (predicate.empty()) throw ParseError(source, line_no, "empty predicate");
    const auto heads = parse_names(fields[1], source, line_no, "head");
    const auto tails = parse_names(fields[2], source, line_no, "tail");

    std::istringstream times{std::string(trim(fields[3]))};
    std::string start_text, end_text, extra;
    if (!(times >> start_text >> end_text) || (times >> extra)) {
      throw ParseError(source, line_no, "expected '<start> <end>'");
    }
    const Interval interval{parse_tick(start_text, source, line_no), parse_tick(end_text, source, line_no)};

    try {
      if (tails.size() > 1 && !options.split_multi_tail) {
        throw GraphError("event has " + std::to_string(tails.size()) +
                         " tails; only B-edges are accepted without tail splitting");
      }
      if (tails.size() > 1) {
        for (const auto& t : tails) graph.add_event(predicate, heads, std::span(&t, 1), interval);
      } else {
        graph.add_event(predicate, heads, tails, interval);
      }
    } catch (const GraphError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  if (!seen_header) throw ParseError(source, line_no, "missing '#thg v1' header");
  return graph;
}

TemporalHypergraph load_graph(const fs::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_graph(in, options, path.string());
}

void write_graph(std::ostream& out, const TemporalHypergraph& graph) {
  out << kHeader << '\n';
  if (graph.label()) out << kLabelPrefix << *graph.label() << '\n';
  auto join = [&](std::span<const EntityId> ids) {
    // Head and tail lists are sets; sort by name so the text does not depend on id order.
    std::vector<std::string> names;
    for (EntityId id : ids) {
      names.push_back(graph.entity_name(id));
      require_writable_name(names.back());
    }
    std::sort(names.begin(), names.end());
    std::string s;
    for (const auto& name : names) {
      if (!s.empty()) s += ',';
      s += name;
    }
    return s;
  };
  for (const Event& e : graph.events()) {
    const std::string& predicate = graph.predicate_name(e.predicate);
    require_writable_name(predicate);
    out << predicate << " | " << join(e.heads) << " | " << join(e.tails) << " | "
        << e.interval.start << ' ' << e.interval.end << '\n';
  }
}

void save_graph(const fs::path& path, const TemporalHypergraph& graph) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_graph(out, graph);
}

std::vector<TemporalHypergraph> load_corpus(const fs::path& dir, const LoadOptions& options) {
  if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".thg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<TemporalHypergraph> graphs;
  for (const auto& f : files) graphs.push_back(load_graph(f, options));
  return graphs;
}

void save_corpus(const fs::path& dir, std::span<const TemporalHypergraph> graphs) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "graph_%04zu.thg", i);
    save_graph(dir / name, graphs[i]);
  }
}

TemporalHypergraph clique_expand(const TemporalHypergraph& graph) {
  TemporalHypergraph out = empty_like(graph);
  for (const Event& e : graph.events()) {
    const std::string& predicate = graph.predicate_name(e.predicate);
    for (EntityId h : e.heads)
      for (EntityId t : e.tails) {
        out.add_event(predicate, {graph.entity_name(h)}, {graph.entity_name(t)}, e.interval);
      }
  }
  return out;
}

TemporalHypergraph to_time_points(const TemporalHypergraph& graph) {
  TemporalHypergraph out = empty_like(graph);
  for (const Event& e : graph.events()) {
    out.add_event(graph.predicate_name(e.predicate), names_of(graph, e.heads), names_of(graph, e.tails),
                  Interval{e.interval.start, e.interval.start});
  }
  return out;
}

TemporalHypergraph temporal_kg_adapt(std::span<const KgSnapshot> snapshots) {
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    if (snapshots[i].time <= snapshots[i - 1].time) {
      throw GraphError("snapshots must have strictly increasing time points");
    }
  }
  auto instance = [](const std::string& entity, Tick t) { return entity + "@" + std::to_string(t); };

  TemporalHypergraph out;
  std::vector<std::string> previous;
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    const KgSnapshot& snap = snapshots[i];
    std::vector<std::string> present;
    auto note = [&](const std::string& x) {
      if (std::find(present.begin(), present.end(), x) == present.end()) present.push_back(x);
    };
    for (const KgTriple& t : snap.triples) {
      out.add_event(t.predicate, {instance(t.head, snap.time)}, {instance(t.tail, snap.time)},
                    Interval{snap.time, snap.time});
      note(t.head);
      note(t.tail);
    }
    if (i > 0) {
      const Tick before = snapshots[i - 1].time;
      for (const std::string& x : previous) {
        if (std::find(present.begin(), present.end(), x) == present.end()) continue;
        out.add_event(kSameEntityPredicate, {instance(x, before)}, {instance(x, snap.time)},
                      Interval{before, snap.time});
      }
    }
    previous = std::move(present);
  }
  return out;
}

std::vector<KgSnapshot> read_tkg(std::istream& in, const std::string& source) {
  std::map<Tick, std::vector<KgTriple>> by_time;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 4) throw ParseError(source, line_no, "expected head<TAB>predicate<TAB>tail<TAB>time");
    KgTriple triple{std::string(trim(fields[0])), std::string(trim(fields[1])), std::string(trim(fields[2]))};
    if (triple.head.empty() || triple.predicate.empty() || triple.tail.empty()) {
      throw ParseError(source, line_no, "empty field");
    }
    by_time[parse_tick(trim(fields[3]), source, line_no)].push_back(std::move(triple));
  }
  std::vector<KgSnapshot> out;
  for (auto& [t, triples] : by_time) out.push_back({t, std::move(triples)});
  return out;
}

std::vector<TemporalRule> read_rules(std::istream& in, const std::string& source) {
  std::vector<TemporalRule> rules;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    try {
      rules.push_back(TemporalRule::parse(line));
    } catch (const RuleError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return rules;
}

void write_rules(std::ostream& out, std::span<const TemporalRule> rules) {
  for (const TemporalRule& r : rules) out << r.to_string() << '\n';
}

}  // namespace tilr
