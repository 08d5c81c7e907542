#pragma once

// Text formats and graph converters.
//
// Hypergraph file (UTF-8, one graph per file):
//   #thg v1
//   #label <string>            optional
//   <predicate> | <h1,h2,...> | <t1,...> | <start> <end>
// Other lines starting with '#' are comments. '|' and ',' are reserved.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tilr/hypergraph.hpp"
#include "tilr/rule.hpp"

namespace tilr {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LoadOptions {
  /// Turn an event with k tails into k B-edges; otherwise such events fail.
  bool split_multi_tail = false;
};

TemporalHypergraph read_graph(std::istream& in, const LoadOptions& options = {},
                              const std::string& source = "<stream>");
TemporalHypergraph load_graph(const std::filesystem::path& path, const LoadOptions& options = {});
void write_graph(std::ostream& out, const TemporalHypergraph& graph);
void save_graph(const std::filesystem::path& path, const TemporalHypergraph& graph);

/// Every *.thg file of a directory, in file name order.
std::vector<TemporalHypergraph> load_corpus(const std::filesystem::path& dir,
                                            const LoadOptions& options = {});
/// Writes graph_0000.thg, graph_0001.thg, ... into dir.
void save_corpus(const std::filesystem::path& dir, std::span<const TemporalHypergraph> graphs);

/// One binary event per head/tail pair; binary and unary events unchanged.
TemporalHypergraph clique_expand(const TemporalHypergraph& graph);

/// Collapses every interval [s, e] to the point [s, s].
TemporalHypergraph to_time_points(const TemporalHypergraph& graph);

struct KgTriple {
  std::string head;
  std::string predicate;
  std::string tail;
};

struct KgSnapshot {
  Tick time = 0;
  std::vector<KgTriple> triples;
};

/// Temporal KG to temporal hypergraph: entity x at time τ becomes the
/// instance "x@τ", each triple a point event, and an IsSameEnt event links
/// the instances of an entity in consecutive snapshots over [τ_i, τ_{i+1}].
TemporalHypergraph temporal_kg_adapt(std::span<const KgSnapshot> snapshots);

inline constexpr std::string_view kSameEntityPredicate = "IsSameEnt";

/// Tab-separated "head predicate tail time" lines grouped into snapshots.
std::vector<KgSnapshot> read_tkg(std::istream& in, const std::string& source = "<stream>");

std::vector<TemporalRule> read_rules(std::istream& in, const std::string& source = "<stream>");
void write_rules(std::ostream& out, std::span<const TemporalRule> rules);

}  // namespace tilr
