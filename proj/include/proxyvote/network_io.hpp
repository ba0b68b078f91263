#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "proxyvote/delegation.hpp"
#include "proxyvote/simulation.hpp"
#include "proxyvote/trust_network.hpp"

// Text encodings. All files are comma-separated with a header row, end in a
// newline, and print reals with 17 significant digits so that load(save(x))
// reproduces x bit for bit.
//
//   nodes    id,opinion                      one row per node, sorted by id
//   edges    source,target,trust             raw trust, sorted by (source, target)
//   weights  id,weight                       preceded by "# key=value" metadata lines
//   results  active_size,trials,mean_err_traditional,stderr_traditional,
//            mean_err_weighted,stderr_weighted,stranded_fraction

namespace proxyvote {

/// `value` printed with 17 significant digits (%.17g); parses back exactly.
std::string format_real(double value);

/// Parses nodes and edges without validating or normalizing. Malformed rows,
/// unknown node ids and non-dense node numbering raise ParseError.
TrustNetwork parse_network(std::istream& nodes, std::istream& edges,
                           const std::string& nodes_name = "nodes",
                           const std::string& edges_name = "edges");

/// Parse, validate (ValidationError lists every violation) and normalize.
/// Dangling nodes are reported on `diagnostics` when given.
TrustNetwork load_network(const std::filesystem::path& nodes_path,
                          const std::filesystem::path& edges_path,
                          std::ostream* diagnostics = nullptr);

/// Unvalidated load, for the `validate` command.
TrustNetwork read_network_unchecked(const std::filesystem::path& nodes_path,
                                    const std::filesystem::path& edges_path);

void write_network(const TrustNetwork& network, std::ostream& nodes, std::ostream& edges);
void save_network(const TrustNetwork& network, const std::filesystem::path& nodes_path,
                  const std::filesystem::path& edges_path);

void write_weights(const WeightVector& weights, std::ostream& out);
WeightVector read_weights(std::istream& in, const std::string& name = "weights");
void save_weights(const WeightVector& weights, const std::filesystem::path& path);
WeightVector load_weights(const std::filesystem::path& path);

void write_results(const std::vector<ResultRow>& rows, std::ostream& out);
std::vector<ResultRow> read_results(std::istream& in, const std::string& name = "results");
void save_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::vector<ResultRow> load_results(const std::filesystem::path& path);

/// "3,0,7" -> ids. Empty items or non-integers raise InvalidInput.
std::vector<NodeId> parse_id_list(std::string_view text);
/// One id per line; blank lines ignored.
std::vector<NodeId> read_id_file(const std::filesystem::path& path);

}  // namespace proxyvote
