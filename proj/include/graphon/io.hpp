#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "graphon/graphon.hpp"
#include "graphon/sampler.hpp"

namespace graphon::io {

// Step graphon JSON: {"n": blocks, "values": row-major n*n array}.
nlohmann::json step_to_json(const StepGraphon& w);
StepGraphon step_from_json(const nlohmann::json& j);

// Step kernel JSON: same shape, entries unrestricted.
nlohmann::json kernel_to_json(const StepKernel& k);

// Graphon JSON: step graphons use the step shape; families use
// {"family": name, ...parameters}.
nlohmann::json graphon_to_json(const Graphon& w);

// Parse a graphon argument: either an inline family spec
//   constant:p=0.5
//   bipartite:alpha=0.25,p=0.8
//   smallworld:q=0.8,p=0.2,r=0.25
// or a path to a step-graphon JSON file.
Graphon parse_graphon_spec(const std::string& spec);

StepGraphon load_step_graphon(const std::string& path);
void save_step_graphon(const StepGraphon& w, const std::string& path);

// Adjacency matrix text: n lines of n comma-separated 0/1 entries.
void write_adjacency_matrix(std::ostream& os, const AdjacencyMatrix& g);
// Edge list text: header line "n=<vertices>", then one "i,j" line per edge
// with 1-based i < j.  The header keeps trailing isolated vertices; files
// without it infer n from the largest index.
void write_edge_list(std::ostream& os, const AdjacencyMatrix& g);
// Read either format (auto-detected).
AdjacencyMatrix read_adjacency(std::istream& is);

// Shortest round-trippable decimal form of a double (%.17g pruned).
std::string format_double(double v);

}  // namespace graphon::io
