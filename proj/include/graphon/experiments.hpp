#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace graphon {

// Declarative description of one experiment run.  `name` selects the runner:
//   convergence             spectra of sampled graphs against the reference
//   vague-diagnostic        interval ranks/distances of sampled vs projected
//   bipartite-switching     Laplacian clusters of the tilted bipartite family
//   smallworld-perturbation tilted circulant eigenvalues vs first order
//   ldp-bruteforce          exact small-n tail probabilities vs the rate
struct ExperimentSpec {
    std::string name;
    std::string model;  // graphon spec string (family form or step-file path)
    std::vector<int> n_list;
    std::vector<std::uint64_t> seeds;
    std::vector<double> deltas;
    int window = 3;
    int k_max = 3;
    int restarts = 32;
    int mc_samples = 0;
    std::uint64_t mc_seed = 1;
};

ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);
nlohmann::json experiment_spec_to_json(const ExperimentSpec& s);

// One output record.  Dimension fields are kept as strings so "not
// applicable" is an empty cell rather than a sentinel number.
struct ResultRow {
    std::string n;
    std::string seed;
    std::string delta;
    std::string index;
    std::string metric;
    double value;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<ResultRow> rows;
    double wall_clock_seconds = 0.0;
};

ExperimentResult run_convergence(const ExperimentSpec& spec);
ExperimentResult run_vague_diagnostic(const ExperimentSpec& spec);
ExperimentResult run_bipartite_switching(const ExperimentSpec& spec);
ExperimentResult run_smallworld_perturbation(const ExperimentSpec& spec);
ExperimentResult run_ldp_bruteforce(const ExperimentSpec& spec);

// Dispatch on spec.name.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Write <out_dir>/<name>.csv (deterministic: identical spec and seeds give a
// byte-identical file) and <out_dir>/manifest.json (spec echo, tool version,
// wall clock).  Creates out_dir if needed; never writes anywhere else.
void write_experiment(const ExperimentResult& result, const std::string& out_dir);

}  // namespace graphon
