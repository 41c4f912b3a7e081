// graphonlab: sample W-random graphs, compute spectra and cut metrics of step
// graphons, and solve the exponential-tilt problems behind the rare-event
// experiments.  All randomness is counter-based: a (seed, i, j) triple always
// yields the same coin on every machine.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "graphon/cut_metric.hpp"
#include "graphon/errors.hpp"
#include "graphon/experiments.hpp"
#include "graphon/graphon.hpp"
#include "graphon/io.hpp"
#include "graphon/ldp.hpp"
#include "graphon/sampler.hpp"
#include "graphon/spectral.hpp"
#include "graphon/version.hpp"

namespace {

using nlohmann::json;
using namespace graphon;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot write output file: " + out_path);
    out << text;
}

json rate_to_json(const RateValue& r) {
    json j;
    j["infinite"] = r.infinite;
    j["value"] = r.infinite ? json() : json(r.value);
    return j;
}

StepGraphon as_step_at(const Graphon& w, int n, const char* what) {
    if (w.is_step() && n == 0) return w.as_step();
    if (n == 0) {
        throw ValidationError(std::string(what) +
                              ": family graphons need --n to pick a step resolution");
    }
    return project_to_step(w, n);
}

OperatorKind parse_operator(const std::string& s) {
    if (s == "kernel") return OperatorKind::kernel;
    if (s == "laplacian") return OperatorKind::laplacian;
    throw ValidationError("operator must be \"kernel\" or \"laplacian\"");
}

std::vector<VagueInterval> parse_intervals(const std::string& s) {
    std::vector<VagueInterval> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto comma = item.find(',');
        if (comma == std::string::npos) {
            throw ValidationError("intervals must look like \"a1,b1;a2,b2\", got \"" + item + "\"");
        }
        try {
            out.push_back({std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))});
        } catch (const std::exception&) {
            throw ValidationError("bad interval endpoints in \"" + item + "\"");
        }
    }
    if (out.empty()) throw ValidationError("no intervals given");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ValidationError("bad number \"" + item + "\" in list");
        }
    }
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"graphon sampling, spectra, cut metrics, and rare-event tilts"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    // ---- sample ----
    auto* cmd_sample = app.add_subcommand("sample", "draw a W-random graph");
    std::string sample_graphon, sample_out, sample_format = "matrix";
    int sample_n = 0;
    std::uint64_t sample_seed = 0;
    cmd_sample->add_option("--graphon,-g", sample_graphon, "graphon spec or step JSON path")
        ->required();
    cmd_sample->add_option("--n", sample_n, "vertex count")->required();
    cmd_sample->add_option("--seed", sample_seed, "sampling seed");
    cmd_sample->add_option("--format", sample_format, "matrix|edges");
    cmd_sample->add_option("--out", sample_out, "output path (default stdout)");

    // ---- spectrum ----
    auto* cmd_spectrum = app.add_subcommand("spectrum", "two-sided eigenvalue table");
    std::string spec_graphon, spec_out, spec_operator = "kernel";
    int spec_n = 0, spec_window = 10;
    bool spec_closed = false;
    cmd_spectrum->add_option("--graphon,-g", spec_graphon, "graphon spec or step JSON path")
        ->required();
    cmd_spectrum->add_option("--operator", spec_operator, "kernel|laplacian");
    cmd_spectrum->add_option("--n", spec_n, "step resolution for family graphons");
    cmd_spectrum->add_option("--window", spec_window, "indices 1..window and -1..-window");
    cmd_spectrum->add_flag("--closed-form", spec_closed, "use the family closed form");
    cmd_spectrum->add_option("--out", spec_out, "output path (default stdout)");

    // ---- measure ----
    auto* cmd_measure = app.add_subcommand("measure", "interval ranks and projection distances");
    std::string meas_a, meas_b, meas_out, meas_operator = "kernel", meas_intervals;
    int meas_na = 0, meas_nb = 0;
    cmd_measure->add_option("--a", meas_a, "first graphon spec")->required();
    cmd_measure->add_option("--b", meas_b, "reference graphon spec (optional)");
    cmd_measure->add_option("--na", meas_na, "step resolution for --a families");
    cmd_measure->add_option("--nb", meas_nb, "step resolution for --b families");
    cmd_measure->add_option("--operator", meas_operator, "kernel|laplacian");
    cmd_measure->add_option("--intervals", meas_intervals, "semicolon-separated a,b pairs")
        ->required();
    cmd_measure->add_option("--out", meas_out, "output path (default stdout)");

    // ---- cutnorm ----
    auto* cmd_cutnorm = app.add_subcommand("cutnorm", "cut norm of a difference of graphons");
    std::string cn_a, cn_b, cn_mode = "exact", cn_out;
    int cn_n = 0, cn_restarts = 32;
    cmd_cutnorm->add_option("--a", cn_a, "first graphon spec")->required();
    cmd_cutnorm->add_option("--b", cn_b, "second graphon spec")->required();
    cmd_cutnorm->add_option("--mode", cn_mode, "exact|heuristic");
    cmd_cutnorm->add_option("--restarts", cn_restarts, "heuristic restarts");
    cmd_cutnorm->add_option("--n", cn_n, "project both graphons to n blocks first");
    cmd_cutnorm->add_option("--out", cn_out, "output path (default stdout)");

    // ---- cutdist ----
    auto* cmd_cutdist = app.add_subcommand("cutdist", "cut distance over block relabelings");
    std::string cd_a, cd_b, cd_mode = "exact", cd_out;
    int cd_n = 0, cd_restarts = 32;
    cmd_cutdist->add_option("--a", cd_a, "first graphon spec")->required();
    cmd_cutdist->add_option("--b", cd_b, "second graphon spec")->required();
    cmd_cutdist->add_option("--mode", cd_mode, "exact|heuristic");
    cmd_cutdist->add_option("--restarts", cd_restarts, "heuristic restarts");
    cmd_cutdist->add_option("--n", cd_n, "project both graphons to n blocks first");
    cmd_cutdist->add_option("--out", cd_out, "output path (default stdout)");

    // ---- rate ----
    auto* cmd_rate = app.add_subcommand("rate", "relative-entropy rate between graphons");
    std::string rate_v, rate_w, rate_out;
    int rate_n = 0;
    cmd_rate->add_option("--v", rate_v, "perturbed graphon spec")->required();
    cmd_rate->add_option("--w", rate_w, "reference graphon spec")->required();
    cmd_rate->add_option("--n", rate_n, "project both graphons to n blocks first");
    cmd_rate->add_option("--out", rate_out, "output path (default stdout)");

    // ---- tilt ----
    auto* cmd_tilt = app.add_subcommand("tilt", "edge-density tilt solve");
    std::string tilt_w, tilt_out, tilt_verify;
    double tilt_delta = 0.0;
    int tilt_grid = 16;
    bool tilt_expansion = false;
    cmd_tilt->add_option("--w", tilt_w, "graphon spec")->required();
    cmd_tilt->add_option("--delta", tilt_delta, "density increment")->required();
    cmd_tilt->add_flag("--expansion", tilt_expansion, "include the first-order direction");
    cmd_tilt->add_option("--grid", tilt_grid, "direction grid for family graphons");
    cmd_tilt->add_option("--verify-order", tilt_verify,
                         "comma-separated deltas for the expansion-order check");
    cmd_tilt->add_option("--out", tilt_out, "output path (default stdout)");

    // ---- bruteldp ----
    auto* cmd_brute = app.add_subcommand("bruteldp", "exact small-n tail probability");
    std::string brute_w, brute_out;
    int brute_n = 0, brute_mc = 0;
    double brute_delta = 0.0;
    std::uint64_t brute_seed = 1;
    cmd_brute->add_option("--w", brute_w, "graphon spec")->required();
    cmd_brute->add_option("--n", brute_n, "vertex count (n(n-1)/2 <= 15)")->required();
    cmd_brute->add_option("--delta", brute_delta, "density increment")->required();
    cmd_brute->add_option("--mc", brute_mc, "Monte Carlo cross-check samples");
    cmd_brute->add_option("--seed", brute_seed, "Monte Carlo seed");
    cmd_brute->add_option("--out", brute_out, "output path (default stdout)");

    // ---- experiment ----
    auto* cmd_exp = app.add_subcommand("experiment", "run a declarative experiment");
    std::string exp_name, exp_config, exp_out;
    cmd_exp->add_option("--name", exp_name, "experiment name (may also come from the config)");
    cmd_exp->add_option("--config", exp_config, "experiment config JSON")->required();
    cmd_exp->add_option("--out", exp_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;  // bad invocation is a validation failure
    }

    if (*cmd_sample) {
        const Graphon w = io::parse_graphon_spec(sample_graphon);
        const AdjacencyMatrix g = sample(w, {sample_seed, sample_n});
        std::ostringstream os;
        if (sample_format == "matrix") {
            io::write_adjacency_matrix(os, g);
        } else if (sample_format == "edges") {
            io::write_edge_list(os, g);
        } else {
            throw ValidationError("sample: format must be \"matrix\" or \"edges\"");
        }
        emit(os.str(), sample_out);
        return 0;
    }

    if (*cmd_spectrum) {
        const Graphon w = io::parse_graphon_spec(spec_graphon);
        const OperatorKind op = parse_operator(spec_operator);
        SpectralDecomposition d;
        if (spec_closed) {
            d = closed_form_spectrum(w, op, spec_window);
        } else {
            const StepGraphon s = as_step_at(w, spec_n, "spectrum");
            d = op == OperatorKind::kernel ? decompose_kernel(s) : decompose_laplacian(s);
        }
        std::ostringstream os;
        os << "j,lambda\n";
        for (int j = 1; j <= spec_window; ++j) {
            os << j << ',' << io::format_double(d.eigenvalue(j)) << '\n';
        }
        for (int j = -1; j >= -spec_window; --j) {
            os << j << ',' << io::format_double(d.eigenvalue(j)) << '\n';
        }
        emit(os.str(), spec_out);
        return 0;
    }

    if (*cmd_measure) {
        const OperatorKind op = parse_operator(meas_operator);
        const auto intervals = parse_intervals(meas_intervals);
        const auto measure_of = [op](const std::string& spec, int n) {
            const Graphon w = io::parse_graphon_spec(spec);
            if (!w.is_step() && n == 0) {
                return to_spectral_measure(closed_form_spectrum(w, op, 16));
            }
            const StepGraphon s = w.is_step() && n == 0
                                      ? w.as_step()
                                      : project_to_step(w, n);
            return to_spectral_measure(op == OperatorKind::kernel ? decompose_kernel(s)
                                                                  : decompose_laplacian(s));
        };
        const SpectralMeasure ma = measure_of(meas_a, meas_na);
        std::ostringstream os;
        if (meas_b.empty()) {
            os << "a,b,rank\n";
            for (const auto& iv : intervals) {
                const auto p = project_interval(ma, iv.a, iv.b);
                os << io::format_double(iv.a) << ',' << io::format_double(iv.b) << ',' << p.rank
                   << '\n';
            }
        } else {
            const SpectralMeasure mb = measure_of(meas_b, meas_nb);
            os << "a,b,rank_a,rank_b,distance\n";
            for (const auto& rep : vague_diagnostic(ma, mb, intervals)) {
                os << io::format_double(rep.a) << ',' << io::format_double(rep.b) << ','
                   << rep.rank_n << ',' << rep.rank << ',';
                if (rep.distance) os << io::format_double(*rep.distance);
                os << '\n';
            }
        }
        emit(os.str(), meas_out);
        return 0;
    }

    if (*cmd_cutnorm) {
        const Graphon a = io::parse_graphon_spec(cn_a);
        const Graphon b = io::parse_graphon_spec(cn_b);
        const StepGraphon sa = as_step_at(a, cn_n, "cutnorm");
        const StepGraphon sb = as_step_at(b, cn_n, "cutnorm");
        const StepKernel d = difference(sa, sb);
        CutNormCertificate cert{};
        if (cn_mode == "exact") {
            cert = cut_norm_exact(d);
        } else if (cn_mode == "heuristic") {
            cert = cut_norm_heuristic(d, cn_restarts);
        } else {
            throw ValidationError("cutnorm: mode must be \"exact\" or \"heuristic\"");
        }
        json j;
        j["value"] = cert.value;
        j["f"] = cert.f;
        j["g"] = cert.g;
        emit(j.dump(2) + "\n", cn_out);
        return 0;
    }

    if (*cmd_cutdist) {
        const Graphon a = io::parse_graphon_spec(cd_a);
        const Graphon b = io::parse_graphon_spec(cd_b);
        const StepGraphon sa = as_step_at(a, cd_n, "cutdist");
        const StepGraphon sb = as_step_at(b, cd_n, "cutdist");
        CutDistanceMode mode;
        if (cd_mode == "exact") {
            mode = CutDistanceMode::exact;
        } else if (cd_mode == "heuristic") {
            mode = CutDistanceMode::heuristic;
        } else {
            throw ValidationError("cutdist: mode must be \"exact\" or \"heuristic\"");
        }
        const CutDistanceResult r = cut_distance(sa, sb, mode, cd_restarts);
        json j;
        j["value"] = r.value;
        j["sigma"] = r.sigma.cycle_notation();
        j["exact"] = r.exact;
        emit(j.dump(2) + "\n", cd_out);
        return 0;
    }

    if (*cmd_rate) {
        Graphon v = io::parse_graphon_spec(rate_v);
        Graphon w = io::parse_graphon_spec(rate_w);
        if (rate_n > 0) {
            v = Graphon::step(project_to_step(v, rate_n));
            w = Graphon::step(project_to_step(w, rate_n));
        }
        emit(rate_to_json(rate_upsilon(v, w)).dump(2) + "\n", rate_out);
        return 0;
    }

    if (*cmd_tilt) {
        const Graphon w = io::parse_graphon_spec(tilt_w);
        const TiltSolution sol = solve_tilt(w, tilt_delta);
        json j;
        j["xi"] = sol.xi;
        j["delta"] = sol.delta;
        j["residual"] = sol.residual;
        j["w_star"] = io::graphon_to_json(sol.w_star);
        j["rate"] = rate_to_json(sol.rate);
        if (tilt_expansion) {
            const PerturbationExpansion ex = first_order_expansion(w, tilt_grid);
            j["expansion"] = {{"first_order", io::kernel_to_json(ex.first_order)},
                              {"denominator", ex.denominator},
                              {"alpha_coefficient", ex.alpha_coefficient}};
        }
        if (!tilt_verify.empty()) {
            const OrderFit fit = verify_order(w, parse_double_list(tilt_verify));
            json o;
            o["exact"] = fit.exact;
            o["slope"] = fit.exact ? json() : json(fit.slope);
            json res = json::array();
            for (const auto& [d, e] : fit.residuals) res.push_back({d, e});
            o["residuals"] = res;
            j["order"] = o;
        }
        emit(j.dump(2) + "\n", tilt_out);
        return 0;
    }

    if (*cmd_brute) {
        const Graphon w = io::parse_graphon_spec(brute_w);
        const BruteForceResult r = brute_force_ldp(w, brute_n, brute_delta);
        json j;
        j["exact_probability"] = r.probability;
        j["impossible"] = r.impossible;
        j["ldp_estimate"] = r.ldp_estimate ? json(*r.ldp_estimate) : json();
        j["rate_bound"] = r.rate_bound ? rate_to_json(*r.rate_bound) : json();
        if (brute_mc > 0) {
            const MonteCarloResult mc = monte_carlo_ldp(w, brute_n, brute_delta, brute_mc, brute_seed);
            j["mc_probability"] = mc.probability;
            j["mc_stderr"] = mc.stderr_;
        }
        emit(j.dump(2) + "\n", brute_out);
        return 0;
    }

    if (*cmd_exp) {
        std::ifstream in(exp_config);
        if (!in) throw ValidationError("cannot open experiment config: " + exp_config);
        json config;
        try {
            in >> config;
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("experiment config: ") + e.what());
        }
        if (!exp_name.empty()) {
            if (config.contains("name") && config["name"] != exp_name) {
                throw ValidationError("experiment: --name disagrees with the config name");
            }
            config["name"] = exp_name;
        }
        const ExperimentSpec spec = experiment_spec_from_json(config);
        const ExperimentResult result = run_experiment(spec);
        write_experiment(result, exp_out);
        std::cout << "wrote " << result.rows.size() << " rows to " << exp_out << "/" << spec.name
                  << ".csv\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const graphon::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const graphon::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 1;
    }
}
