#include "graphon/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <variant>

#include "graphon/errors.hpp"
#include "graphon/io.hpp"
#include "graphon/ldp.hpp"
#include "graphon/sampler.hpp"
#include "graphon/spectral.hpp"
#include "graphon/version.hpp"

namespace graphon {

namespace {

using nlohmann::json;

const std::vector<std::string>& known_experiments() {
    static const std::vector<std::string> names = {
        "convergence", "vague-diagnostic", "bipartite-switching", "smallworld-perturbation",
        "ldp-bruteforce"};
    return names;
}

std::string fmt(double v) { return io::format_double(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

double median(std::vector<double> v) {
    if (v.empty()) throw ValidationError("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double ls_slope(const std::vector<std::pair<double, double>>& xy) {
    if (xy.size() < 2) throw ValidationError("slope fit needs at least 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(xy.size());
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, Fn fn) {
    using Out = decltype(fn(items.front()));
    std::vector<std::future<Out>> futures;
    futures.reserve(items.size());
    for (const auto& item : items) {
        futures.push_back(std::async(std::launch::async, fn, item));
    }
    std::vector<Out> out;
    out.reserve(items.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

// Reference kernel spectrum of the model: closed form for families, the
// graphon's own decomposition for step models.
SpectralDecomposition reference_kernel_spectrum(const Graphon& w, int k_max) {
    if (w.is_step()) return decompose_kernel(w.as_step());
    return closed_form_spectrum(w, OperatorKind::kernel, k_max);
}

// Interval (a, 2] isolating the top atom of `m`; nullopt when there is no
// usable positive atom or the gap below it is too tight for stable endpoints.
std::optional<VagueInterval> top_atom_interval(const SpectralMeasure& m) {
    if (m.atoms.empty()) return std::nullopt;
    const SpectralAtom& top = m.atoms.front();
    if (top.eigenvalue <= m.tol) return std::nullopt;
    const double next = m.atoms.size() > 1 ? m.atoms[1].eigenvalue : 0.0;
    const double a = 0.5 * (top.eigenvalue + next);
    if (top.eigenvalue - next <= 4.0 * m.tol || std::fabs(a) <= m.tol) return std::nullopt;
    return VagueInterval{a, 2.0};
}

struct CellKey {
    int n;
    std::uint64_t seed;
};

void append(std::vector<ResultRow>& rows, std::vector<ResultRow> more) {
    for (auto& r : more) rows.push_back(std::move(r));
}

ExperimentResult finish(ExperimentSpec spec, std::vector<ResultRow> rows,
                        std::chrono::steady_clock::time_point t0) {
    ExperimentResult res{std::move(spec), std::move(rows), 0.0};
    res.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace

ExperimentSpec experiment_spec_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("experiment config: must be a JSON object");
    ExperimentSpec s;
    for (const auto& [key, value] : j.items()) {
        if (key == "name") {
            if (!value.is_string()) throw ValidationError("experiment config: name must be a string");
            s.name = value.get<std::string>();
        } else if (key == "model") {
            if (!value.is_string()) throw ValidationError("experiment config: model must be a string");
            s.model = value.get<std::string>();
        } else if (key == "n") {
            if (!value.is_array()) throw ValidationError("experiment config: n must be an array");
            for (const auto& e : value) {
                if (!e.is_number_integer() || e.get<long long>() <= 0) {
                    throw ValidationError("experiment config: n entries must be positive integers");
                }
                s.n_list.push_back(e.get<int>());
            }
        } else if (key == "seeds") {
            if (!value.is_array()) throw ValidationError("experiment config: seeds must be an array");
            for (const auto& e : value) {
                if (!e.is_number_unsigned() && !e.is_number_integer()) {
                    throw ValidationError("experiment config: seeds must be integers");
                }
                const long long v = e.get<long long>();
                if (v < 0) throw ValidationError("experiment config: seeds must be nonnegative");
                s.seeds.push_back(static_cast<std::uint64_t>(v));
            }
        } else if (key == "deltas") {
            if (!value.is_array()) throw ValidationError("experiment config: deltas must be an array");
            for (const auto& e : value) {
                if (!e.is_number()) throw ValidationError("experiment config: deltas must be numbers");
                s.deltas.push_back(e.get<double>());
            }
        } else if (key == "window") {
            s.window = value.get<int>();
            if (s.window <= 0) throw ValidationError("experiment config: window must be positive");
        } else if (key == "k_max") {
            s.k_max = value.get<int>();
            if (s.k_max < 0) throw ValidationError("experiment config: k_max must be nonnegative");
        } else if (key == "restarts") {
            s.restarts = value.get<int>();
            if (s.restarts < 0) throw ValidationError("experiment config: restarts must be nonnegative");
        } else if (key == "mc_samples") {
            s.mc_samples = value.get<int>();
            if (s.mc_samples < 0) throw ValidationError("experiment config: mc_samples must be nonnegative");
        } else if (key == "mc_seed") {
            s.mc_seed = value.get<std::uint64_t>();
        } else {
            throw ValidationError("experiment config: unknown key \"" + key + "\"");
        }
    }
    if (s.name.empty()) throw ValidationError("experiment config: missing name");
    if (std::find(known_experiments().begin(), known_experiments().end(), s.name) ==
        known_experiments().end()) {
        std::ostringstream os;
        os << "experiment config: unknown experiment \"" << s.name << "\"; known:";
        for (const auto& n : known_experiments()) os << ' ' << n;
        throw ValidationError(os.str());
    }
    if (s.model.empty()) throw ValidationError("experiment config: missing model");
    return s;
}

json experiment_spec_to_json(const ExperimentSpec& s) {
    json j;
    j["name"] = s.name;
    j["model"] = s.model;
    j["n"] = s.n_list;
    j["seeds"] = s.seeds;
    j["deltas"] = s.deltas;
    j["window"] = s.window;
    j["k_max"] = s.k_max;
    j["restarts"] = s.restarts;
    j["mc_samples"] = s.mc_samples;
    j["mc_seed"] = s.mc_seed;
    return j;
}

ExperimentResult run_convergence(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graphon w = io::parse_graphon_spec(spec.model);
    if (spec.n_list.empty()) throw ValidationError("convergence: n list must be nonempty");

    const SpectralDecomposition ref =
        reference_kernel_spectrum(w, std::max(spec.k_max, spec.window));
    const SpectralMeasure ref_measure = to_spectral_measure(ref);
    const std::optional<VagueInterval> interval = top_atom_interval(ref_measure);

    std::vector<ResultRow> rows;

    if (spec.seeds.empty()) {
        // Deterministic mode: the n-block projection against the reference.
        for (int n : spec.n_list) {
            const SpectralDecomposition dn = decompose_kernel(project_to_step(w, n));
            for (const auto& g : align_spectra(dn, ref, spec.window)) {
                rows.push_back({fmt(n), "", "", fmt(g.j), "lambda_n", g.lambda_a});
                rows.push_back({fmt(n), "", "", fmt(g.j), "lambda_ref", g.lambda_b});
                rows.push_back({fmt(n), "", "", fmt(g.j), "gap", g.gap});
            }
        }
        return finish(spec, std::move(rows), t0);
    }

    std::vector<CellKey> cells;
    for (int n : spec.n_list) {
        for (std::uint64_t seed : spec.seeds) cells.push_back({n, seed});
    }
    auto cell_rows = parallel_map(cells, [&](const CellKey& c) {
        std::vector<ResultRow> out;
        const StepGraphon sampled = lift(sample(w, {c.seed, c.n}));
        const SpectralDecomposition dn = decompose_kernel(sampled);
        for (const auto& g : align_spectra(dn, ref, spec.window)) {
            out.push_back({fmt(c.n), fmt(c.seed), "", fmt(g.j), "lambda_n", g.lambda_a});
            out.push_back({fmt(c.n), fmt(c.seed), "", fmt(g.j), "lambda_ref", g.lambda_b});
            out.push_back({fmt(c.n), fmt(c.seed), "", fmt(g.j), "gap", g.gap});
        }
        if (interval) {
            const SpectralMeasure mn = to_spectral_measure(dn);
            const auto reports = vague_diagnostic(mn, ref_measure, {*interval});
            const auto& rep = reports.front();
            out.push_back({fmt(c.n), fmt(c.seed), "", "1", "rank_n",
                           static_cast<double>(rep.rank_n)});
            out.push_back({fmt(c.n), fmt(c.seed), "", "1", "rank_ref",
                           static_cast<double>(rep.rank)});
            out.push_back({fmt(c.n), fmt(c.seed), "", "1", "rank_match",
                           rep.rank_n == rep.rank ? 1.0 : 0.0});
        }
        return out;
    });
    // Per-n medians of the leading gap across seeds, gathered before the
    // blocks are moved into the flat row list.
    std::vector<ResultRow> medians;
    std::size_t cell_idx = 0;
    for (int n : spec.n_list) {
        std::vector<double> gaps;
        for (std::size_t s = 0; s < spec.seeds.size(); ++s, ++cell_idx) {
            const auto& block = cell_rows[cell_idx];
            for (const auto& row : block) {
                if (row.metric == "gap" && row.index == "1") gaps.push_back(row.value);
            }
        }
        medians.push_back({fmt(n), "", "", "1", "median_gap_j1", median(std::move(gaps))});
    }
    for (auto& r : cell_rows) append(rows, std::move(r));
    append(rows, std::move(medians));
    return finish(spec, std::move(rows), t0);
}

ExperimentResult run_vague_diagnostic(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graphon w = io::parse_graphon_spec(spec.model);
    if (spec.n_list.empty()) throw ValidationError("vague-diagnostic: n list must be nonempty");

    std::vector<ResultRow> rows;
    for (int n : spec.n_list) {
        const SpectralDecomposition dref = decompose_kernel(project_to_step(w, n));
        const SpectralMeasure mref = to_spectral_measure(dref);
        const std::optional<VagueInterval> interval = top_atom_interval(mref);
        if (!interval) {
            throw ValidationError(
                "vague-diagnostic: reference spectrum has no isolated top atom at n = " +
                std::to_string(n));
        }
        rows.push_back({fmt(n), "", "", "", "interval_a", interval->a});
        rows.push_back({fmt(n), "", "", "", "interval_b", interval->b});

        const int rank_ref = project_interval(mref, interval->a, interval->b).rank;
        rows.push_back({fmt(n), "", "", "", "rank_proj", static_cast<double>(rank_ref)});
        if (!w.is_step()) {
            const SpectralMeasure closed = to_spectral_measure(
                closed_form_spectrum(w, OperatorKind::kernel, std::max(spec.k_max, spec.window)));
            rows.push_back({fmt(n), "", "", "", "rank_closed",
                            static_cast<double>(project_interval(closed, interval->a, interval->b).rank)});
        }

        std::vector<CellKey> cells;
        for (std::uint64_t seed : spec.seeds) cells.push_back({n, seed});
        auto cell_rows = parallel_map(cells, [&](const CellKey& c) {
            std::vector<ResultRow> out;
            const SpectralMeasure mn =
                to_spectral_measure(decompose_kernel(lift(sample(w, {c.seed, c.n}))));
            const auto reports = vague_diagnostic(mn, mref, {*interval});
            const auto& rep = reports.front();
            out.push_back({fmt(c.n), fmt(c.seed), "", "", "rank_n",
                           static_cast<double>(rep.rank_n)});
            out.push_back({fmt(c.n), fmt(c.seed), "", "", "rank_ref",
                           static_cast<double>(rep.rank)});
            if (rep.distance) {
                out.push_back({fmt(c.n), fmt(c.seed), "", "", "distance", *rep.distance});
            }
            return out;
        });
        std::vector<double> distances;
        for (auto& block : cell_rows) {
            for (const auto& row : block) {
                if (row.metric == "distance") distances.push_back(row.value);
            }
            append(rows, std::move(block));
        }
        if (!distances.empty()) {
            rows.push_back({fmt(n), "", "", "", "median_distance", median(std::move(distances))});
        }
    }
    return finish(spec, std::move(rows), t0);
}

ExperimentResult run_bipartite_switching(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graphon w = io::parse_graphon_spec(spec.model);
    const auto* bip = std::get_if<BipartiteGraphon>(&w.kernel());
    if (!bip) throw ValidationError("bipartite-switching: model must be a bipartite graphon");
    if (spec.n_list.empty()) throw ValidationError("bipartite-switching: n list must be nonempty");
    if (spec.deltas.empty()) throw ValidationError("bipartite-switching: deltas must be nonempty");
    const int n = spec.n_list.front();
    const double alpha = bip->alpha;
    const double p = bip->p;
    if (std::fabs(alpha * n - std::round(alpha * n)) > 1e-9) {
        throw ValidationError(
            "bipartite-switching: alpha * n must be an integer so the block boundary aligns "
            "with the grid");
    }

    // Unperturbed Laplacian clusters and their first-order drift rates.
    const double base[3] = {-p, -p * alpha, -p * (1.0 - alpha)};
    const double drift[3] = {1.0 / (2.0 * alpha * (1.0 - alpha)), 1.0 / (2.0 * (1.0 - alpha)),
                             1.0 / (2.0 * alpha)};

    std::vector<ResultRow> rows;
    std::vector<std::pair<double, double>> gap_points;
    int switch_count = 0;
    double first_switch = 0.0;
    bool has_switch = false;

    for (double delta : spec.deltas) {
        const TiltSolution sol = solve_tilt(w, delta);
        const StepGraphon proj = project_to_step(sol.w_star, n);
        const SpectralMeasure m = to_spectral_measure(decompose_laplacian(proj));

        std::vector<const SpectralAtom*> nonzero;
        for (const auto& atom : m.atoms) {
            if (std::fabs(atom.eigenvalue) > m.tol) nonzero.push_back(&atom);
        }
        if (nonzero.size() != 3) {
            std::ostringstream os;
            os << "bipartite-switching: expected 3 nonzero Laplacian clusters, found "
               << nonzero.size() << " at delta = " << delta;
            throw NumericError(os.str());
        }

        // Match clusters to predictions by exhaustive assignment (3! = 6).
        double pred[3];
        for (int i = 0; i < 3; ++i) pred[i] = base[i] - delta * drift[i];
        int perm[3] = {0, 1, 2};
        int best_perm[3] = {0, 1, 2};
        double best_cost = -1.0;
        std::sort(perm, perm + 3);
        do {
            double cost = 0.0;
            for (int i = 0; i < 3; ++i) {
                cost += std::fabs(nonzero[static_cast<std::size_t>(perm[i])]->eigenvalue - pred[i]);
            }
            if (best_cost < 0.0 || cost < best_cost) {
                best_cost = cost;
                for (int i = 0; i < 3; ++i) best_perm[i] = perm[i];
            }
        } while (std::next_permutation(perm, perm + 3));

        const std::string d = fmt(delta);
        bool differs = false;
        double cluster[3];
        for (int i = 0; i < 3; ++i) {
            const SpectralAtom* atom = nonzero[static_cast<std::size_t>(best_perm[i])];
            cluster[i] = atom->eigenvalue;
            const std::string tag = std::to_string(i + 1);
            rows.push_back({fmt(n), "", d, tag, "lambda" + tag + "_cluster", atom->eigenvalue});
            rows.push_back({fmt(n), "", d, tag, "mult" + tag,
                            static_cast<double>(atom->multiplicity)});
            rows.push_back({fmt(n), "", d, tag, "pred" + tag, pred[i]});
            rows.push_back({fmt(n), "", d, tag, "dev" + tag,
                            std::fabs(atom->eigenvalue - pred[i])});
        }
        // Baseline order is lambda1 < lambda3 < lambda2 (all negative).
        differs = !(cluster[0] < cluster[2] && cluster[2] < cluster[1]);
        const double gap13 = std::fabs(cluster[0] - cluster[2]);
        rows.push_back({fmt(n), "", d, "", "gap13", gap13});
        rows.push_back({fmt(n), "", d, "", "ordering_differs", differs ? 1.0 : 0.0});
        rows.push_back({fmt(n), "", d, "", "tilt_residual", sol.residual});
        gap_points.emplace_back(delta, gap13);
        if (differs) {
            ++switch_count;
            if (!has_switch) {
                has_switch = true;
                first_switch = delta;
            }
        }
    }

    if (gap_points.size() >= 2) {
        rows.push_back({fmt(n), "", "", "", "gap13_slope", ls_slope(gap_points)});
    }
    rows.push_back({fmt(n), "", "", "", "switch_count", static_cast<double>(switch_count)});
    if (has_switch) {
        rows.push_back({fmt(n), "", "", "", "first_switch_delta", first_switch});
    }
    return finish(spec, std::move(rows), t0);
}

ExperimentResult run_smallworld_perturbation(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graphon w = io::parse_graphon_spec(spec.model);
    const auto* sw = std::get_if<SmallWorldGraphon>(&w.kernel());
    if (!sw) throw ValidationError("smallworld-perturbation: model must be a small-world graphon");
    if (spec.deltas.empty()) throw ValidationError("smallworld-perturbation: deltas must be nonempty");

    const double pi = 3.14159265358979323846;
    const auto mu0_of = [&](double q, double p) { return 2.0 * sw->r * q + (1.0 - 2.0 * sw->r) * p; };
    const auto muk_of = [&](double q, double p, int k) {
        return (q - p) / (pi * k) * std::sin(2.0 * pi * k * sw->r);
    };
    const double mu0 = mu0_of(sw->q, sw->p);

    std::vector<ResultRow> rows;
    // residuals[k] per delta for halving-ratio rows; k = 0 is mu0.
    std::vector<std::vector<double>> residuals(static_cast<std::size_t>(spec.k_max) + 1);

    for (double delta : spec.deltas) {
        const TiltSolution sol = solve_tilt(w, delta);
        const auto& tilted = std::get<SmallWorldGraphon>(sol.w_star.kernel());
        const std::string d = fmt(delta);

        const double mu0d = mu0_of(tilted.q, tilted.p);
        const double res0 = std::fabs(mu0d - mu0 - delta);
        rows.push_back({"", "", d, "0", "mu0_delta", mu0d});
        rows.push_back({"", "", d, "0", "mu0_residual", res0});
        residuals[0].push_back(res0);

        for (int k = 1; k <= spec.k_max; ++k) {
            const double muk = muk_of(sw->q, sw->p, k);
            const double mukd = muk_of(tilted.q, tilted.p, k);
            const double res = std::fabs(mukd - muk);
            rows.push_back({"", "", d, fmt(k), "muk_delta", mukd});
            rows.push_back({"", "", d, fmt(k), "muk_residual", res});
            residuals[static_cast<std::size_t>(k)].push_back(res);
        }
        rows.push_back({"", "", d, "", "tilt_residual", sol.residual});
        rows.push_back({"", "", d, "", "xi", sol.xi});

        if (!spec.n_list.empty()) {
            const int n = spec.n_list.front();
            const SpectralDecomposition dn = decompose_kernel(project_to_step(sol.w_star, n));
            const SpectralDecomposition closed =
                closed_form_spectrum(sol.w_star, OperatorKind::kernel,
                                     std::max(spec.k_max, spec.window));
            for (const auto& g : align_spectra(dn, closed, spec.window)) {
                rows.push_back({fmt(n), "", d, fmt(g.j), "numeric_gap", g.gap});
            }
        }
    }

    // Residual halving ratios for delta pairs (delta, delta/2).
    for (std::size_t i = 0; i < spec.deltas.size(); ++i) {
        for (std::size_t j = 0; j < spec.deltas.size(); ++j) {
            if (std::fabs(spec.deltas[i] - 2.0 * spec.deltas[j]) > 1e-12) continue;
            for (int k = 0; k <= spec.k_max; ++k) {
                const double num = residuals[static_cast<std::size_t>(k)][i];
                const double den = residuals[static_cast<std::size_t>(k)][j];
                if (den > 1e-300) {
                    rows.push_back({"", "", fmt(spec.deltas[i]), fmt(k),
                                    k == 0 ? "ratio_mu0" : "ratio_muk", num / den});
                }
            }
        }
    }
    return finish(spec, std::move(rows), t0);
}

ExperimentResult run_ldp_bruteforce(const ExperimentSpec& spec) {
    const auto t0 = std::chrono::steady_clock::now();
    const Graphon w = io::parse_graphon_spec(spec.model);
    if (spec.n_list.empty()) throw ValidationError("ldp-bruteforce: n list must be nonempty");
    if (spec.deltas.empty()) throw ValidationError("ldp-bruteforce: deltas must be nonempty");

    std::vector<ResultRow> rows;
    for (double delta : spec.deltas) {
        const std::string d = fmt(delta);
        for (int n : spec.n_list) {
            const BruteForceResult r = brute_force_ldp(w, n, delta);
            rows.push_back({fmt(n), "", d, "", "exact_probability", r.probability});
            rows.push_back({fmt(n), "", d, "", "impossible", r.impossible ? 1.0 : 0.0});
            if (r.ldp_estimate) {
                rows.push_back({fmt(n), "", d, "", "ldp_estimate", *r.ldp_estimate});
            }
            if (r.rate_bound) {
                if (r.rate_bound->infinite) {
                    rows.push_back({fmt(n), "", d, "", "rate_infinite", 1.0});
                } else {
                    rows.push_back({fmt(n), "", d, "", "rate_bound", r.rate_bound->value});
                }
            }
            if (spec.mc_samples > 0) {
                const MonteCarloResult mc =
                    monte_carlo_ldp(w, n, delta, spec.mc_samples, spec.mc_seed);
                rows.push_back({fmt(n), "", d, "", "mc_probability", mc.probability});
                rows.push_back({fmt(n), "", d, "", "mc_stderr", mc.stderr_});
            }
        }
    }
    return finish(spec, std::move(rows), t0);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.name == "convergence") return run_convergence(spec);
    if (spec.name == "vague-diagnostic") return run_vague_diagnostic(spec);
    if (spec.name == "bipartite-switching") return run_bipartite_switching(spec);
    if (spec.name == "smallworld-perturbation") return run_smallworld_perturbation(spec);
    if (spec.name == "ldp-bruteforce") return run_ldp_bruteforce(spec);
    throw ValidationError("unknown experiment \"" + spec.name + "\"");
}

void write_experiment(const ExperimentResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + out_dir + ": " + ec.message());

    const fs::path csv_path = fs::path(out_dir) / (result.spec.name + ".csv");
    std::ofstream csv(csv_path);
    if (!csv) throw ValidationError("cannot write " + csv_path.string());
    csv << "experiment,model,n,seed,delta,index,metric,value\n";
    for (const auto& r : result.rows) {
        // The model echo may contain commas; it is always quoted.
        csv << result.spec.name << ",\"" << result.spec.model << "\"," << r.n << ',' << r.seed
            << ',' << r.delta << ',' << r.index << ',' << r.metric << ','
            << io::format_double(r.value) << '\n';
    }
    csv.close();
    if (!csv) throw ValidationError("failed writing " + csv_path.string());

    json manifest;
    manifest["experiment"] = result.spec.name;
    manifest["spec"] = experiment_spec_to_json(result.spec);
    manifest["tool_version"] = kToolVersion;
    manifest["wall_clock_seconds"] = result.wall_clock_seconds;
    manifest["row_count"] = result.rows.size();
    const fs::path man_path = fs::path(out_dir) / "manifest.json";
    std::ofstream man(man_path);
    if (!man) throw ValidationError("cannot write " + man_path.string());
    man << manifest.dump(2) << '\n';
}

}  // namespace graphon
