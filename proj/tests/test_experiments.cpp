#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "graphon/errors.hpp"
#include "graphon/experiments.hpp"
#include "graphon/io.hpp"
#include "graphon/ldp.hpp"
#include "graphon/version.hpp"

using namespace graphon;
using nlohmann::json;

namespace {

struct RowQuery {
    std::string metric;
    std::string n;
    std::string seed;
    std::string delta;
    std::string index;
};

std::optional<double> find_row(const std::vector<ResultRow>& rows, const RowQuery& q) {
    for (const auto& r : rows) {
        if (r.metric == q.metric && r.n == q.n && r.seed == q.seed && r.delta == q.delta &&
            r.index == q.index) {
            return r.value;
        }
    }
    return std::nullopt;
}

int count_metric(const std::vector<ResultRow>& rows, const std::string& metric) {
    int c = 0;
    for (const auto& r : rows) c += r.metric == metric ? 1 : 0;
    return c;
}

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "graphon_experiment_tests" / name;
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("experiment config parses fields and applies defaults") {
    const json j = {
        {"name", "ldp-bruteforce"}, {"model", "constant:p=0.5"},
        {"n", {4, 5}},              {"seeds", {1, 2}},
        {"deltas", {0.2, 0.1}},     {"window", 2},
        {"k_max", 5},               {"restarts", 8},
        {"mc_samples", 100},        {"mc_seed", 9},
    };
    const ExperimentSpec s = experiment_spec_from_json(j);
    CHECK(s.name == "ldp-bruteforce");
    CHECK(s.model == "constant:p=0.5");
    CHECK(s.n_list == std::vector<int>{4, 5});
    CHECK(s.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK(s.deltas == std::vector<double>{0.2, 0.1});
    CHECK(s.window == 2);
    CHECK(s.k_max == 5);
    CHECK(s.restarts == 8);
    CHECK(s.mc_samples == 100);
    CHECK(s.mc_seed == 9);

    const ExperimentSpec d =
        experiment_spec_from_json(json{{"name", "convergence"}, {"model", "constant:p=0.5"}});
    CHECK(d.window == 3);
    CHECK(d.k_max == 3);
    CHECK(d.restarts == 32);
    CHECK(d.mc_samples == 0);
    CHECK(d.mc_seed == 1);

    // to_json round trips through from_json.
    const ExperimentSpec back = experiment_spec_from_json(experiment_spec_to_json(s));
    CHECK(back.n_list == s.n_list);
    CHECK(back.deltas == s.deltas);
    CHECK(back.mc_seed == s.mc_seed);
}

TEST_CASE("experiment config rejects malformed input") {
    const json good = {{"name", "convergence"}, {"model", "constant:p=0.5"}};

    json j = good;
    j["typo"] = 1;
    CHECK_THROWS_WITH_AS(experiment_spec_from_json(j), doctest::Contains("unknown key"),
                         ValidationError);

    j = good;
    j["name"] = "mystery";
    CHECK_THROWS_WITH_AS(experiment_spec_from_json(j), doctest::Contains("known:"),
                         ValidationError);

    CHECK_THROWS_WITH_AS(experiment_spec_from_json(json{{"model", "constant:p=0.5"}}),
                         doctest::Contains("missing name"), ValidationError);
    CHECK_THROWS_WITH_AS(experiment_spec_from_json(json{{"name", "convergence"}}),
                         doctest::Contains("missing model"), ValidationError);
    CHECK_THROWS_AS(experiment_spec_from_json(json::array()), ValidationError);

    j = good;
    j["n"] = {4, 0};
    CHECK_THROWS_AS(experiment_spec_from_json(j), ValidationError);
    j = good;
    j["seeds"] = {-1};
    CHECK_THROWS_AS(experiment_spec_from_json(j), ValidationError);
    j = good;
    j["window"] = 0;
    CHECK_THROWS_AS(experiment_spec_from_json(j), ValidationError);
}

TEST_CASE("ldp-bruteforce rows mirror the direct library calls") {
    ExperimentSpec spec;
    spec.name = "ldp-bruteforce";
    spec.model = "constant:p=0.5";
    spec.n_list = {4, 5};
    spec.deltas = {0.2};
    spec.mc_samples = 500;
    spec.mc_seed = 3;

    const ExperimentResult res = run_ldp_bruteforce(spec);
    const Graphon w = io::parse_graphon_spec(spec.model);

    for (int n : spec.n_list) {
        const std::string ns = std::to_string(n);
        const BruteForceResult direct = brute_force_ldp(w, n, 0.2);
        const auto p = find_row(res.rows, {"exact_probability", ns, "", "0.2", ""});
        REQUIRE(p.has_value());
        CHECK(*p == direct.probability);
        CHECK(*find_row(res.rows, {"impossible", ns, "", "0.2", ""}) == 0.0);
        REQUIRE(direct.ldp_estimate.has_value());
        CHECK(*find_row(res.rows, {"ldp_estimate", ns, "", "0.2", ""}) == *direct.ldp_estimate);
        CHECK(*find_row(res.rows, {"rate_bound", ns, "", "0.2", ""}) ==
              direct.rate_bound->value);

        const MonteCarloResult mc = monte_carlo_ldp(w, n, 0.2, 500, 3);
        CHECK(*find_row(res.rows, {"mc_probability", ns, "", "0.2", ""}) == mc.probability);
        CHECK(*find_row(res.rows, {"mc_stderr", ns, "", "0.2", ""}) == mc.stderr_);
    }
    CHECK(res.wall_clock_seconds >= 0.0);
    CHECK(run_experiment(spec).rows.size() == res.rows.size());
}

TEST_CASE("ldp-bruteforce marks impossible events instead of inventing estimates") {
    ExperimentSpec spec;
    spec.name = "ldp-bruteforce";
    spec.model = "constant:p=1";
    spec.n_list = {4};
    spec.deltas = {0.1};
    const ExperimentResult res = run_ldp_bruteforce(spec);
    CHECK(*find_row(res.rows, {"impossible", "4", "", "0.1", ""}) == 1.0);
    CHECK(count_metric(res.rows, "ldp_estimate") == 0);
    CHECK(count_metric(res.rows, "rate_bound") == 0);
}

TEST_CASE("smallworld-perturbation: density shift exact, modes quadratic") {
    ExperimentSpec spec;
    spec.name = "smallworld-perturbation";
    spec.model = "smallworld:q=0.8,p=0.2,r=0.25";
    spec.deltas = {0.02, 0.01};
    spec.k_max = 3;

    const ExperimentResult res = run_smallworld_perturbation(spec);

    for (const char* d : {"0.02", "0.01"}) {
        // Density moves by exactly delta; the tilt stays in the family.
        CHECK(*find_row(res.rows, {"mu0_residual", "", "", d, "0"}) <= 1e-10);
        CHECK(*find_row(res.rows, {"tilt_residual", "", "", d, ""}) <= 1e-12);
        CHECK(*find_row(res.rows, {"xi", "", "", d, ""}) > 1.0);
        CHECK(find_row(res.rows, {"muk_delta", "", "", d, "1"}).has_value());
    }

    // The shared first-order shift cancels in q - p, so mode residuals are
    // second order: eps = delta / 0.16, res1 ~ 0.096 eps^2 / pi.
    const double res1_02 = *find_row(res.rows, {"muk_residual", "", "", "0.02", "1"});
    const double res1_01 = *find_row(res.rows, {"muk_residual", "", "", "0.01", "1"});
    CHECK(res1_02 == doctest::Approx(4.77e-4).epsilon(0.3));
    CHECK(res1_01 == doctest::Approx(1.19e-4).epsilon(0.3));

    // Halving delta quarters the residual, up to the next order.
    for (const char* k : {"1", "3"}) {
        const double ratio = *find_row(res.rows, {"ratio_muk", "", "", "0.02", k});
        CHECK(ratio >= 2.5);
        CHECK(ratio <= 6.0);
    }
}

TEST_CASE("smallworld-perturbation numeric spectra track the closed form") {
    ExperimentSpec spec;
    spec.name = "smallworld-perturbation";
    spec.model = "smallworld:q=0.8,p=0.2,r=0.25";
    spec.deltas = {0.02};
    spec.n_list = {64};
    spec.window = 1;  // |j| = 1 only; deeper slots need a larger k_max truncation

    const ExperimentResult res = run_smallworld_perturbation(spec);
    int seen = 0;
    for (const auto& r : res.rows) {
        if (r.metric != "numeric_gap") continue;
        ++seen;
        CHECK(r.n == "64");
        CHECK(r.value <= 0.05);
    }
    CHECK(seen == 2);

    spec.model = "bipartite:alpha=0.25,p=0.8";
    CHECK_THROWS_WITH_AS(run_smallworld_perturbation(spec), doctest::Contains("small-world"),
                         ValidationError);
}

TEST_CASE("bipartite-switching matches the exact cluster drift") {
    ExperimentSpec spec;
    spec.name = "bipartite-switching";
    spec.model = "bipartite:alpha=0.2,p=0.5";
    spec.n_list = {10};
    spec.deltas = {0.0, 0.0125, 0.025};

    const ExperimentResult res = run_bipartite_switching(spec);

    for (const char* d : {"0", "0.0125", "0.025"}) {
        for (const char* i : {"1", "2", "3"}) {
            const auto dev = find_row(res.rows, {std::string("dev") + i, "10", "", d, i});
            REQUIRE(dev.has_value());
            // In-family tilt on an aligned grid: predictions are exact.
            CHECK(*dev <= 1e-10);
        }
        CHECK(*find_row(res.rows, {"mult1", "10", "", d, "1"}) == 1.0);
        CHECK(*find_row(res.rows, {"mult2", "10", "", d, "2"}) == 7.0);
        CHECK(*find_row(res.rows, {"mult3", "10", "", d, "3"}) == 1.0);
        CHECK(*find_row(res.rows, {"ordering_differs", "10", "", d, ""}) == 0.0);
        CHECK(*find_row(res.rows, {"tilt_residual", "10", "", d, ""}) <= 1e-12);
    }

    // gap13 = alpha p + delta / (2 (1 - alpha)): slope 0.625 at alpha = 0.2.
    CHECK(*find_row(res.rows, {"gap13", "10", "", "0", ""}) ==
          doctest::Approx(0.1).epsilon(1e-10));
    const double slope = *find_row(res.rows, {"gap13_slope", "10", "", "", ""});
    CHECK(slope == doctest::Approx(0.625).epsilon(0.05));
    CHECK(*find_row(res.rows, {"switch_count", "10", "", "", ""}) == 0.0);
    CHECK(count_metric(res.rows, "first_switch_delta") == 0);
}

TEST_CASE("bipartite-switching validates model and grid alignment") {
    ExperimentSpec spec;
    spec.name = "bipartite-switching";
    spec.model = "constant:p=0.5";
    spec.n_list = {10};
    spec.deltas = {0.01};
    CHECK_THROWS_WITH_AS(run_bipartite_switching(spec), doctest::Contains("bipartite"),
                         ValidationError);

    spec.model = "bipartite:alpha=0.25,p=0.5";
    spec.n_list = {10};  // alpha * n = 2.5 splits a block
    CHECK_THROWS_WITH_AS(run_bipartite_switching(spec), doctest::Contains("align"),
                         ValidationError);
}

TEST_CASE("convergence without seeds compares projections to the reference") {
    ExperimentSpec spec;
    spec.name = "convergence";
    spec.model = "smallworld:q=0.8,p=0.2,r=0.25";
    spec.n_list = {512};
    spec.window = 3;
    spec.k_max = 8;  // the third negative slot is the k = 7 mode

    const ExperimentResult res = run_convergence(spec);
    for (const char* j : {"1", "2", "3", "-1", "-2", "-3"}) {
        const auto gap = find_row(res.rows, {"gap", "512", "", "", j});
        REQUIRE(gap.has_value());
        CHECK(*gap <= 1e-2);
        CHECK(find_row(res.rows, {"lambda_n", "512", "", "", j}).has_value());
        CHECK(find_row(res.rows, {"lambda_ref", "512", "", "", j}).has_value());
    }
    CHECK(res.rows.size() == 18);
}

TEST_CASE("convergence with seeds tracks sampled spectra and medians") {
    ExperimentSpec spec;
    spec.name = "convergence";
    spec.model = "bipartite:alpha=0.25,p=0.8";
    spec.n_list = {40, 160};
    spec.seeds = {1, 2, 3};
    spec.window = 2;

    const ExperimentResult res = run_convergence(spec);

    // 3 gap metrics x 2 window x 2 sides is 12 rows per (n, seed) plus 3
    // interval-rank rows; medians close each n.
    CHECK(count_metric(res.rows, "gap") == 24);
    CHECK(count_metric(res.rows, "rank_match") == 6);
    CHECK(count_metric(res.rows, "median_gap_j1") == 2);

    for (const auto& r : res.rows) {
        if (r.metric == "rank_match") {
            CHECK((r.value == 0.0 || r.value == 1.0));
        }
    }

    const double med40 = *find_row(res.rows, {"median_gap_j1", "40", "", "", "1"});
    const double med160 = *find_row(res.rows, {"median_gap_j1", "160", "", "", "1"});
    // Deterministic sampling: the coarser grid sits strictly farther out.
    CHECK(med160 < med40);
    CHECK(med40 < 0.5);
}

TEST_CASE("vague-diagnostic isolates the top atom and reports ranks") {
    ExperimentSpec spec;
    spec.name = "vague-diagnostic";
    spec.model = "bipartite:alpha=0.25,p=0.8";
    spec.n_list = {16, 64};
    spec.seeds = {1, 2, 3, 4, 5};

    const ExperimentResult res = run_vague_diagnostic(spec);

    for (const char* n : {"16", "64"}) {
        const auto a = find_row(res.rows, {"interval_a", n, "", "", ""});
        REQUIRE(a.has_value());
        CHECK(*a > 0.0);
        CHECK(*a < 0.34641016151377546);
        CHECK(*find_row(res.rows, {"interval_b", n, "", "", ""}) == 2.0);
        CHECK(*find_row(res.rows, {"rank_proj", n, "", "", ""}) == 1.0);
        CHECK(*find_row(res.rows, {"rank_closed", n, "", "", ""}) == 1.0);
        for (const char* s : {"1", "2", "3", "4", "5"}) {
            CHECK(*find_row(res.rows, {"rank_ref", n, s, "", ""}) == 1.0);
            CHECK(find_row(res.rows, {"rank_n", n, s, "", ""}).has_value());
        }
    }
    for (const auto& r : res.rows) {
        if (r.metric == "distance" || r.metric == "median_distance") {
            CHECK(r.value >= 0.0);
            CHECK(r.value <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("run_experiment dispatches by name") {
    ExperimentSpec spec;
    spec.name = "ldp-bruteforce";
    spec.model = "constant:p=0.5";
    spec.n_list = {4};
    spec.deltas = {0.2};
    CHECK(run_experiment(spec).rows.size() == run_ldp_bruteforce(spec).rows.size());

    spec.name = "unheard-of";
    CHECK_THROWS_AS(run_experiment(spec), ValidationError);
}

TEST_CASE("write_experiment emits a deterministic CSV and a manifest") {
    ExperimentSpec spec;
    spec.name = "ldp-bruteforce";
    spec.model = "constant:p=0.5";
    spec.n_list = {4, 5};
    spec.deltas = {0.2};
    spec.mc_samples = 200;
    spec.mc_seed = 3;

    const auto dir_a = temp_dir("a");
    const auto dir_b = temp_dir("b");
    const ExperimentResult run1 = run_ldp_bruteforce(spec);
    const ExperimentResult run2 = run_ldp_bruteforce(spec);
    write_experiment(run1, dir_a.string());
    write_experiment(run2, dir_b.string());

    const auto csv_a = dir_a / "ldp-bruteforce.csv";
    const auto csv_b = dir_b / "ldp-bruteforce.csv";
    REQUIRE(std::filesystem::exists(csv_a));
    REQUIRE(std::filesystem::exists(dir_a / "manifest.json"));

    const std::string text = slurp(csv_a);
    CHECK(text.rfind("experiment,model,n,seed,delta,index,metric,value\n", 0) == 0);
    CHECK(text.find("ldp-bruteforce,\"constant:p=0.5\",4,,0.2,,exact_probability,") !=
          std::string::npos);
    CHECK(text == slurp(csv_b));

    json manifest;
    std::ifstream(dir_a / "manifest.json") >> manifest;
    CHECK(manifest["experiment"] == "ldp-bruteforce");
    CHECK(manifest["tool_version"] == kToolVersion);
    CHECK(manifest["row_count"].get<std::size_t>() == run1.rows.size());
    CHECK(manifest["spec"]["model"] == "constant:p=0.5");
    CHECK(manifest["spec"]["mc_seed"] == 3);

    std::filesystem::remove_all(dir_a.parent_path());
}
