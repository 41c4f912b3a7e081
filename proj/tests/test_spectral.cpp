#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "graphon/errors.hpp"
#include "graphon/graphon.hpp"
#include "graphon/rng.hpp"
#include "graphon/spectral.hpp"
#include "graphon/step_graphon.hpp"

using namespace graphon;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            m(i, j) = rng::uniform53(seed, static_cast<std::uint32_t>(i),
                                     static_cast<std::uint32_t>(j));
            m(j, i) = m(i, j);
        }
    }
    return m;
}

Eigen::MatrixXd kernel_matrix(const StepGraphon& w) {
    return w.values() / static_cast<double>(w.blocks());
}

Eigen::MatrixXd laplacian_matrix(const StepGraphon& w) {
    const int n = w.blocks();
    Eigen::MatrixXd op = w.values() / static_cast<double>(n);
    for (int i = 0; i < n; ++i) op(i, i) -= w.values().row(i).sum() / n;
    return op;
}

void check_operator_identities(const SpectralDecomposition& d, const Eigen::MatrixXd& op) {
    double sum = 0.0;
    double sq = 0.0;
    for (double v : d.eigenvalues) {
        sum += v;
        sq += v * v;
    }
    CHECK(std::fabs(sum - op.trace()) <= 1e-8);
    CHECK(std::fabs(sq - op.squaredNorm()) <= 1e-8);
    CHECK((d.vectors.transpose() * d.vectors - Eigen::MatrixXd::Identity(d.dim(), d.dim()))
              .cwiseAbs()
              .maxCoeff() <= 1e-8);
}

}  // namespace

TEST_CASE("one-block constant kernel has the single eigenvalue p") {
    const SpectralDecomposition d =
        decompose_kernel(StepGraphon(Eigen::MatrixXd::Constant(1, 1, 0.7)));
    REQUIRE(d.eigenvalues.size() == 1);
    CHECK(d.eigenvalue(1) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(d.positive.size() == 1);
    CHECK(d.zero_multiplicity == 0);
}

TEST_CASE("two-sided indexing with zero padding") {
    Eigen::MatrixXd m(2, 2);
    m << 0.0, 0.8, 0.8, 0.0;  // kernel eigenvalues +-0.4
    const SpectralDecomposition d = decompose_kernel(StepGraphon(m));
    CHECK(d.eigenvalue(1) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(d.eigenvalue(-1) == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(d.eigenvalue(2) == 0.0);
    CHECK(d.eigenvalue(-2) == 0.0);
    CHECK(d.eigenvalue(17) == 0.0);
    CHECK_THROWS_AS(d.eigenvalue(0), ValidationError);
}

TEST_CASE("aligned bipartite kernel matches the closed form to machine precision") {
    const StepGraphon w = project_to_step(Graphon::bipartite(0.25, 0.8), 8);
    const SpectralDecomposition d = decompose_kernel(w);
    const double lam = 0.8 * std::sqrt(0.25 * 0.75);
    CHECK(std::fabs(d.eigenvalue(1) - lam) <= 1e-12);
    CHECK(std::fabs(d.eigenvalue(-1) + lam) <= 1e-12);
    CHECK(d.positive.size() == 1);
    CHECK(d.negative.size() == 1);
    CHECK(d.zero_multiplicity == 6);
}

TEST_CASE("small-world projection approaches the circulant eigenvalues") {
    const StepGraphon w = project_to_step(Graphon::small_world(0.8, 0.2, 0.25), 512);
    const SpectralDecomposition num = decompose_kernel(w);
    // Truncation must cover the comparison window: with r = 1/4 the negative
    // modes are k = 3, 7, .., so k_max = 8 fills three negative slots.
    const SpectralDecomposition ref =
        closed_form_spectrum(Graphon::small_world(0.8, 0.2, 0.25), OperatorKind::kernel, 8);
    for (const SpectrumGap& row : align_spectra(num, ref, 3)) {
        CHECK(row.gap <= 1e-2);
    }
}

TEST_CASE("constant laplacian has 0 and -p with multiplicity n-1") {
    const StepGraphon w = project_to_step(Graphon::constant(0.6), 8);
    const SpectralDecomposition d = decompose_laplacian(w);
    CHECK(d.positive.empty());
    CHECK(d.zero_multiplicity == 1);
    REQUIRE(d.negative.size() == 7);
    for (double v : d.negative) CHECK(std::fabs(v + 0.6) <= 1e-12);
}

TEST_CASE("zero graphon laplacian is identically zero") {
    const SpectralDecomposition d = decompose_laplacian(StepGraphon(Eigen::MatrixXd::Zero(5, 5)));
    CHECK(d.positive.empty());
    CHECK(d.negative.empty());
    CHECK(d.zero_multiplicity == 5);
}

TEST_CASE("aligned bipartite laplacian clusters match the closed list") {
    const StepGraphon w = project_to_step(Graphon::bipartite(0.25, 0.8), 8);
    const SpectralDecomposition d = decompose_laplacian(w);
    CHECK(d.positive.empty());
    CHECK(d.zero_multiplicity == 1);
    REQUIRE(d.negative.size() == 7);
    // Ascending-from-most-negative list: -p, -p(1-alpha), then -p alpha x5.
    CHECK(std::fabs(d.negative[0] + 0.8) <= 1e-12);
    CHECK(std::fabs(d.negative[1] + 0.6) <= 1e-12);
    for (int k = 2; k < 7; ++k) CHECK(std::fabs(d.negative[static_cast<std::size_t>(k)] + 0.2) <= 1e-12);
}

TEST_CASE("laplacian eigenvalues are nonpositive and kill the constant vector") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const StepGraphon w(random_symmetric(9, 40 + seed));
        const SpectralDecomposition d = decompose_laplacian(w);
        CHECK(d.positive.empty());
        // Row sums of the Laplacian matrix vanish, so the constant vector is
        // an eigenvector at 0.
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(9);
        CHECK((laplacian_matrix(w) * ones).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(d.zero_multiplicity >= 1);
    }
}

TEST_CASE("kernel eigenvalues never leave [-1, 1]") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SpectralDecomposition d = decompose_kernel(StepGraphon(random_symmetric(7, 60 + seed)));
        for (double v : d.eigenvalues) CHECK(std::fabs(v) <= 1.0 + 1e-12);
    }
}

TEST_CASE("trace and norm identities hold across a mixed corpus") {
    std::vector<StepGraphon> corpus;
    corpus.push_back(project_to_step(Graphon::bipartite(0.25, 0.8), 8));
    corpus.push_back(project_to_step(Graphon::small_world(0.8, 0.2, 0.25), 32));
    corpus.push_back(project_to_step(Graphon::constant(0.4), 6));
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        corpus.push_back(StepGraphon(random_symmetric(8, 70 + seed)));
    }
    for (const StepGraphon& w : corpus) {
        check_operator_identities(decompose_kernel(w), kernel_matrix(w));
        check_operator_identities(decompose_laplacian(w), laplacian_matrix(w));
    }
}

TEST_CASE("closed-form spectra of the parametric families") {
    const SpectralDecomposition c =
        closed_form_spectrum(Graphon::constant(0.7), OperatorKind::kernel, 3);
    REQUIRE(c.positive.size() == 1);
    CHECK(c.positive[0] == 0.7);
    CHECK(c.zero_multiplicity == -1);

    const SpectralDecomposition cl =
        closed_form_spectrum(Graphon::constant(0.7), OperatorKind::laplacian, 3);
    CHECK(cl.positive.empty());
    REQUIRE(cl.negative.size() == 1);
    CHECK(cl.negative[0] == -0.7);

    const SpectralDecomposition b =
        closed_form_spectrum(Graphon::bipartite(0.25, 0.8), OperatorKind::kernel, 3);
    const double lam = 0.8 * std::sqrt(0.1875);
    REQUIRE(b.positive.size() == 1);
    REQUIRE(b.negative.size() == 1);
    CHECK(b.positive[0] == doctest::Approx(lam).epsilon(1e-15));
    CHECK(b.negative[0] == doctest::Approx(-lam).epsilon(1e-15));

    const SpectralDecomposition bl =
        closed_form_spectrum(Graphon::bipartite(0.25, 0.8), OperatorKind::laplacian, 3);
    REQUIRE(bl.negative.size() == 3);
    CHECK(bl.negative[0] == doctest::Approx(-0.8).epsilon(1e-15));
    CHECK(bl.negative[1] == doctest::Approx(-0.6).epsilon(1e-15));
    CHECK(bl.negative[2] == doctest::Approx(-0.2).epsilon(1e-15));

    const SpectralDecomposition s =
        closed_form_spectrum(Graphon::small_world(0.8, 0.2, 0.25), OperatorKind::kernel, 3);
    // mu_0 = 0.5; k = 1 doublet 0.6/pi; k = 2 lands on a sine zero; k = 3
    // doublet -0.6/(3 pi).
    REQUIRE(s.positive.size() == 3);
    CHECK(s.positive[0] == 0.5);
    CHECK(s.positive[1] == doctest::Approx(0.6 / M_PI).epsilon(1e-14));
    CHECK(s.positive[2] == s.positive[1]);
    REQUIRE(s.negative.size() == 2);
    CHECK(s.negative[0] == doctest::Approx(-0.6 / (3.0 * M_PI)).epsilon(1e-14));
    CHECK(s.negative[1] == s.negative[0]);

    // q = p collapses to the constant kernel: every nonzero mode vanishes.
    const SpectralDecomposition flat =
        closed_form_spectrum(Graphon::small_world(0.3, 0.3, 0.2), OperatorKind::kernel, 4);
    REQUIRE(flat.positive.size() == 1);
    CHECK(flat.positive[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(flat.negative.empty());
}

TEST_CASE("closed-form spectrum rejects unsupported combinations") {
    CHECK_THROWS_AS(
        closed_form_spectrum(Graphon::small_world(0.8, 0.2, 0.25), OperatorKind::laplacian, 3),
        ValidationError);
    CHECK_THROWS_AS(closed_form_spectrum(
                        Graphon::step(StepGraphon(Eigen::MatrixXd::Zero(2, 2))),
                        OperatorKind::kernel, 3),
                    ValidationError);
    CHECK_THROWS_AS(closed_form_spectrum(Graphon::constant(0.5), OperatorKind::kernel, -1),
                    ValidationError);
}

TEST_CASE("spectral measure groups eigenvalues into separated atoms") {
    const StepGraphon w = project_to_step(Graphon::bipartite(0.25, 0.8), 8);
    const SpectralMeasure m = to_spectral_measure(decompose_kernel(w));
    REQUIRE(m.atoms.size() == 3);
    const double lam = 0.8 * std::sqrt(0.1875);
    CHECK(std::fabs(m.atoms[0].eigenvalue - lam) <= 1e-12);
    CHECK(m.atoms[0].multiplicity == 1);
    CHECK(std::fabs(m.atoms[1].eigenvalue) <= 1e-12);
    CHECK(m.atoms[1].multiplicity == 6);
    CHECK(std::fabs(m.atoms[2].eigenvalue + lam) <= 1e-12);
    CHECK(m.atoms[2].multiplicity == 1);

    int total = 0;
    for (const auto& atom : m.atoms) total += atom.multiplicity;
    CHECK(total == m.dim);
    for (std::size_t k = 0; k + 1 < m.atoms.size(); ++k) {
        CHECK(m.atoms[k].eigenvalue - m.atoms[k + 1].eigenvalue > m.tol);
    }

    // Bases are orthonormal and mutually orthogonal: assembled, they form an
    // orthogonal matrix.
    Eigen::MatrixXd all(m.dim, m.dim);
    int col = 0;
    for (const auto& atom : m.atoms) {
        all.middleCols(col, atom.multiplicity) = atom.basis;
        col += atom.multiplicity;
    }
    CHECK((all.transpose() * all - Eigen::MatrixXd::Identity(m.dim, m.dim)).cwiseAbs().maxCoeff() <=
          1e-10);
}

TEST_CASE("closed-form measure carries the doublet and an unspecified zero atom") {
    const SpectralMeasure m = to_spectral_measure(
        closed_form_spectrum(Graphon::small_world(0.8, 0.2, 0.25), OperatorKind::kernel, 1));
    REQUIRE(m.atoms.size() == 3);
    CHECK(m.atoms[0].eigenvalue == 0.5);
    CHECK(m.atoms[0].multiplicity == 1);
    CHECK(m.atoms[1].eigenvalue == doctest::Approx(0.6 / M_PI).epsilon(1e-14));
    CHECK(m.atoms[1].multiplicity == 2);
    CHECK(m.atoms[2].eigenvalue == 0.0);
    CHECK(m.atoms[2].multiplicity == -1);
}

TEST_CASE("interval projections select atoms on (a, b]") {
    const StepGraphon w = project_to_step(Graphon::bipartite(0.25, 0.8), 8);
    const SpectralMeasure m = to_spectral_measure(decompose_kernel(w));

    const IntervalProjection all = project_interval(m, -1.0, 1.0);
    CHECK(all.rank == 8);
    CHECK((all.matrix - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-10);

    const IntervalProjection none = project_interval(m, 0.5, 1.0);
    CHECK(none.rank == 0);
    CHECK(none.matrix.cwiseAbs().maxCoeff() == 0.0);

    const IntervalProjection top = project_interval(m, 0.2, 1.0);
    CHECK(top.rank == 1);
    CHECK((top.matrix * top.matrix - top.matrix).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((top.matrix - top.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(std::fabs(top.matrix.trace() - 1.0) <= 1e-10);

    // Half-open orientation: an endpoint exactly at an atom includes it as b
    // and excludes it as a.  Use the measure's own atom values so the check
    // is not hostage to eigensolver rounding.
    const double bottom = m.atoms[2].eigenvalue;
    const double peak = m.atoms[0].eigenvalue;
    CHECK(project_interval(m, bottom, peak).rank == 7);   // zero atom + top atom
    CHECK(project_interval(m, -1.0, bottom).rank == 1);   // bottom atom alone
    CHECK_THROWS_AS(project_interval(m, 0.5, 0.5), ValidationError);
}

TEST_CASE("interval projection rank is unspecified over a closed-form zero atom") {
    const SpectralMeasure m = to_spectral_measure(
        closed_form_spectrum(Graphon::bipartite(0.25, 0.8), OperatorKind::kernel, 1));
    CHECK(project_interval(m, -0.1, 0.1).rank == -1);
    CHECK(project_interval(m, 0.2, 1.0).rank == 1);
}

TEST_CASE("interval additivity over adjacent intervals") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const SpectralMeasure m =
            to_spectral_measure(decompose_kernel(StepGraphon(random_symmetric(7, 80 + seed))));
        // Split at a safe midpoint between two adjacent atoms.
        const double mid =
            0.5 * (m.atoms[m.atoms.size() / 2].eigenvalue +
                   m.atoms[m.atoms.size() / 2 - 1].eigenvalue);
        const IntervalProjection left = project_interval(m, -2.0, mid);
        const IntervalProjection right = project_interval(m, mid, 2.0);
        const IntervalProjection whole = project_interval(m, -2.0, 2.0);
        CHECK((left.matrix + right.matrix - whole.matrix).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(left.rank + right.rank == whole.rank);
    }
}

TEST_CASE("projection distance separates and bounds") {
    const StepGraphon w = project_to_step(Graphon::bipartite(0.25, 0.8), 8);
    const SpectralMeasure m = to_spectral_measure(decompose_kernel(w));
    const IntervalProjection top = project_interval(m, 0.2, 1.0);
    const IntervalProjection bottom = project_interval(m, -1.0, -0.2);

    CHECK(projection_distance(top, top) == 0.0);
    // Orthogonal ranges: distance exactly 1.
    CHECK(projection_distance(top, bottom) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(projection_distance(top, bottom) <= 1.0 + 1e-12);
}

TEST_CASE("projection distance equals the sine of the principal angle") {
    // Rank-one kernels with eigenvectors at 45 degrees: (1,1)/sqrt(2) vs (1,0).
    Eigen::MatrixXd a(2, 2), b(2, 2);
    a << 1.0, 1.0, 1.0, 1.0;
    b << 1.0, 0.0, 0.0, 0.0;
    const SpectralMeasure ma = to_spectral_measure(decompose_kernel(StepGraphon(a)));
    const SpectralMeasure mb = to_spectral_measure(decompose_kernel(StepGraphon(b)));
    const IntervalProjection pa = project_interval(ma, 0.25, 2.0);
    const IntervalProjection pb = project_interval(mb, 0.25, 2.0);
    REQUIRE(pa.rank == 1);
    REQUIRE(pb.rank == 1);
    CHECK(projection_distance(pa, pb) ==
          doctest::Approx(std::sin(M_PI / 4.0)).epsilon(1e-12));
}

TEST_CASE("projection distance requires equal ambient dimensions") {
    const SpectralMeasure m8 = to_spectral_measure(
        decompose_kernel(project_to_step(Graphon::bipartite(0.25, 0.8), 8)));
    const SpectralMeasure m16 = to_spectral_measure(
        decompose_kernel(project_to_step(Graphon::bipartite(0.25, 0.8), 16)));
    const IntervalProjection p8 = project_interval(m8, 0.2, 1.0);
    const IntervalProjection p16 = project_interval(m16, 0.2, 1.0);
    CHECK_THROWS_AS(projection_distance(p8, p16), ValidationError);
}

TEST_CASE("pullback covariance: equal spectra, conjugated projections") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const StepGraphon w(random_symmetric(8, 500 + seed));
        std::vector<int> perm = {5, 2, 7, 0, 3, 6, 1, 4};
        const BlockPermutation sigma(perm);
        const StepGraphon moved = pullback(w, sigma);

        const SpectralDecomposition dw = decompose_kernel(w);
        const SpectralDecomposition dm = decompose_kernel(moved);
        REQUIRE(dw.eigenvalues.size() == dm.eigenvalues.size());
        for (std::size_t k = 0; k < dw.eigenvalues.size(); ++k) {
            CHECK(dw.eigenvalues[k] == dm.eigenvalues[k]);  // exactly
        }

        // moved(i, j) = w(sigma(i), sigma(j)) means P_moved = Q P_w Q^T with
        // Q e_{sigma(i)} = e_i.
        Eigen::MatrixXd q = Eigen::MatrixXd::Zero(8, 8);
        for (int i = 0; i < 8; ++i) q(i, sigma(i)) = 1.0;

        const SpectralMeasure mw = to_spectral_measure(dw);
        const SpectralMeasure mm = to_spectral_measure(dm);
        const double a = 0.5 * (dw.eigenvalue(2) + dw.eigenvalue(1));
        const IntervalProjection pw = project_interval(mw, a, 2.0);
        const IntervalProjection pm = project_interval(mm, a, 2.0);
        REQUIRE(pw.rank == 1);
        REQUIRE(pm.rank == 1);
        CHECK((pm.matrix - q * pw.matrix * q.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("vague diagnostic reports distances for matched dimensions") {
    const StepGraphon w = project_to_step(Graphon::bipartite(0.25, 0.8), 8);
    const SpectralMeasure m = to_spectral_measure(decompose_kernel(w));
    const auto reports = vague_diagnostic(m, m, {{0.2, 1.0}, {-1.0, -0.2}});
    REQUIRE(reports.size() == 2);
    for (const VagueReport& r : reports) {
        CHECK(r.rank_n == r.rank);
        REQUIRE(r.distance.has_value());
        CHECK(*r.distance == 0.0);
    }
}

TEST_CASE("vague diagnostic falls back to rank comparison across dimensions") {
    const SpectralMeasure m8 = to_spectral_measure(
        decompose_kernel(project_to_step(Graphon::bipartite(0.25, 0.8), 8)));
    const SpectralMeasure m16 = to_spectral_measure(
        decompose_kernel(project_to_step(Graphon::bipartite(0.25, 0.8), 16)));
    const auto reports = vague_diagnostic(m16, m8, {{0.2, 1.0}});
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].rank_n == 1);
    CHECK(reports[0].rank == 1);
    CHECK_FALSE(reports[0].distance.has_value());
}

TEST_CASE("vague diagnostic rejects endpoints at atoms or zero, naming them") {
    const StepGraphon w = project_to_step(Graphon::bipartite(0.25, 0.8), 8);
    const SpectralMeasure m = to_spectral_measure(decompose_kernel(w));
    const double lam = 0.8 * std::sqrt(0.1875);

    CHECK_THROWS_WITH_AS(vague_diagnostic(m, m, {{lam, 1.0}}), doctest::Contains("atom"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(vague_diagnostic(m, m, {{-1.0, 0.0}}),
                         doctest::Contains("accumulation point"), ValidationError);
}

TEST_CASE("align_spectra pairs the two-sided indices") {
    const StepGraphon w = project_to_step(Graphon::bipartite(0.25, 0.8), 8);
    const SpectralDecomposition d = decompose_kernel(w);
    const auto rows = align_spectra(d, d, 3);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].j == 1);
    CHECK(rows[3].j == -1);
    for (const SpectrumGap& r : rows) CHECK(r.gap == 0.0);

    const SpectralDecomposition a =
        decompose_kernel(StepGraphon(Eigen::MatrixXd::Constant(1, 1, 0.5)));
    const SpectralDecomposition b =
        decompose_kernel(StepGraphon(Eigen::MatrixXd::Constant(1, 1, 0.8)));
    const auto gap = align_spectra(a, b, 1);
    REQUIRE(gap.size() == 2);
    CHECK(gap[0].gap == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(gap[1].gap == 0.0);
}

TEST_CASE("closed-form alignment of the aligned bipartite discretization is exact") {
    const SpectralDecomposition num =
        decompose_kernel(project_to_step(Graphon::bipartite(0.25, 0.8), 8));
    const SpectralDecomposition ref =
        closed_form_spectrum(Graphon::bipartite(0.25, 0.8), OperatorKind::kernel, 1);
    const auto rows = align_spectra(num, ref, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].gap <= 1e-12);
    CHECK(rows[1].gap <= 1e-12);
}
