#pragma once

#include <optional>
#include <vector>

#include "graphon/graphon.hpp"

namespace graphon {

// Eigendecomposition of a step-graphon operator, with the two-sided indexing
// convention: positive eigenvalues descending as j = 1, 2, ..; negative ones
// ascending from the most negative as j = -1, -2, ..; both sides padded with
// zeros beyond the lists.  `eigenvalue(0)` is invalid.
//
// Finite decompositions carry all `dim` eigenvalues (descending) and an
// orthonormal column basis aligned with them.  Closed-form spectra have
// dim == 0 and no vectors; kernel closed forms list true multiplicities
// (small-world doublets appear twice), Laplacian closed forms list each
// distinct nonzero eigenvalue once because the step eigenspaces have infinite
// dimension in the continuum, and zero_multiplicity is -1 (unspecified).
struct SpectralDecomposition {
    std::vector<double> eigenvalues;  // all of them, descending; empty for closed forms
    Eigen::MatrixXd vectors;          // dim x dim, column k matches eigenvalues[k]; 0x0 for closed forms

    std::vector<double> positive;  // > tol, descending
    std::vector<double> negative;  // < -tol, ascending from the most negative
    int zero_multiplicity = 0;     // -1 when unspecified (closed forms)

    int dim() const { return static_cast<int>(vectors.rows()); }
    double eigenvalue(int j) const;  // two-sided index, zero-padded
    double grouping_tolerance() const { return tol; }

    double tol = 1e-8;
};

enum class OperatorKind { kernel, laplacian };

// Kernel operator of an n-block step graphon: the matrix values / n acting on
// block coordinates.  Eigenvalues all lie in [-1, 1].
SpectralDecomposition decompose_kernel(const StepGraphon& w);

// Laplacian operator: values / n - diag(row means).  Nonpositive for any
// step graphon (checked by tests, not assumed here).
SpectralDecomposition decompose_laplacian(const StepGraphon& w);

// Closed-form spectra for the parametric families:
//   Constant  kernel     {p};         Laplacian {0, -p}
//   Bipartite kernel     +-p sqrt(alpha(1-alpha));
//             Laplacian  {0, -p, -p alpha, -p(1-alpha)}
//   SmallWorld kernel    mu_0 = 2rq + (1-2r)p and doublets
//                        mu_k = ((q-p)/(pi k)) sin(2 pi k r), k = 1..k_max;
//             Laplacian  unsupported (validation error)
// Step inputs are rejected; use the numeric decompositions.
SpectralDecomposition closed_form_spectrum(const Graphon& w, OperatorKind op, int k_max = 8);

// Atom of a spectral measure: an eigenvalue cluster with an orthonormal basis
// of its eigenspace.  multiplicity -1 = unspecified (infinite-dimensional or
// unmaterialized closed-form eigenspace); basis may be 0x0 for closed forms.
struct SpectralAtom {
    double eigenvalue;
    int multiplicity;
    Eigen::MatrixXd basis;  // dim x multiplicity when materialized
};

struct SpectralMeasure {
    std::vector<SpectralAtom> atoms;  // descending by eigenvalue
    int dim = 0;                      // ambient dimension; 0 for closed forms
    double tol = 1e-8;                // grouping tolerance used to form atoms
};

// Group eigenvalues into atoms by chaining gaps <= the decomposition's
// grouping tolerance; atom eigenvalue is the cluster mean.  Closed-form
// decompositions gain an explicit zero atom (the kernel operator always has 0
// in its continuum spectrum) with multiplicity -1.
SpectralMeasure to_spectral_measure(const SpectralDecomposition& d);

// Spectral projection onto the half-open interval (a, b].
struct IntervalProjection {
    double a;
    double b;
    int rank;                // -1 when the interval covers an atom of unspecified multiplicity
    Eigen::MatrixXd matrix;  // dim x dim; 0x0 for closed-form measures
};
IntervalProjection project_interval(const SpectralMeasure& m, double a, double b);

// Operator norm of the difference of two materialized projections of equal
// ambient dimension.
double projection_distance(const IntervalProjection& p, const IntervalProjection& q);

// Interval endpoints for the convergence diagnostic.
struct VagueInterval {
    double a;
    double b;
};

struct VagueReport {
    double a;
    double b;
    int rank_n;                     // rank of the first measure's projection
    int rank;                       // rank of the reference measure's projection
    std::optional<double> distance;  // set when both projections are materialized with equal dim
};

// Rank (and, when possible, distance) comparison of two spectral measures
// over intervals whose endpoints avoid the reference measure's atoms: each
// endpoint must stay more than the grouping tolerance away from every atom of
// `ref`, and away from zero.  Violations raise a validation error naming the
// offending atom.
std::vector<VagueReport> vague_diagnostic(const SpectralMeasure& mn, const SpectralMeasure& ref,
                                          const std::vector<VagueInterval>& intervals);

// Two-sided index alignment of two spectra: rows (j, lambda_j of a, lambda_j
// of b, |difference|) for j = 1..window then j = -1..-window.
struct SpectrumGap {
    int j;
    double lambda_a;
    double lambda_b;
    double gap;
};
std::vector<SpectrumGap> align_spectra(const SpectralDecomposition& a,
                                       const SpectralDecomposition& b, int window);

}  // namespace graphon
