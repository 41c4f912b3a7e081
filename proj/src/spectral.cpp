#include "graphon/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

double grouping_tol_for(double max_abs) { return std::max(1e-8, 1e-6 * max_abs); }

// Permutation-invariant row key: row entries accumulated in sorted order, so
// relabeled copies of a graphon produce the identical key multiset bit for
// bit.  Rows are then processed in descending key order, which makes the
// whole decomposition exactly covariant under block relabelings whenever the
// keys are distinct (ties fall back to index order, which only matters for
// rows that are themselves permutations of each other).
std::vector<double> row_keys(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<double> keys(static_cast<std::size_t>(n));
    std::vector<double> row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = m(i, j);
        std::sort(row.begin(), row.end());
        double acc = 0.0;
        for (double v : row) acc += v;
        keys[static_cast<std::size_t>(i)] = acc;
    }
    return keys;
}

std::vector<int> canonical_order(const std::vector<double>& keys) {
    std::vector<int> idx(keys.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&keys](int a, int b) {
        return keys[static_cast<std::size_t>(a)] > keys[static_cast<std::size_t>(b)];
    });
    return idx;
}

bool column_less(const Eigen::MatrixXd& v, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        if (v(i, a) != v(i, b)) return v(i, a) < v(i, b);
    }
    return false;
}

// Solve the symmetric eigenproblem for `op` given on block coordinates,
// reordering rows into the canonical order first and mapping eigenvectors
// back so the result is a decomposition of `op` itself.
SpectralDecomposition decompose_matrix(const Eigen::MatrixXd& op, const std::vector<int>& order) {
    const int n = static_cast<int>(op.rows());
    Eigen::MatrixXd canon(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            canon(i, j) = op(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(canon);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigendecomposition failed to converge");
    }

    SpectralDecomposition d;
    d.eigenvalues.resize(static_cast<std::size_t>(n));
    d.vectors.resize(n, n);
    // Eigen returns ascending eigenvalues; flip to descending and scatter the
    // vector rows back to the original block order.
    for (int k = 0; k < n; ++k) {
        const int src = n - 1 - k;
        d.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()[src];
        for (int i = 0; i < n; ++i) {
            d.vectors(order[static_cast<std::size_t>(i)], k) = solver.eigenvectors()(i, src);
        }
    }

    // Deterministic column representatives: first coordinate of magnitude
    // above 1e-12 made positive, then exact eigenvalue ties sorted by column
    // content.  Neither step changes any spectral projection.
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            const double v = d.vectors(i, k);
            if (std::fabs(v) > 1e-12) {
                if (v < 0.0) d.vectors.col(k) = -d.vectors.col(k);
                break;
            }
        }
    }
    int k = 0;
    while (k < n) {
        int e = k + 1;
        while (e < n && d.eigenvalues[static_cast<std::size_t>(e)] ==
                            d.eigenvalues[static_cast<std::size_t>(k)]) {
            ++e;
        }
        if (e - k > 1) {
            std::vector<int> cols(static_cast<std::size_t>(e - k));
            std::iota(cols.begin(), cols.end(), k);
            std::sort(cols.begin(), cols.end(), [&d](int a, int b) {
                return column_less(d.vectors, a, b);
            });
            Eigen::MatrixXd tmp(n, e - k);
            for (int c = 0; c < e - k; ++c) tmp.col(c) = d.vectors.col(cols[static_cast<std::size_t>(c)]);
            d.vectors.middleCols(k, e - k) = tmp;
        }
        k = e;
    }

    double max_abs = 0.0;
    for (double v : d.eigenvalues) max_abs = std::max(max_abs, std::fabs(v));
    d.tol = grouping_tol_for(max_abs);
    for (double v : d.eigenvalues) {
        if (v > d.tol) {
            d.positive.push_back(v);
        } else if (v < -d.tol) {
            d.negative.push_back(v);
        } else {
            ++d.zero_multiplicity;
        }
    }
    std::sort(d.negative.begin(), d.negative.end());  // most negative first
    return d;
}

}  // namespace

double SpectralDecomposition::eigenvalue(int j) const {
    if (j == 0) throw ValidationError("spectrum index 0 is not defined; use j >= 1 or j <= -1");
    if (j > 0) {
        const std::size_t k = static_cast<std::size_t>(j - 1);
        return k < positive.size() ? positive[k] : 0.0;
    }
    const std::size_t k = static_cast<std::size_t>(-j - 1);
    return k < negative.size() ? negative[k] : 0.0;
}

SpectralDecomposition decompose_kernel(const StepGraphon& w) {
    const int n = w.blocks();
    const Eigen::MatrixXd op = w.values() / static_cast<double>(n);
    return decompose_matrix(op, canonical_order(row_keys(w.values())));
}

SpectralDecomposition decompose_laplacian(const StepGraphon& w) {
    const int n = w.blocks();
    const std::vector<double> keys = row_keys(w.values());
    Eigen::MatrixXd op = w.values() / static_cast<double>(n);
    // Row means from the same permutation-invariant sums as the row keys.
    for (int i = 0; i < n; ++i) op(i, i) -= keys[static_cast<std::size_t>(i)] / n;
    return decompose_matrix(op, canonical_order(keys));
}

SpectralDecomposition closed_form_spectrum(const Graphon& w, OperatorKind op, int k_max) {
    if (k_max < 0) throw ValidationError("closed_form_spectrum: k_max must be nonnegative");
    SpectralDecomposition d;
    d.zero_multiplicity = -1;

    struct V {
        OperatorKind op;
        int k_max;
        SpectralDecomposition& d;

        void operator()(const ConstantGraphon& g) const {
            if (op == OperatorKind::kernel) {
                if (g.p > 0.0) d.positive.push_back(g.p);
            } else {
                if (g.p > 0.0) d.negative.push_back(-g.p);
            }
        }
        void operator()(const BipartiteGraphon& g) const {
            if (op == OperatorKind::kernel) {
                const double lam = g.p * std::sqrt(g.alpha * (1.0 - g.alpha));
                if (lam > 0.0) {
                    d.positive.push_back(lam);
                    d.negative.push_back(-lam);
                }
            } else {
                // Distinct nonzero values; the two step eigenspaces are
                // infinite-dimensional in the continuum.
                if (g.p > 0.0) {
                    d.negative = {-g.p, -g.p * (1.0 - g.alpha), -g.p * g.alpha};
                    std::sort(d.negative.begin(), d.negative.end());
                }
            }
        }
        void operator()(const SmallWorldGraphon& g) const {
            if (op != OperatorKind::kernel) {
                throw ValidationError(
                    "closed_form_spectrum: small-world Laplacian has no closed form here; "
                    "use decompose_laplacian on a step projection");
            }
            const double mu0 = 2.0 * g.r * g.q + (1.0 - 2.0 * g.r) * g.p;
            std::vector<double> vals;
            vals.push_back(mu0);
            const double pi = 3.14159265358979323846;
            for (int k = 1; k <= k_max; ++k) {
                const double mu = (g.q - g.p) / (pi * k) * std::sin(2.0 * pi * k * g.r);
                vals.push_back(mu);
                vals.push_back(mu);  // cosine/sine doublet
            }
            // Classify against the grouping tolerance so exact zeros hit by
            // floating-point sin noise (for example sin(pi)) stay zeros.
            double max_abs = 0.0;
            for (double v : vals) max_abs = std::max(max_abs, std::fabs(v));
            const double tol = grouping_tol_for(max_abs);
            for (double v : vals) {
                if (v > tol) {
                    d.positive.push_back(v);
                } else if (v < -tol) {
                    d.negative.push_back(v);
                }
            }
            std::sort(d.positive.begin(), d.positive.end(), std::greater<>());
            std::sort(d.negative.begin(), d.negative.end());
        }
        void operator()(const StepGraphon&) const {
            throw ValidationError(
                "closed_form_spectrum: step graphons have no closed form; use decompose_kernel "
                "or decompose_laplacian");
        }
    };
    std::visit(V{op, k_max, d}, w.kernel());

    double max_abs = 0.0;
    for (double v : d.positive) max_abs = std::max(max_abs, std::fabs(v));
    for (double v : d.negative) max_abs = std::max(max_abs, std::fabs(v));
    d.tol = grouping_tol_for(max_abs);
    return d;
}

SpectralMeasure to_spectral_measure(const SpectralDecomposition& d) {
    SpectralMeasure m;
    m.dim = d.dim();
    m.tol = d.tol;

    if (m.dim > 0) {
        const int n = m.dim;
        int k = 0;
        while (k < n) {
            int e = k + 1;
            while (e < n && d.eigenvalues[static_cast<std::size_t>(e - 1)] -
                                    d.eigenvalues[static_cast<std::size_t>(e)] <=
                                d.tol) {
                ++e;
            }
            SpectralAtom atom;
            double acc = 0.0;
            for (int i = k; i < e; ++i) acc += d.eigenvalues[static_cast<std::size_t>(i)];
            atom.eigenvalue = acc / (e - k);
            atom.multiplicity = e - k;
            atom.basis = d.vectors.middleCols(k, e - k);
            m.atoms.push_back(std::move(atom));
            k = e;
        }
        return m;
    }

    // Closed form: nonzero lists plus the implicit zero atom.
    std::vector<double> vals;
    vals.insert(vals.end(), d.positive.begin(), d.positive.end());
    vals.push_back(0.0);
    vals.insert(vals.end(), d.negative.begin(), d.negative.end());
    std::sort(vals.begin(), vals.end(), std::greater<>());
    std::size_t k = 0;
    while (k < vals.size()) {
        std::size_t e = k + 1;
        while (e < vals.size() && vals[e - 1] - vals[e] <= d.tol) ++e;
        SpectralAtom atom;
        double acc = 0.0;
        bool has_zero = false;
        for (std::size_t i = k; i < e; ++i) {
            acc += vals[i];
            if (vals[i] == 0.0) has_zero = true;
        }
        atom.eigenvalue = acc / static_cast<double>(e - k);
        atom.multiplicity = has_zero ? -1 : static_cast<int>(e - k);
        m.atoms.push_back(std::move(atom));
        k = e;
    }
    return m;
}

IntervalProjection project_interval(const SpectralMeasure& m, double a, double b) {
    if (!(a < b)) throw ValidationError("project_interval: require a < b");
    IntervalProjection p{a, b, 0, Eigen::MatrixXd()};
    if (m.dim > 0) p.matrix = Eigen::MatrixXd::Zero(m.dim, m.dim);
    for (const auto& atom : m.atoms) {
        if (atom.eigenvalue > a && atom.eigenvalue <= b) {
            if (atom.multiplicity < 0) {
                p.rank = -1;
            } else if (p.rank >= 0) {
                p.rank += atom.multiplicity;
            }
            if (m.dim > 0 && atom.basis.cols() > 0) {
                p.matrix += atom.basis * atom.basis.transpose();
            }
        }
    }
    return p;
}

double projection_distance(const IntervalProjection& p, const IntervalProjection& q) {
    if (p.matrix.rows() == 0 || q.matrix.rows() == 0) {
        throw ValidationError("projection_distance: both projections must be materialized");
    }
    if (p.matrix.rows() != q.matrix.rows()) {
        throw ValidationError("projection_distance: ambient dimensions differ");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(p.matrix - q.matrix,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("projection_distance: eigendecomposition failed to converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<VagueReport> vague_diagnostic(const SpectralMeasure& mn, const SpectralMeasure& ref,
                                          const std::vector<VagueInterval>& intervals) {
    for (const auto& iv : intervals) {
        if (!(iv.a < iv.b)) throw ValidationError("vague_diagnostic: require a < b");
        for (const double endpoint : {iv.a, iv.b}) {
            if (std::fabs(endpoint) <= ref.tol) {
                std::ostringstream os;
                os << "vague_diagnostic: endpoint " << endpoint
                   << " touches the spectral accumulation point 0; intervals must avoid it";
                throw ValidationError(os.str());
            }
            for (const auto& atom : ref.atoms) {
                if (std::fabs(endpoint - atom.eigenvalue) <= ref.tol) {
                    std::ostringstream os;
                    os << "vague_diagnostic: endpoint " << endpoint
                       << " is within the grouping tolerance of the reference atom at "
                       << atom.eigenvalue << " (multiplicity " << atom.multiplicity
                       << "); rank comparison is unstable there";
                    throw ValidationError(os.str());
                }
            }
        }
    }

    std::vector<VagueReport> out;
    out.reserve(intervals.size());
    for (const auto& iv : intervals) {
        const IntervalProjection pn = project_interval(mn, iv.a, iv.b);
        const IntervalProjection pr = project_interval(ref, iv.a, iv.b);
        VagueReport rep{iv.a, iv.b, pn.rank, pr.rank, std::nullopt};
        if (pn.matrix.rows() > 0 && pn.matrix.rows() == pr.matrix.rows()) {
            rep.distance = projection_distance(pn, pr);
        }
        out.push_back(rep);
    }
    return out;
}

std::vector<SpectrumGap> align_spectra(const SpectralDecomposition& a,
                                       const SpectralDecomposition& b, int window) {
    if (window <= 0) throw ValidationError("align_spectra: window must be positive");
    std::vector<SpectrumGap> out;
    out.reserve(static_cast<std::size_t>(2 * window));
    for (int j = 1; j <= window; ++j) {
        const double la = a.eigenvalue(j);
        const double lb = b.eigenvalue(j);
        out.push_back({j, la, lb, std::fabs(la - lb)});
    }
    for (int j = -1; j >= -window; --j) {
        const double la = a.eigenvalue(j);
        const double lb = b.eigenvalue(j);
        out.push_back({j, la, lb, std::fabs(la - lb)});
    }
    return out;
}

}  // namespace graphon
