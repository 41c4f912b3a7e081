#include "graphon/sampler.hpp"

#include "graphon/errors.hpp"
#include "graphon/rng.hpp"

namespace graphon {

AdjacencyMatrix::AdjacencyMatrix(int n) : n_(n) {
    if (n <= 0) throw ValidationError("adjacency: vertex count must be positive");
    bits_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

std::size_t AdjacencyMatrix::index(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) {
        throw ValidationError("adjacency: vertex index out of range");
    }
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
}

bool AdjacencyMatrix::edge(int i, int j) const { return bits_[index(i, j)] != 0; }

void AdjacencyMatrix::set_edge(int i, int j, bool present) {
    if (i == j) throw ValidationError("adjacency: no self-loops");
    bits_[index(i, j)] = present ? 1 : 0;
    bits_[index(j, i)] = present ? 1 : 0;
}

long long AdjacencyMatrix::edge_count() const {
    long long c = 0;
    for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
            if (edge(i, j)) ++c;
        }
    }
    return c;
}

AdjacencyMatrix sample(const Graphon& w, const SampleConfig& cfg) {
    if (cfg.n <= 0) throw ValidationError("sample: n must be positive");
    const StepGraphon probs = project_to_step(w, cfg.n);
    AdjacencyMatrix g(cfg.n);
    for (int i = 0; i < cfg.n; ++i) {
        for (int j = i + 1; j < cfg.n; ++j) {
            const double u = rng::uniform53(cfg.seed, static_cast<std::uint32_t>(i),
                                            static_cast<std::uint32_t>(j));
            g.set_edge(i, j, u < probs.values()(i, j));
        }
    }
    return g;
}

StepGraphon lift(const AdjacencyMatrix& g) {
    const int n = g.size();
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (g.edge(i, j)) {
                v(i, j) = 1.0;
                v(j, i) = 1.0;
            }
        }
    }
    return StepGraphon(std::move(v));
}

}  // namespace graphon
