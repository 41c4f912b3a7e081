#include "graphon/step_graphon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

void check_square(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw ValidationError(std::string(what) + ": values must form a nonempty square matrix");
    }
}

void check_symmetric(const Eigen::MatrixXd& m, double tol, const char* what) {
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol) {
        std::ostringstream os;
        os << what << ": matrix is not symmetric (max |a_ij - a_ji| = " << asym << ")";
        throw ValidationError(os.str());
    }
}

}  // namespace

BlockPermutation::BlockPermutation(std::vector<int> sigma) : sigma_(std::move(sigma)) {
    const int n = static_cast<int>(sigma_.size());
    if (n == 0) throw ValidationError("permutation: empty mapping");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int v : sigma_) {
        if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
            throw ValidationError("permutation: mapping is not a bijection on the blocks");
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

BlockPermutation BlockPermutation::identity(int n) {
    if (n <= 0) throw ValidationError("permutation: size must be positive");
    std::vector<int> s(static_cast<std::size_t>(n));
    std::iota(s.begin(), s.end(), 0);
    return BlockPermutation(std::move(s));
}

BlockPermutation BlockPermutation::from_one_based(const std::vector<int>& sigma) {
    std::vector<int> s;
    s.reserve(sigma.size());
    for (int v : sigma) s.push_back(v - 1);
    return BlockPermutation(std::move(s));
}

BlockPermutation BlockPermutation::inverse() const {
    std::vector<int> inv(sigma_.size());
    for (int i = 0; i < size(); ++i) inv[static_cast<std::size_t>(sigma_[i])] = i;
    return BlockPermutation(std::move(inv));
}

bool BlockPermutation::is_identity() const {
    for (int i = 0; i < size(); ++i) {
        if (sigma_[static_cast<std::size_t>(i)] != i) return false;
    }
    return true;
}

std::string BlockPermutation::cycle_notation() const {
    const int n = size();
    std::vector<char> done(static_cast<std::size_t>(n), 0);
    std::ostringstream os;
    bool any = false;
    for (int start = 0; start < n; ++start) {
        if (done[static_cast<std::size_t>(start)]) continue;
        std::vector<int> cycle;
        int cur = start;
        while (!done[static_cast<std::size_t>(cur)]) {
            done[static_cast<std::size_t>(cur)] = 1;
            cycle.push_back(cur);
            cur = sigma_[static_cast<std::size_t>(cur)];
        }
        if (cycle.size() < 2) continue;
        any = true;
        os << '(';
        for (std::size_t k = 0; k < cycle.size(); ++k) {
            if (k) os << ' ';
            os << cycle[k] + 1;
        }
        os << ')';
    }
    if (!any) return "()";
    return os.str();
}

StepGraphon::StepGraphon(Eigen::MatrixXd values) : values_(std::move(values)) {
    check_square(values_, "step graphon");
    check_symmetric(values_, kSymmetryTol, "step graphon");
    const double lo = values_.minCoeff();
    const double hi = values_.maxCoeff();
    if (lo < 0.0 || hi > 1.0) {
        std::ostringstream os;
        os << "step graphon: values must lie in [0,1] (found range [" << lo << ", " << hi << "])";
        throw ValidationError(os.str());
    }
    // Symmetrize exactly so downstream arithmetic never sees the tolerance.
    values_ = ((values_ + values_.transpose()) / 2.0).eval();
}

int StepGraphon::block_of(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("step graphon: coordinate outside [0,1]");
    const int n = blocks();
    const int idx = static_cast<int>(std::floor(x * n));
    return std::min(idx, n - 1);
}

double StepGraphon::at(double x, double y) const {
    return values_(block_of(x), block_of(y));
}

StepGraphon StepGraphon::refined(int factor) const {
    if (factor <= 0) throw ValidationError("step graphon: refinement factor must be positive");
    const int n = blocks();
    Eigen::MatrixXd out(n * factor, n * factor);
    for (int i = 0; i < n * factor; ++i) {
        for (int j = 0; j < n * factor; ++j) {
            out(i, j) = values_(i / factor, j / factor);
        }
    }
    return StepGraphon(std::move(out));
}

StepKernel::StepKernel(Eigen::MatrixXd values) : values_(std::move(values)) {
    check_square(values_, "step kernel");
    check_symmetric(values_, 1e-12, "step kernel");
    values_ = ((values_ + values_.transpose()) / 2.0).eval();
}

StepKernel StepKernel::refined(int factor) const {
    if (factor <= 0) throw ValidationError("step kernel: refinement factor must be positive");
    const int n = blocks();
    Eigen::MatrixXd out(n * factor, n * factor);
    for (int i = 0; i < n * factor; ++i) {
        for (int j = 0; j < n * factor; ++j) {
            out(i, j) = values_(i / factor, j / factor);
        }
    }
    return StepKernel(std::move(out));
}

namespace {

Eigen::MatrixXd permute_matrix(const Eigen::MatrixXd& m, const BlockPermutation& sigma) {
    const int n = static_cast<int>(m.rows());
    if (sigma.size() != n) {
        throw ValidationError("pullback: permutation size does not match block count");
    }
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out(i, j) = m(sigma(i), sigma(j));
        }
    }
    return out;
}

}  // namespace

StepGraphon pullback(const StepGraphon& w, const BlockPermutation& sigma) {
    return StepGraphon(permute_matrix(w.values(), sigma));
}

StepKernel pullback(const StepKernel& k, const BlockPermutation& sigma) {
    return StepKernel(permute_matrix(k.values(), sigma));
}

int common_refinement_blocks(int na, int nb) {
    if (na <= 0 || nb <= 0) throw ValidationError("refinement: block counts must be positive");
    const long long l = std::lcm(static_cast<long long>(na), static_cast<long long>(nb));
    if (l > 240) {
        std::ostringstream os;
        os << "refinement: common refinement of " << na << " and " << nb << " blocks needs " << l
           << " blocks, above the cap of 240; resample both graphons onto a shared grid instead";
        throw ValidationError(os.str());
    }
    return static_cast<int>(l);
}

std::pair<StepGraphon, StepGraphon> common_refinement(const StepGraphon& a, const StepGraphon& b) {
    const int l = common_refinement_blocks(a.blocks(), b.blocks());
    return {a.refined(l / a.blocks()), b.refined(l / b.blocks())};
}

StepKernel difference(const StepGraphon& a, const StepGraphon& b) {
    auto [ra, rb] = common_refinement(a, b);
    return StepKernel(ra.values() - rb.values());
}

double stable_entry_sum(const Eigen::MatrixXd& m) {
    std::vector<double> entries(m.data(), m.data() + m.size());
    std::sort(entries.begin(), entries.end());
    double acc = 0.0;
    for (double v : entries) acc += v;
    return acc;
}

}  // namespace graphon
