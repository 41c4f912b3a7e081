#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace graphon {

// Permutation of the blocks {0, .., n-1} of a step graphon.  External text
// forms (cycle notation, JSON) are 1-based; the in-memory form is 0-based.
class BlockPermutation {
public:
    explicit BlockPermutation(std::vector<int> sigma);
    static BlockPermutation identity(int n);
    static BlockPermutation from_one_based(const std::vector<int>& sigma);

    int size() const { return static_cast<int>(sigma_.size()); }
    int operator()(int i) const { return sigma_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& mapping() const { return sigma_; }

    BlockPermutation inverse() const;
    bool is_identity() const;

    // Disjoint cycles, 1-based, fixed points omitted, cycles sorted by their
    // smallest element and rotated to start at it.  Identity prints "()".
    std::string cycle_notation() const;

    bool operator==(const BlockPermutation& other) const { return sigma_ == other.sigma_; }

private:
    std::vector<int> sigma_;
};

// Symmetric step function on [0,1]^2 with n equal blocks and values in [0,1].
// Cell i spans [(i)/n, (i+1)/n) in 0-based terms; the last cell is closed at 1.
class StepGraphon {
public:
    explicit StepGraphon(Eigen::MatrixXd values);

    int blocks() const { return static_cast<int>(values_.rows()); }
    const Eigen::MatrixXd& values() const { return values_; }

    // Block index containing x in [0,1].
    int block_of(double x) const;
    double at(double x, double y) const;

    // Refinement by an integer factor: each block splits into `factor` equal
    // blocks; the function on [0,1]^2 is unchanged.
    StepGraphon refined(int factor) const;

    static constexpr double kSymmetryTol = 1e-12;

private:
    Eigen::MatrixXd values_;
};

// Symmetric real-valued step kernel on the same uniform grid.  Differences of
// step graphons and perturbation directions live here; entries are
// unrestricted reals.
class StepKernel {
public:
    explicit StepKernel(Eigen::MatrixXd values);

    int blocks() const { return static_cast<int>(values_.rows()); }
    const Eigen::MatrixXd& values() const { return values_; }

    StepKernel refined(int factor) const;

private:
    Eigen::MatrixXd values_;
};

// Relabeling pullback: result(i, j) = source(sigma(i), sigma(j)).
StepGraphon pullback(const StepGraphon& w, const BlockPermutation& sigma);
StepKernel pullback(const StepKernel& k, const BlockPermutation& sigma);

// Block count of the common refinement (lcm), capped at 240.
int common_refinement_blocks(int na, int nb);
std::pair<StepGraphon, StepGraphon> common_refinement(const StepGraphon& a, const StepGraphon& b);

// a - b on the common refinement grid.
StepKernel difference(const StepGraphon& a, const StepGraphon& b);

// Sum of matrix entries accumulated in value-sorted order.  Invariant under
// any symmetric relabeling of the entries, bit for bit; reductions that must
// be exactly permutation-invariant go through here.
double stable_entry_sum(const Eigen::MatrixXd& m);

}  // namespace graphon
