#pragma once

#include <cstdint>
#include <vector>

#include "graphon/step_graphon.hpp"

namespace graphon {

// Witness for a cut-norm value: value = |f^T D g| / n^2 with f, g in {-1,+1}^n.
// The norm is the supremum of |integral f D g| over [-1,1]-valued test
// functions; for a step kernel that is a bilinear maximum over a product of
// cubes, attained at +-1 vertices constant on the blocks, so enumerating sign
// vectors is exact.
struct CutNormCertificate {
    double value;
    std::vector<int> f;  // entries +-1
    std::vector<int> g;
};

// Exact cut norm of a step kernel by enumerating f over {-1,+1}^n with
// f[0] = +1 fixed (global sign flip is redundant) and taking g = sign(D f).
// Gray-code order with incremental D f updates; n <= 25.
CutNormCertificate cut_norm_exact(const StepKernel& d);

// Alternating-maximization heuristic: from a start f, iterate g = sign(D f),
// f = sign(D g) until the objective stops improving.  Runs from the all-ones
// start plus, when restarts >= 1, structured starts (heaviest row signs and
// extreme eigenvector signs) plus `restarts` random starts drawn from a fixed
// internal key, so results are reproducible.  sign(0) := +1.  Never exceeds
// the exact value.
CutNormCertificate cut_norm_heuristic(const StepKernel& d, int restarts = 32);

enum class CutDistanceMode { exact, heuristic };

struct CutDistanceResult {
    double value;
    BlockPermutation sigma;  // argmin relabeling applied to the second graphon
    bool exact;
};

// Cut distance between step graphons restricted to block relabelings of the
// common refinement (refinement capped at 240 blocks).  exact mode enumerates
// all permutations (refined block count <= 8); heuristic mode seeds sigma by
// degree-sorted alignment and improves it by pairwise swaps (swap search up
// to 100 blocks), always also scoring the identity so the result never
// exceeds the unpermuted cut norm.
CutDistanceResult cut_distance(const StepGraphon& a, const StepGraphon& b, CutDistanceMode mode,
                               int restarts = 32);

}  // namespace graphon
