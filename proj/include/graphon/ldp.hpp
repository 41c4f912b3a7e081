#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "graphon/graphon.hpp"

namespace graphon {

// A nonnegative rate value with +infinity carried as an explicit flag.
struct RateValue {
    double value = 0.0;
    bool infinite = false;
};

// Relative-entropy rate between graphons on the same cell geometry:
//   (1/2) integral of v log(v/w) + (1-v) log((1-v)/(1-w)).
// Infinite when v puts mass where w is degenerate (w = 0 < v or w = 1 > v).
// Step pairs are compared on their common refinement; family pairs must share
// geometry (same family and shape parameter).  Terms are accumulated in
// value-sorted order so block relabelings of both arguments change nothing.
RateValue rate_upsilon(const Graphon& v, const Graphon& w);

// Edge density of the exponentially tilted graphon, as a function of xi:
//   F(xi) = integral of xi W / (1 - W + xi W).
// Strictly increasing in xi from measure{W = 1} to measure{W > 0}.
double constraint_F(const Graphon& w, double xi);

struct TiltSolution {
    double xi;
    Graphon w_star;
    double delta;
    double residual;  // |F(xi) - (edge_density(w) + delta)|
    RateValue rate;   // rate of w_star relative to w
};

// Solve F(xi) = edge_density(W) + delta for xi in (0, inf): geometric bracket
// expansion from [1/2, 2], bisection to |F - target| <= 1e-12 (at most 200
// steps), then up to 5 Newton polish steps keeping the best iterate.  The
// tilted graphon stays in W's family.  delta = 0 short-circuits to xi = 1.
// Validation errors when the target leaves the attainable interval
// (measure{W = 1}, measure{W > 0}) or the constraint is flat (W a.e. 0/1).
TiltSolution solve_tilt(const Graphon& w, double delta);

// First-order tilt direction: W* = W + delta l(W)/I + O(delta^2) with
// l(W) = W(1 - W) and I = integral of l(W).  alpha_coefficient = 1/I is the
// leading coefficient of xi(delta) - 1.  The direction is materialized as a
// step kernel (entries routinely exceed 1): on W's own grid for step inputs,
// else on `grid` blocks (cell averages; exact whenever l(W) is constant).
struct PerturbationExpansion {
    StepKernel first_order;
    double denominator;        // integral of l(W)
    double alpha_coefficient;  // 1 / denominator
};
PerturbationExpansion first_order_expansion(const Graphon& w, int grid = 16);

// Empirical order of the expansion error e(delta) = max over value regions of
// |tilt(v) - v - delta l(v)/I|.  Residuals at or below the exactness floor
// report exact = true; otherwise `slope` is the least-squares slope of
// log e against log delta (expected near 2).
struct OrderFit {
    bool exact;
    double slope;  // meaningful when !exact
    std::vector<std::pair<double, double>> residuals;  // (delta, e(delta))
    static constexpr double kExactFloor = 1e-11;
};
OrderFit verify_order(const Graphon& w, const std::vector<double>& deltas);

// Exact upper-tail edge-count probability by enumerating all labeled graphs:
//   probability = P( edge density of the n-vertex sample >= density(W) + delta )
// Requires n(n-1)/2 <= 15 pairs.  ldp_estimate = -(2/n^2) log probability
// (absent when the event is impossible); rate_bound = rate of the tilted
// minimizer when the tilt problem is solvable.
struct BruteForceResult {
    double probability;
    bool impossible;
    std::optional<double> ldp_estimate;
    std::optional<RateValue> rate_bound;
};
BruteForceResult brute_force_ldp(const Graphon& w, int n, double delta);

// Monte Carlo estimate of the same event from `samples` independent draws
// (per-replicate seeds derived from `seed`); stderr_ is the binomial standard
// error.
struct MonteCarloResult {
    double probability;
    double stderr_;
};
MonteCarloResult monte_carlo_ldp(const Graphon& w, int n, double delta, int samples,
                                 std::uint64_t seed);

}  // namespace graphon
