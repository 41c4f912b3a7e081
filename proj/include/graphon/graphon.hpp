#pragma once

#include <string>
#include <variant>
#include <vector>

#include "graphon/step_graphon.hpp"

namespace graphon {

// Parametric families from the worked examples, plus arbitrary step graphons.
//
//   Constant(p):         W == p.
//   Bipartite(alpha, p): W = p on ([0,alpha] x [alpha,1]) u ([alpha,1] x [0,alpha]),
//                        0 elsewhere; alpha in (0, 1/2) strictly.
//   SmallWorld(q, p, r): W(x, y) = q when the circle distance |x - y| <= r,
//                        p otherwise; r in (0, 1/2].
struct ConstantGraphon {
    double p;
};

struct BipartiteGraphon {
    double alpha;
    double p;
};

struct SmallWorldGraphon {
    double q;
    double p;
    double r;
};

class Graphon {
public:
    using Kernel = std::variant<ConstantGraphon, BipartiteGraphon, SmallWorldGraphon, StepGraphon>;

    static Graphon constant(double p);
    static Graphon bipartite(double alpha, double p);
    static Graphon small_world(double q, double p, double r);
    static Graphon step(StepGraphon w);

    const Kernel& kernel() const { return kernel_; }
    bool is_step() const { return std::holds_alternative<StepGraphon>(kernel_); }
    const StepGraphon& as_step() const;

    // Family tag: "constant", "bipartite", "smallworld", or "step".
    std::string family() const;

private:
    explicit Graphon(Kernel k) : kernel_(std::move(k)) {}
    Kernel kernel_;
};

// Pointwise evaluation; x, y must lie in [0,1].
double evaluate(const Graphon& w, double x, double y);

// L2 projection onto the n-block uniform step grid.  Exact for Constant and
// for Step sources whose block count divides n; otherwise cell averages are
// approximated by a fixed 4x4 midpoint quadrature per cell.
StepGraphon project_to_step(const Graphon& w, int n);

// Integral of W over the unit square.
double edge_density(const Graphon& w);

// The logistic-variance kernel ell(W) = W(1 - W); maps each family to itself.
Graphon ell(const Graphon& w);

// Weighted value distribution of W: pairs (weight, value) with weights
// summing to 1, values ascending.  Families reduce to one or two regions
// (exact); step graphons collapse equal cell values.  Scalar functionals of W
// computed from this view are exact for families and bitwise
// permutation-invariant for step graphons.
struct Region {
    double weight;
    double value;
};
std::vector<Region> region_view(const Graphon& w);

}  // namespace graphon
