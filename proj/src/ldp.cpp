#include "graphon/ldp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <variant>

#include "graphon/errors.hpp"
#include "graphon/rng.hpp"
#include "graphon/sampler.hpp"

namespace graphon {

namespace {

double tilt_value(double v, double xi) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    return xi * v / (1.0 - v + xi * v);
}

// v log(v/w) + (1-v) log((1-v)/(1-w)), with the 0 log 0 = 0 convention;
// infinity signalled by the caller via absolute-continuity checks.
double entropy_term(double v, double w) {
    double t = 0.0;
    if (v > 0.0) t += v * std::log(v / w);
    if (v < 1.0) t += (1.0 - v) * std::log((1.0 - v) / (1.0 - w));
    return t;
}

bool degenerate_pair(double v, double w) {
    return (w <= 0.0 && v > 0.0) || (w >= 1.0 && v < 1.0);
}

// Paired (weight, v, w) regions for rate evaluation.
struct PairedRegion {
    double weight;
    double v;
    double w;
};

std::vector<PairedRegion> paired_regions(const Graphon& v, const Graphon& w) {
    if (v.is_step() && w.is_step()) {
        auto [rv, rw] = common_refinement(v.as_step(), w.as_step());
        const int n = rv.blocks();
        const double cell = 1.0 / (static_cast<double>(n) * n);
        std::vector<PairedRegion> out;
        out.reserve(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                out.push_back({cell, rv.values()(i, j), rw.values()(i, j)});
            }
        }
        return out;
    }

    const auto* cv = std::get_if<ConstantGraphon>(&v.kernel());
    const auto* cw = std::get_if<ConstantGraphon>(&w.kernel());
    if (cv && cw) return {{1.0, cv->p, cw->p}};

    const auto* bv = std::get_if<BipartiteGraphon>(&v.kernel());
    const auto* bw = std::get_if<BipartiteGraphon>(&w.kernel());
    if (bv && bw && bv->alpha == bw->alpha) {
        const double on = 2.0 * bv->alpha * (1.0 - bv->alpha);
        return {{on, bv->p, bw->p}, {1.0 - on, 0.0, 0.0}};
    }

    const auto* sv = std::get_if<SmallWorldGraphon>(&v.kernel());
    const auto* sw = std::get_if<SmallWorldGraphon>(&w.kernel());
    if (sv && sw && sv->r == sw->r) {
        const double near = 2.0 * sv->r;
        return {{near, sv->q, sw->q}, {1.0 - near, sv->p, sw->p}};
    }

    throw ValidationError(
        "rate_upsilon: arguments must share cell geometry (two step graphons, or the same "
        "family with equal shape parameter); project onto a common step grid first");
}

}  // namespace

RateValue rate_upsilon(const Graphon& v, const Graphon& w) {
    const auto regions = paired_regions(v, w);
    std::vector<double> terms;
    terms.reserve(regions.size());
    for (const auto& r : regions) {
        if (r.weight == 0.0) continue;
        if (degenerate_pair(r.v, r.w)) return {0.0, true};
        terms.push_back(r.weight * entropy_term(r.v, r.w));
    }
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    return {acc / 2.0, false};
}

double constraint_F(const Graphon& w, double xi) {
    if (!(xi > 0.0)) throw ValidationError("constraint_F: xi must be positive");
    double acc = 0.0;
    for (const auto& r : region_view(w)) acc += r.weight * tilt_value(r.value, xi);
    return acc;
}

namespace {

double constraint_dF(const std::vector<Region>& regions, double xi) {
    double acc = 0.0;
    for (const auto& r : regions) {
        const double v = r.value;
        if (v <= 0.0 || v >= 1.0) continue;
        const double den = 1.0 - v + xi * v;
        acc += r.weight * v * (1.0 - v) / (den * den);
    }
    return acc;
}

Graphon tilt_graphon(const Graphon& w, double xi) {
    struct V {
        double xi;
        Graphon operator()(const ConstantGraphon& g) const {
            return Graphon::constant(tilt_value(g.p, xi));
        }
        Graphon operator()(const BipartiteGraphon& g) const {
            return Graphon::bipartite(g.alpha, tilt_value(g.p, xi));
        }
        Graphon operator()(const SmallWorldGraphon& g) const {
            return Graphon::small_world(tilt_value(g.q, xi), tilt_value(g.p, xi), g.r);
        }
        Graphon operator()(const StepGraphon& g) const {
            Eigen::MatrixXd out = g.values();
            for (Eigen::Index i = 0; i < out.size(); ++i) {
                out.data()[i] = tilt_value(out.data()[i], xi);
            }
            return Graphon::step(StepGraphon(std::move(out)));
        }
    };
    return std::visit(V{xi}, w.kernel());
}

}  // namespace

TiltSolution solve_tilt(const Graphon& w, double delta) {
    const auto regions = region_view(w);
    const double w_density = edge_density(w);
    const double target = w_density + delta;

    double measure_one = 0.0;
    double measure_pos = 0.0;
    bool any_interior = false;
    for (const auto& r : regions) {
        if (r.value >= 1.0) measure_one += r.weight;
        if (r.value > 0.0) measure_pos += r.weight;
        if (r.value > 0.0 && r.value < 1.0) any_interior = true;
    }
    if (!any_interior) {
        throw ValidationError(
            "solve_tilt: W takes only the values 0 and 1, so the tilt constraint is flat and "
            "no exponential change of density exists");
    }
    if (!(target > measure_one && target < measure_pos)) {
        std::ostringstream os;
        os << "solve_tilt: target density " << target << " is outside the attainable interval ("
           << measure_one << ", " << measure_pos << "); admissible delta lies in ("
           << measure_one - w_density << ", " << measure_pos - w_density << ")";
        throw ValidationError(os.str());
    }

    TiltSolution sol{1.0, w, delta, 0.0, {0.0, false}};
    if (delta == 0.0) {
        // F(1) reproduces the edge density term for term; no search needed.
        return sol;
    }

    const auto F = [&](double xi) { return constraint_F(w, xi); };

    double lo = 0.5;
    double hi = 2.0;
    {
        int guard = 0;
        while (F(lo) > target) {
            hi = lo;
            lo /= 2.0;
            if (++guard > 200) throw NumericError("solve_tilt: failed to bracket the target from below");
        }
        guard = 0;
        while (F(hi) < target) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 200) throw NumericError("solve_tilt: failed to bracket the target from above");
        }
    }

    double best_xi = lo;
    double best_residual = std::fabs(F(lo) - target);
    const auto consider = [&](double xi) {
        const double r = std::fabs(F(xi) - target);
        if (r < best_residual) {
            best_residual = r;
            best_xi = xi;
        }
    };
    consider(hi);

    for (int iter = 0; iter < 200 && best_residual > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval exhausted in floating point
        const double fm = F(mid);
        consider(mid);
        if (fm < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    for (int iter = 0; iter < 5 && best_residual > 0.0; ++iter) {
        const double d = constraint_dF(regions, best_xi);
        if (!(d > 0.0)) break;
        const double next = best_xi - (F(best_xi) - target) / d;
        if (!(next > 0.0) || !std::isfinite(next)) break;
        const double r = std::fabs(F(next) - target);
        if (r >= best_residual) break;
        best_residual = r;
        best_xi = next;
    }

    if (best_residual > 1e-9) {
        std::ostringstream os;
        os << "solve_tilt: constraint solve stalled at residual " << best_residual;
        throw NumericError(os.str());
    }

    sol.xi = best_xi;
    sol.w_star = tilt_graphon(w, best_xi);
    sol.residual = best_residual;
    sol.rate = rate_upsilon(sol.w_star, w);
    return sol;
}

PerturbationExpansion first_order_expansion(const Graphon& w, int grid) {
    const double denom = edge_density(ell(w));
    if (denom <= 0.0) {
        throw ValidationError(
            "first_order_expansion: integral of W(1-W) vanishes (W a.e. 0/1), so the tilt "
            "direction is undefined");
    }
    const Graphon lw = ell(w);
    const StepGraphon base =
        w.is_step() ? lw.as_step() : project_to_step(lw, grid);
    StepKernel direction(base.values() / denom);
    return {std::move(direction), denom, 1.0 / denom};
}

OrderFit verify_order(const Graphon& w, const std::vector<double>& deltas) {
    if (deltas.size() < 3) {
        throw ValidationError("verify_order: need at least 3 delta values");
    }
    for (double d : deltas) {
        if (!(d > 0.0)) throw ValidationError("verify_order: deltas must be positive");
    }
    const double denom = edge_density(ell(w));
    if (denom <= 0.0) {
        throw ValidationError("verify_order: integral of W(1-W) vanishes");
    }

    const auto regions = region_view(w);
    OrderFit fit{true, 0.0, {}};
    for (double d : deltas) {
        const TiltSolution sol = solve_tilt(w, d);
        double e = 0.0;
        for (const auto& r : regions) {
            const double lin = r.value + d * (r.value * (1.0 - r.value)) / denom;
            e = std::max(e, std::fabs(tilt_value(r.value, sol.xi) - lin));
        }
        fit.residuals.emplace_back(d, e);
        if (e > OrderFit::kExactFloor) fit.exact = false;
    }

    if (!fit.exact) {
        // Least-squares slope of log e over log delta, over the points with
        // usable residuals.
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        int m = 0;
        for (const auto& [d, e] : fit.residuals) {
            if (e <= OrderFit::kExactFloor) continue;
            const double x = std::log(d);
            const double y = std::log(e);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
        if (m < 2) {
            fit.exact = true;  // not enough signal above the floor to fit anything
        } else {
            fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        }
    }
    return fit;
}

BruteForceResult brute_force_ldp(const Graphon& w, int n, double delta) {
    if (n < 2) throw ValidationError("brute_force_ldp: need at least 2 vertices");
    const int pairs = n * (n - 1) / 2;
    if (pairs > 15) {
        std::ostringstream os;
        os << "brute_force_ldp: " << pairs << " vertex pairs exceeds the enumeration cap of 15 "
           << "(n <= 6)";
        throw ValidationError(os.str());
    }

    const StepGraphon probs = project_to_step(w, n);
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(pairs));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) p.push_back(probs.values()(i, j));
    }

    const double threshold = edge_density(w) + delta;
    const double scale = 2.0 / (static_cast<double>(n) * n);

    double prob = 0.0;
    double comp = 0.0;  // Kahan correction
    const std::uint64_t total = 1ull << pairs;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        const int edges = std::popcount(mask);
        if (static_cast<double>(edges) * scale < threshold) continue;
        double pr = 1.0;
        for (int e = 0; e < pairs; ++e) {
            pr *= (mask >> e) & 1 ? p[static_cast<std::size_t>(e)]
                                  : 1.0 - p[static_cast<std::size_t>(e)];
        }
        const double y = pr - comp;
        const double t = prob + y;
        comp = (t - prob) - y;
        prob = t;
    }

    BruteForceResult out{prob, prob <= 0.0, std::nullopt, std::nullopt};
    if (!out.impossible) {
        out.ldp_estimate = -scale * std::log(prob);
    }
    try {
        out.rate_bound = solve_tilt(w, delta).rate;
    } catch (const ValidationError&) {
        out.rate_bound = std::nullopt;
    }
    return out;
}

MonteCarloResult monte_carlo_ldp(const Graphon& w, int n, double delta, int samples,
                                 std::uint64_t seed) {
    if (samples <= 0) throw ValidationError("monte_carlo_ldp: samples must be positive");
    const double threshold = edge_density(w) + delta;
    const double scale = 2.0 / (static_cast<double>(n) * n);
    long long hits = 0;
    for (int s = 0; s < samples; ++s) {
        const AdjacencyMatrix g =
            sample(w, {rng::splitmix64(seed + static_cast<std::uint64_t>(s)), n});
        if (static_cast<double>(g.edge_count()) * scale >= threshold) ++hits;
    }
    const double ph = static_cast<double>(hits) / samples;
    return {ph, std::sqrt(std::max(ph * (1.0 - ph), 0.0) / samples)};
}

}  // namespace graphon
