#include "graphon/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "graphon/errors.hpp"

namespace graphon {

namespace {

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        std::ostringstream os;
        os << name << " must lie in [0,1], got " << v;
        throw ValidationError(os.str());
    }
}

}  // namespace

Graphon Graphon::constant(double p) {
    check_unit(p, "constant: p");
    return Graphon(Kernel(ConstantGraphon{p}));
}

Graphon Graphon::bipartite(double alpha, double p) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        std::ostringstream os;
        os << "bipartite: alpha must lie in (0, 1/2), got " << alpha;
        throw ValidationError(os.str());
    }
    check_unit(p, "bipartite: p");
    return Graphon(Kernel(BipartiteGraphon{alpha, p}));
}

Graphon Graphon::small_world(double q, double p, double r) {
    check_unit(q, "smallworld: q");
    check_unit(p, "smallworld: p");
    if (!(r > 0.0 && r <= 0.5)) {
        std::ostringstream os;
        os << "smallworld: r must lie in (0, 1/2], got " << r;
        throw ValidationError(os.str());
    }
    return Graphon(Kernel(SmallWorldGraphon{q, p, r}));
}

Graphon Graphon::step(StepGraphon w) { return Graphon(Kernel(std::move(w))); }

const StepGraphon& Graphon::as_step() const {
    if (!is_step()) throw ValidationError("graphon: not a step graphon");
    return std::get<StepGraphon>(kernel_);
}

std::string Graphon::family() const {
    struct V {
        std::string operator()(const ConstantGraphon&) const { return "constant"; }
        std::string operator()(const BipartiteGraphon&) const { return "bipartite"; }
        std::string operator()(const SmallWorldGraphon&) const { return "smallworld"; }
        std::string operator()(const StepGraphon&) const { return "step"; }
    };
    return std::visit(V{}, kernel_);
}

double evaluate(const Graphon& w, double x, double y) {
    if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
        throw ValidationError("evaluate: coordinates must lie in [0,1]");
    }
    struct V {
        double x, y;
        double operator()(const ConstantGraphon& g) const { return g.p; }
        double operator()(const BipartiteGraphon& g) const {
            const bool on = (x <= g.alpha && y >= g.alpha) || (y <= g.alpha && x >= g.alpha);
            return on ? g.p : 0.0;
        }
        double operator()(const SmallWorldGraphon& g) const {
            const double u = x - y;
            const double d = std::fabs(u - std::round(u));
            return d <= g.r ? g.q : g.p;
        }
        double operator()(const StepGraphon& g) const { return g.at(x, y); }
    };
    return std::visit(V{x, y}, w.kernel());
}

namespace {

constexpr int kQuadraturePoints = 4;  // midpoint rule, 4 per axis, 16 per cell

StepGraphon project_by_quadrature(const Graphon& w, int n) {
    Eigen::MatrixXd out(n, n);
    const int s = kQuadraturePoints;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double acc = 0.0;
            for (int a = 0; a < s; ++a) {
                const double x = (i + (a + 0.5) / s) / n;
                for (int b = 0; b < s; ++b) {
                    const double y = (j + (b + 0.5) / s) / n;
                    acc += evaluate(w, x, y);
                }
            }
            out(i, j) = acc / (s * s);
            out(j, i) = out(i, j);
        }
    }
    return StepGraphon(std::move(out));
}

}  // namespace

StepGraphon project_to_step(const Graphon& w, int n) {
    if (n <= 0) throw ValidationError("project_to_step: block count must be positive");
    if (const auto* c = std::get_if<ConstantGraphon>(&w.kernel())) {
        return StepGraphon(Eigen::MatrixXd::Constant(n, n, c->p));
    }
    if (w.is_step()) {
        const StepGraphon& s = w.as_step();
        if (n % s.blocks() == 0) return s.refined(n / s.blocks());
    }
    return project_by_quadrature(w, n);
}

std::vector<Region> region_view(const Graphon& w) {
    struct V {
        std::vector<Region> operator()(const ConstantGraphon& g) const {
            return {{1.0, g.p}};
        }
        std::vector<Region> operator()(const BipartiteGraphon& g) const {
            const double on = 2.0 * g.alpha * (1.0 - g.alpha);
            std::vector<Region> r = {{1.0 - on, 0.0}, {on, g.p}};
            std::sort(r.begin(), r.end(),
                      [](const Region& a, const Region& b) { return a.value < b.value; });
            return r;
        }
        std::vector<Region> operator()(const SmallWorldGraphon& g) const {
            const double near = 2.0 * g.r;
            std::vector<Region> r;
            if (g.q == g.p) {
                r.push_back({1.0, g.p});
            } else {
                r = {{near, g.q}, {1.0 - near, g.p}};
                std::sort(r.begin(), r.end(),
                          [](const Region& a, const Region& b) { return a.value < b.value; });
            }
            return r;
        }
        std::vector<Region> operator()(const StepGraphon& g) const {
            const int n = g.blocks();
            std::vector<double> entries(g.values().data(), g.values().data() + g.values().size());
            std::sort(entries.begin(), entries.end());
            std::vector<Region> r;
            const double cell = 1.0 / (static_cast<double>(n) * n);
            std::size_t i = 0;
            while (i < entries.size()) {
                std::size_t j = i;
                while (j < entries.size() && entries[j] == entries[i]) ++j;
                r.push_back({static_cast<double>(j - i) * cell, entries[i]});
                i = j;
            }
            return r;
        }
    };
    return std::visit(V{}, w.kernel());
}

double edge_density(const Graphon& w) {
    const auto regions = region_view(w);
    double acc = 0.0;
    for (const auto& r : regions) acc += r.weight * r.value;
    return acc;
}

Graphon ell(const Graphon& w) {
    struct V {
        Graphon operator()(const ConstantGraphon& g) const {
            return Graphon::constant(g.p * (1.0 - g.p));
        }
        Graphon operator()(const BipartiteGraphon& g) const {
            return Graphon::bipartite(g.alpha, g.p * (1.0 - g.p));
        }
        Graphon operator()(const SmallWorldGraphon& g) const {
            return Graphon::small_world(g.q * (1.0 - g.q), g.p * (1.0 - g.p), g.r);
        }
        Graphon operator()(const StepGraphon& g) const {
            const Eigen::MatrixXd& v = g.values();
            Eigen::MatrixXd out = (v.array() * (1.0 - v.array())).matrix();
            return Graphon::step(StepGraphon(std::move(out)));
        }
    };
    return std::visit(V{}, w.kernel());
}

}  // namespace graphon
