#include "graphon/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "graphon/errors.hpp"

namespace graphon::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // Prune digits while the value still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == v) return probe;
    }
    return buf;
}

json step_to_json(const StepGraphon& w) {
    json j;
    j["n"] = w.blocks();
    std::vector<double> vals;
    const int n = w.blocks();
    vals.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) vals.push_back(w.values()(i, k));
    }
    j["values"] = vals;
    return j;
}

namespace {

Eigen::MatrixXd values_from_json(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("n") || !j.contains("values")) {
        throw ValidationError(std::string(what) + ": JSON must be an object with \"n\" and \"values\"");
    }
    if (!j["n"].is_number_integer()) {
        throw ValidationError(std::string(what) + ": \"n\" must be an integer");
    }
    const long long n = j["n"].get<long long>();
    if (n <= 0 || n > 4096) {
        throw ValidationError(std::string(what) + ": \"n\" must lie in [1, 4096]");
    }
    const auto& vals = j["values"];
    if (!vals.is_array() || static_cast<long long>(vals.size()) != n * n) {
        std::ostringstream os;
        os << what << ": \"values\" must be a row-major array of n*n = " << n * n << " numbers";
        throw ValidationError(os.str());
    }
    Eigen::MatrixXd m(n, n);
    for (long long i = 0; i < n; ++i) {
        for (long long k = 0; k < n; ++k) {
            const auto& cell = vals[static_cast<std::size_t>(i * n + k)];
            if (!cell.is_number()) {
                throw ValidationError(std::string(what) + ": \"values\" entries must be numbers");
            }
            m(i, k) = cell.get<double>();
        }
    }
    return m;
}

}  // namespace

StepGraphon step_from_json(const json& j) {
    return StepGraphon(values_from_json(j, "step graphon"));
}

json kernel_to_json(const StepKernel& k) {
    json j;
    j["n"] = k.blocks();
    std::vector<double> vals;
    const int n = k.blocks();
    vals.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < n; ++c) vals.push_back(k.values()(i, c));
    }
    j["values"] = vals;
    return j;
}

json graphon_to_json(const Graphon& w) {
    struct V {
        json operator()(const ConstantGraphon& g) const {
            return json{{"family", "constant"}, {"p", g.p}};
        }
        json operator()(const BipartiteGraphon& g) const {
            return json{{"family", "bipartite"}, {"alpha", g.alpha}, {"p", g.p}};
        }
        json operator()(const SmallWorldGraphon& g) const {
            return json{{"family", "smallworld"}, {"q", g.q}, {"p", g.p}, {"r", g.r}};
        }
        json operator()(const StepGraphon& g) const { return step_to_json(g); }
    };
    return std::visit(V{}, w.kernel());
}

namespace {

std::map<std::string, double> parse_kv(const std::string& body, const std::string& family) {
    std::map<std::string, double> kv;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size()) {
            throw ValidationError("graphon spec: expected key=value pairs after \"" + family +
                                  ":\", got \"" + item + "\"");
        }
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        std::size_t used = 0;
        double parsed = 0.0;
        try {
            parsed = std::stod(val, &used);
        } catch (const std::exception&) {
            throw ValidationError("graphon spec: value for \"" + key + "\" is not a number");
        }
        if (used != val.size()) {
            throw ValidationError("graphon spec: value for \"" + key + "\" is not a number");
        }
        if (!kv.emplace(key, parsed).second) {
            throw ValidationError("graphon spec: duplicate key \"" + key + "\"");
        }
    }
    return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key, const std::string& family) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
        throw ValidationError("graphon spec: " + family + " requires \"" + key + "\"");
    }
    const double v = it->second;
    kv.erase(it);
    return v;
}

void expect_empty(const std::map<std::string, double>& kv, const std::string& family) {
    if (!kv.empty()) {
        throw ValidationError("graphon spec: unknown key \"" + kv.begin()->first + "\" for " +
                              family);
    }
}

}  // namespace

Graphon parse_graphon_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string family = spec.substr(0, colon);
        if (family == "constant" || family == "bipartite" || family == "smallworld") {
            auto kv = parse_kv(spec.substr(colon + 1), family);
            if (family == "constant") {
                const double p = take(kv, "p", family);
                expect_empty(kv, family);
                return Graphon::constant(p);
            }
            if (family == "bipartite") {
                const double alpha = take(kv, "alpha", family);
                const double p = take(kv, "p", family);
                expect_empty(kv, family);
                return Graphon::bipartite(alpha, p);
            }
            const double q = take(kv, "q", family);
            const double p = take(kv, "p", family);
            const double r = take(kv, "r", family);
            expect_empty(kv, family);
            return Graphon::small_world(q, p, r);
        }
    }
    return Graphon::step(load_step_graphon(spec));
}

StepGraphon load_step_graphon(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open step graphon file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("step graphon file " + path + ": " + e.what());
    }
    return step_from_json(j);
}

void save_step_graphon(const StepGraphon& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write step graphon file: " + path);
    out << step_to_json(w).dump(2) << '\n';
}

void write_adjacency_matrix(std::ostream& os, const AdjacencyMatrix& g) {
    const int n = g.size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) os << ',';
            os << (i != j && g.edge(i, j) ? 1 : 0);
        }
        os << '\n';
    }
}

void write_edge_list(std::ostream& os, const AdjacencyMatrix& g) {
    const int n = g.size();
    os << "n=" << n << '\n';
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (g.edge(i, j)) os << i + 1 << ',' << j + 1 << '\n';
        }
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

long long parse_ll(const std::string& s, const char* what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw ValidationError(std::string("adjacency: bad ") + what + " \"" + s + "\"");
    }
    if (used != s.size()) {
        throw ValidationError(std::string("adjacency: bad ") + what + " \"" + s + "\"");
    }
    return v;
}

}  // namespace

AdjacencyMatrix read_adjacency(std::istream& is) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    if (lines.empty()) throw ValidationError("adjacency: empty input");

    // Edge list with header.
    if (lines[0].rfind("n=", 0) == 0) {
        const long long n = parse_ll(lines[0].substr(2), "vertex count");
        if (n <= 0 || n > 100000) throw ValidationError("adjacency: vertex count out of range");
        AdjacencyMatrix g(static_cast<int>(n));
        for (std::size_t k = 1; k < lines.size(); ++k) {
            const auto toks = split_csv(lines[k]);
            if (toks.size() != 2) {
                throw ValidationError("adjacency: edge line must be \"i,j\", got \"" + lines[k] +
                                      "\"");
            }
            const long long i = parse_ll(toks[0], "vertex");
            const long long j = parse_ll(toks[1], "vertex");
            if (i < 1 || j < 1 || i > n || j > n || i >= j) {
                throw ValidationError("adjacency: edge (" + lines[k] +
                                      ") must satisfy 1 <= i < j <= n");
            }
            g.set_edge(static_cast<int>(i - 1), static_cast<int>(j - 1), true);
        }
        return g;
    }

    const auto first = split_csv(lines[0]);
    // A matrix first row has n entries and a zero diagonal; an edge list line
    // has two 1-based indices, the first of which is nonzero.
    const bool matrix = first.size() != 2 || parse_ll(first[0], "entry") == 0;

    if (matrix) {
        const std::size_t n = first.size();
        if (lines.size() != n) {
            std::ostringstream os;
            os << "adjacency: matrix must be square; got " << n << " columns but " << lines.size()
               << " rows";
            throw ValidationError(os.str());
        }
        AdjacencyMatrix g(static_cast<int>(n));
        std::vector<std::vector<long long>> cells(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto toks = split_csv(lines[i]);
            if (toks.size() != n) throw ValidationError("adjacency: ragged matrix row");
            for (std::size_t j = 0; j < n; ++j) {
                const long long v = parse_ll(toks[j], "entry");
                if (v != 0 && v != 1) throw ValidationError("adjacency: entries must be 0 or 1");
                cells[i].push_back(v);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (cells[i][i] != 0) throw ValidationError("adjacency: diagonal must be zero");
            for (std::size_t j = i + 1; j < n; ++j) {
                if (cells[i][j] != cells[j][i]) {
                    throw ValidationError("adjacency: matrix must be symmetric");
                }
                if (cells[i][j]) g.set_edge(static_cast<int>(i), static_cast<int>(j), true);
            }
        }
        return g;
    }

    // Headerless edge list: n inferred from the largest index.
    std::vector<std::pair<long long, long long>> edges;
    long long n = 0;
    for (const auto& l : lines) {
        const auto toks = split_csv(l);
        if (toks.size() != 2) {
            throw ValidationError("adjacency: edge line must be \"i,j\", got \"" + l + "\"");
        }
        const long long i = parse_ll(toks[0], "vertex");
        const long long j = parse_ll(toks[1], "vertex");
        if (i < 1 || i >= j) {
            throw ValidationError("adjacency: edge (" + l + ") must satisfy 1 <= i < j");
        }
        edges.emplace_back(i, j);
        n = std::max(n, j);
    }
    if (n > 100000) throw ValidationError("adjacency: vertex count out of range");
    AdjacencyMatrix g(static_cast<int>(n));
    for (const auto& [i, j] : edges) {
        g.set_edge(static_cast<int>(i - 1), static_cast<int>(j - 1), true);
    }
    return g;
}

}  // namespace graphon::io
