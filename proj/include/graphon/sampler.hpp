#pragma once

#include <cstdint>
#include <vector>

#include "graphon/graphon.hpp"

namespace graphon {

// Simple labeled graph on {0, .., n-1}: symmetric 0/1 adjacency, zero diagonal.
class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(int n);

    int size() const { return n_; }
    bool edge(int i, int j) const;
    void set_edge(int i, int j, bool present);
    long long edge_count() const;

private:
    std::size_t index(int i, int j) const;
    int n_;
    std::vector<std::uint8_t> bits_;
};

struct SampleConfig {
    std::uint64_t seed = 0;
    int n = 1;
};

// W-random graph: vertex i owns cell i of the n-block grid, and edge {i, j}
// (i < j) appears independently with probability equal to the (i, j) cell
// average of W.  The coin for {i, j} is the keyed counter draw (seed, i, j),
// so results are independent of evaluation order and machine.
AdjacencyMatrix sample(const Graphon& w, const SampleConfig& cfg);

// Empirical graphon: the n-block step graphon whose (i, j) cell is 1 exactly
// when {i, j} is an edge (diagonal cells 0).
StepGraphon lift(const AdjacencyMatrix& g);

}  // namespace graphon
