#ifndef SELFSIM_GRAPH_HPP
#define SELFSIM_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace selfsim {

// Undirected finite graph in compressed adjacency form. No loops or
// multi-edges; boundary is a designated vertex list.
class FiniteGraph {
public:
    FiniteGraph() = default;

    // Edges may contain duplicates (either orientation); they are merged.
    static FiniteGraph from_edges(int vertex_count, std::vector<std::pair<int, int>> edges,
                                  std::vector<int> boundary = {});

    int vertex_count() const { return static_cast<int>(offsets_.size()) - 1; }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(targets_.size()) / 2; }
    int degree(int v) const { return offsets_[v + 1] - offsets_[v]; }
    std::span<const int> neighbors(int v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    bool adjacent(int a, int b) const;

    const std::vector<int>& boundary() const { return boundary_; }
    void set_boundary(std::vector<int> b) { boundary_ = std::move(b); }

    // BFS distances from a source (-1 where unreachable).
    std::vector<int> distances_from(int source) const;
    // BFS distances from a set of sources.
    std::vector<int> distances_from_set(const std::vector<int>& sources) const;
    bool connected() const;

private:
    std::vector<int> offsets_{0};
    std::vector<int> targets_;
    std::vector<int> boundary_;
};

} // namespace selfsim

#endif
