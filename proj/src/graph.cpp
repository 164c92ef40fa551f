#include "selfsim/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace selfsim {

FiniteGraph FiniteGraph::from_edges(int vertex_count, std::vector<std::pair<int, int>> edges,
                                    std::vector<int> boundary) {
    FiniteGraph g;
    for (auto [a, b] : edges) {
        if (a == b) throw std::invalid_argument("FiniteGraph: loop edge");
        if (a < 0 || b < 0 || a >= vertex_count || b >= vertex_count)
            throw std::out_of_range("FiniteGraph: vertex index");
    }
    // Counting sort into CSR; avoids materializing a sorted copy of the
    // directed edge list (these graphs reach tens of millions of edges).
    g.offsets_.assign(vertex_count + 1, 0);
    for (const auto& [a, b] : edges) {
        ++g.offsets_[a + 1];
        ++g.offsets_[b + 1];
    }
    for (int v = 0; v < vertex_count; ++v) g.offsets_[v + 1] += g.offsets_[v];
    g.targets_.resize(g.offsets_.back());
    std::vector<int> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [a, b] : edges) {
        g.targets_[cursor[a]++] = b;
        g.targets_[cursor[b]++] = a;
    }
    edges.clear();
    edges.shrink_to_fit();
    // Per-vertex sort and dedup, compacting in place.
    std::size_t write = 0;
    int read_begin = 0;
    for (int v = 0; v < vertex_count; ++v) {
        int read_end = g.offsets_[v + 1];
        std::sort(g.targets_.begin() + read_begin, g.targets_.begin() + read_end);
        std::size_t row_start = write;
        for (int k = read_begin; k < read_end; ++k) {
            if (write > row_start && g.targets_[write - 1] == g.targets_[k]) continue;
            g.targets_[write++] = g.targets_[k];
        }
        read_begin = read_end;
        g.offsets_[v + 1] = static_cast<int>(write);
    }
    g.targets_.resize(write);
    g.boundary_ = std::move(boundary);
    return g;
}

bool FiniteGraph::adjacent(int a, int b) const {
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

std::vector<int> FiniteGraph::distances_from(int source) const {
    return distances_from_set({source});
}

std::vector<int> FiniteGraph::distances_from_set(const std::vector<int>& sources) const {
    std::vector<int> dist(vertex_count(), -1);
    std::vector<int> frontier;
    for (int s : sources) {
        if (dist[s] == -1) {
            dist[s] = 0;
            frontier.push_back(s);
        }
    }
    int d = 0;
    while (!frontier.empty()) {
        ++d;
        std::vector<int> next;
        for (int v : frontier) {
            for (int w : neighbors(v)) {
                if (dist[w] == -1) {
                    dist[w] = d;
                    next.push_back(w);
                }
            }
        }
        frontier = std::move(next);
    }
    return dist;
}

bool FiniteGraph::connected() const {
    if (vertex_count() == 0) return true;
    auto dist = distances_from(0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

} // namespace selfsim
