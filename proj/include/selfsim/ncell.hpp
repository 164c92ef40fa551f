#ifndef SELFSIM_NCELL_HPP
#define SELFSIM_NCELL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "selfsim/cellspec.hpp"
#include "selfsim/graph.hpp"

namespace selfsim {

// Address of a sub-cell: clique choices, outermost first.
struct CellAddress {
    std::vector<int> digits;

    bool operator==(const CellAddress&) const = default;
};

// One contraction step of phi_S: drops the innermost digit; the result is
// the address of the image cell one level down. Iterating len(addr) times
// reaches the empty address, i.e. the origin cell.
CellAddress phi_s_step(const CellAddress& addr);

// The same cell re-expressed at a higher level of the origin nesting:
// prefixes origin_clique digits.
CellAddress address_at_level(const CellAddress& addr, const CellSpec& spec, int level);

// Graphs spanned by the closures of n-cells, built by iterated substitution.
//
// Vertex ids of C-hat_n: ids 0..V-1 are the host vertices (one per vertex
// of C-hat; they are exactly the F^{n-1} points of the closed n-cell and
// realize the phi^{n-1} correspondence). Ids >= V belong strictly inside
// the mu inserted copies of C-hat_{n-1}; within copy i the non-boundary
// ids of the inner graph appear in order at a fixed offset, so descent is
// pure arithmetic and no per-level tables are stored.
class CellHierarchy {
public:
    explicit CellHierarchy(CellSpec spec, std::int64_t vertex_cap = 50'000'000);

    const CellSpec& spec() const { return spec_; }
    int levels_built() const { return static_cast<int>(graphs_.size()); }
    void grow_to(int level);

    const FiniteGraph& graph(int level);
    std::int64_t vertex_count(int level) const;

    // Image of an inner vertex of C-hat_{level-1} inside copy `clique` of
    // C-hat_level. Boundary ids map through the substitution data.
    int embed_into_copy(int level, int clique, int inner_id) const;

    // Descend `digits` (outermost first) and take host vertex `local` of
    // the reached copy. digits.size() <= level-1.
    int resolve(int level, std::span<const int> digits, int local) const;

    // Display name, e.g. "m", "1/m", "0.1/m".
    std::string vertex_name(int level, int id) const;

    // Vertex ids of the copy at `address` inside C-hat_level.
    std::vector<int> copy_vertices(int level, std::span<const int> address) const;

private:
    CellSpec spec_;
    std::int64_t vertex_cap_;
    std::vector<FiniteGraph> graphs_;        // index k -> level k+1
    std::vector<std::int64_t> vcounts_;      // vertex counts per level (1-based offset)
    std::vector<int> boundary_rank_;         // #boundary ids < v, per host id

    int fresh_offset(int level, int clique) const;
};

// One-point union of `copies` copies of C-hat_level glued at the origin
// vertex. Vertex 0 is the glued origin.
class OriginApproximation {
public:
    OriginApproximation(CellHierarchy& hierarchy, int level, int copies);

    const FiniteGraph& graph() const { return graph_; }
    int level() const { return level_; }
    int copies() const { return copies_; }
    int origin() const { return 0; }

    // Vertices adjacent to the rest of the infinite graph: boundary
    // vertices of the glued cells other than the origin.
    const std::vector<int>& outer_boundary() const { return outer_boundary_; }

    // Id of copy-local cell vertex; `cell_id` is an id of C-hat_level.
    int id_of(int copy, int cell_id) const;

    // Image of a vertex of the level-(l-1) approximation under the origin
    // nesting (same copy, cell vertex embedded at the origin clique).
    int embed_from_previous(const OriginApproximation& previous, int id) const;

    // (copy, cell_id) of a vertex.
    std::pair<int, int> locate(int id) const;

    CellHierarchy& hierarchy() const { return hier_; }

private:
    CellHierarchy& hier_;
    int level_;
    int copies_;
    int origin_vertex_id_;
    std::int64_t cell_vertices_;
    FiniteGraph graph_;
    std::vector<int> outer_boundary_;
};

// build_ncell / build_origin_approximation as thin wrappers.
FiniteGraph build_ncell(const CellSpec& spec, int n, std::int64_t vertex_cap = 50'000'000);

enum class OriginMode { origin_cell, origin_vertex };

struct OriginBuild {
    FiniteGraph graph;
    int origin = 0;                 // distinguished vertex (origin-vertex mode)
    std::vector<int> origin_cell;   // nested origin clique (origin-cell mode)
};

OriginBuild build_origin_approximation(const CellSpec& spec, int n, OriginMode mode,
                                       std::int64_t vertex_cap = 50'000'000);

// Shell decomposition A_1 = O_1, A_{n+1} = O_{n+1} \ O_n of an origin
// approximation, and the edge counts a_n between consecutive shells.
struct ShellReport {
    std::vector<int> shell_sizes;          // |A_n|, n = 1..N
    std::vector<std::int64_t> crossing_edges;  // a_n between A_n and A_{n+1}, n = 1..N-1
    bool one_dimensional = true;           // no edge skips a shell
    std::int64_t max_crossing = 0;
};

ShellReport shell_conductance(CellHierarchy& hierarchy, int max_level);

} // namespace selfsim

#endif
