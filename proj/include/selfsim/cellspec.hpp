#ifndef SELFSIM_CELLSPEC_HPP
#define SELFSIM_CELLSPEC_HPP

#include <optional>
#include <string>
#include <vector>

#include "selfsim/graph.hpp"

namespace selfsim {

// Finite description of the cell graph C-hat (mu glued copies of K_theta)
// together with the substitution data that generates the self-similar graph.
struct CellSpec {
    std::string name;
    int theta = 0;
    std::vector<std::string> vertices;
    std::vector<std::string> boundary;                    // theta names, order significant
    std::vector<std::vector<std::string>> cliques;        // mu lists of theta names
    int origin_clique = 0;
    // Per clique: theta vertex names from that clique; position i receives
    // boundary[i] of the inserted copy.
    std::vector<std::vector<std::string>> substitution_maps;
    std::optional<std::string> origin_vertex;
    std::optional<int> star_multiplicity;

    int mu() const { return static_cast<int>(cliques.size()); }
    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int vertex_index(const std::string& name) const;  // -1 when absent

    // Index form of the data above; valid after validate().
    std::vector<int> boundary_ids;
    std::vector<std::vector<int>> clique_ids;
    std::vector<std::vector<int>> substitution_ids;
    int origin_vertex_id = -1;

    // The cell graph: union of the clique edge sets, boundary designated.
    FiniteGraph cell_graph() const;

    bool is_boundary(int vertex_id) const;
    int boundary_position(int vertex_id) const;  // -1 when not boundary
};

struct ValidationIssue {
    std::string axiom;  // e.g. "F1", "S1", "format"
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

// Parses the JSON cell-spec format. Throws SpecError on malformed input;
// structural axiom violations go into the report of validate_spec().
CellSpec parse_cell_spec(const std::string& json_text);
CellSpec load_cell_spec(const std::string& path);

// Structural validation: format consistency, (F1) at cell level, the
// two-cliques condition, connectivity, bounded geometry (Lemma-degree
// condition), and origin/substitution consistency.
ValidationReport validate_spec(CellSpec& spec);

struct SymmetryReport {
    bool simply_symmetric = false;      // Aut acts transitively on the boundary
    bool doubly_symmetric = false;      // ... doubly transitively
    std::int64_t automorphism_count = 0;
    // One witness automorphism per reached ordered boundary pair, as vertex
    // permutations of the cell graph.
    std::vector<std::vector<int>> witnesses;
};

// Exhaustive backtracking search over automorphisms of the cell graph that
// fix the boundary setwise. Cells are small; the search is exact.
SymmetryReport check_symmetry(const CellSpec& spec, int vertex_cap = 64);

struct BoundedGeometryReport {
    bool bounded = true;
    std::vector<std::string> details;
};

// Condition (2) of the degree lemma: every boundary vertex has exactly
// theta-1 neighbours inside the open cell.
BoundedGeometryReport check_bounded_geometry(const CellSpec& spec);

} // namespace selfsim

#endif
