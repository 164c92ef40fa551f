#include "selfsim/cellspec.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "selfsim/errors.hpp"

namespace selfsim {

int CellSpec::vertex_index(const std::string& name) const {
    auto it = std::find(vertices.begin(), vertices.end(), name);
    return it == vertices.end() ? -1 : static_cast<int>(it - vertices.begin());
}

bool CellSpec::is_boundary(int vertex_id) const {
    return std::find(boundary_ids.begin(), boundary_ids.end(), vertex_id) != boundary_ids.end();
}

int CellSpec::boundary_position(int vertex_id) const {
    auto it = std::find(boundary_ids.begin(), boundary_ids.end(), vertex_id);
    return it == boundary_ids.end() ? -1 : static_cast<int>(it - boundary_ids.begin());
}

FiniteGraph CellSpec::cell_graph() const {
    std::vector<std::pair<int, int>> edges;
    for (const auto& clique : clique_ids)
        for (size_t i = 0; i < clique.size(); ++i)
            for (size_t j = i + 1; j < clique.size(); ++j)
                edges.emplace_back(clique[i], clique[j]);
    return FiniteGraph::from_edges(vertex_count(), std::move(edges), boundary_ids);
}

std::string ValidationReport::to_string() const {
    if (ok()) return "all axioms pass\n";
    std::ostringstream os;
    for (const auto& issue : issues) os << "[" << issue.axiom << "] " << issue.message << "\n";
    return os.str();
}

CellSpec parse_cell_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("cell spec: JSON parse error: ") + e.what());
    }
    CellSpec spec;
    try {
        spec.name = j.at("name").get<std::string>();
        spec.theta = j.at("theta").get<int>();
        spec.vertices = j.at("vertices").get<std::vector<std::string>>();
        spec.boundary = j.at("boundary").get<std::vector<std::string>>();
        spec.cliques = j.at("cliques").get<std::vector<std::vector<std::string>>>();
        spec.origin_clique = j.at("origin_clique").get<int>();
        spec.substitution_maps = j.at("substitution_maps").get<std::vector<std::vector<std::string>>>();
        if (j.contains("origin_vertex")) spec.origin_vertex = j.at("origin_vertex").get<std::string>();
        if (j.contains("star_multiplicity")) spec.star_multiplicity = j.at("star_multiplicity").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(std::string("cell spec: missing or mistyped key: ") + e.what());
    }
    return spec;
}

CellSpec load_cell_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open cell spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cell_spec(buf.str());
}

ValidationReport validate_spec(CellSpec& spec) {
    ValidationReport report;
    auto fail = [&](const std::string& axiom, const std::string& msg) {
        report.issues.push_back({axiom, msg});
    };

    if (spec.theta < 2) fail("format", "theta must be >= 2");
    std::set<std::string> seen;
    for (const auto& v : spec.vertices)
        if (!seen.insert(v).second) fail("format", "duplicate vertex name: " + v);
    if (static_cast<int>(spec.boundary.size()) != spec.theta)
        fail("format", "boundary must list exactly theta vertices");
    if (spec.cliques.empty()) fail("format", "at least one clique required");
    if (spec.substitution_maps.size() != spec.cliques.size())
        fail("format", "substitution_maps must have one entry per clique");
    if (spec.origin_clique < 0 || spec.origin_clique >= spec.mu())
        fail("format", "origin_clique out of range");
    if (!report.ok()) return report;

    auto resolve_list = [&](const std::vector<std::string>& names, const char* what,
                            std::vector<int>& out) {
        out.clear();
        for (const auto& n : names) {
            int id = spec.vertex_index(n);
            if (id < 0) {
                fail("format", std::string(what) + ": unknown vertex " + n);
                return false;
            }
            out.push_back(id);
        }
        return true;
    };

    if (!resolve_list(spec.boundary, "boundary", spec.boundary_ids)) return report;
    spec.clique_ids.clear();
    for (const auto& clique : spec.cliques) {
        std::vector<int> ids;
        if (!resolve_list(clique, "clique", ids)) return report;
        if (static_cast<int>(ids.size()) != spec.theta)
            fail("S1", "every clique must have exactly theta vertices (cells are unions of K_theta)");
        std::set<int> uniq(ids.begin(), ids.end());
        if (uniq.size() != ids.size()) fail("S1", "clique vertices must be distinct");
        spec.clique_ids.push_back(std::move(ids));
    }
    spec.substitution_ids.clear();
    for (size_t i = 0; i < spec.substitution_maps.size(); ++i) {
        std::vector<int> ids;
        if (!resolve_list(spec.substitution_maps[i], "substitution map", ids)) return report;
        spec.substitution_ids.push_back(ids);
        if (report.ok()) {
            std::set<int> image(ids.begin(), ids.end());
            std::set<int> clique(spec.clique_ids[i].begin(), spec.clique_ids[i].end());
            if (image != clique)
                fail("format", "substitution map " + std::to_string(i) +
                                   " must be a bijection onto clique " + std::to_string(i));
        }
    }
    if (!report.ok()) return report;

    FiniteGraph cell = spec.cell_graph();

    // (F1): boundary vertices pairwise non-adjacent.
    for (size_t i = 0; i < spec.boundary_ids.size(); ++i)
        for (size_t j = i + 1; j < spec.boundary_ids.size(); ++j)
            if (cell.adjacent(spec.boundary_ids[i], spec.boundary_ids[j]))
                fail("F1", "boundary vertices " + spec.boundary[i] + " and " + spec.boundary[j] +
                               " are adjacent");

    // (F2), cell level: two distinct cliques share at most one vertex.
    for (int i = 0; i < spec.mu(); ++i)
        for (int j = i + 1; j < spec.mu(); ++j) {
            std::set<int> a(spec.clique_ids[i].begin(), spec.clique_ids[i].end());
            int shared = 0;
            for (int v : spec.clique_ids[j]) shared += a.count(v);
            if (shared > 1)
                fail("F2", "cliques " + std::to_string(i) + " and " + std::to_string(j) +
                               " share " + std::to_string(shared) + " vertices");
        }

    if (!cell.connected()) fail("format", "cell graph is not connected");

    // Every vertex must lie in at least one clique.
    std::vector<int> clique_count(spec.vertex_count(), 0);
    for (const auto& clique : spec.clique_ids)
        for (int v : clique) ++clique_count[v];
    for (int v = 0; v < spec.vertex_count(); ++v)
        if (clique_count[v] == 0) fail("format", "vertex " + spec.vertices[v] + " lies in no clique");

    auto bg = check_bounded_geometry(spec);
    if (!bg.bounded)
        for (const auto& d : bg.details) fail("degree", d);

    spec.origin_vertex_id = -1;
    if (spec.origin_vertex) {
        spec.origin_vertex_id = spec.vertex_index(*spec.origin_vertex);
        if (spec.origin_vertex_id < 0)
            fail("format", "origin_vertex is not a vertex: " + *spec.origin_vertex);
        else {
            if (std::find(spec.boundary_ids.begin(), spec.boundary_ids.end(),
                          spec.origin_vertex_id) == spec.boundary_ids.end())
                fail("format", "origin_vertex must be a boundary vertex");
            const auto& oc = spec.clique_ids[spec.origin_clique];
            if (std::find(oc.begin(), oc.end(), spec.origin_vertex_id) == oc.end())
                fail("format", "origin_vertex must belong to the origin clique");
            // Nesting must fix the origin vertex: the origin clique's map
            // sends the origin vertex's boundary slot to itself.
            int pos = spec.boundary_position(spec.origin_vertex_id);
            if (pos >= 0 && !spec.substitution_ids.empty() &&
                spec.substitution_ids[spec.origin_clique][pos] != spec.origin_vertex_id)
                fail("format",
                     "substitution map of the origin clique must fix the origin vertex");
        }
        if (!spec.star_multiplicity || *spec.star_multiplicity < 2)
            fail("format", "origin_vertex mode requires star_multiplicity >= 2");
        // Every non-origin boundary vertex must leave the boundary under
        // iterated origin-clique substitution (contraction toward the
        // origin; a trapped vertex would be a second fixed point of phi).
        if (report.ok()) {
            for (int b : spec.boundary_ids) {
                if (b == spec.origin_vertex_id) continue;
                int cur = b;
                int steps = 0;
                while (spec.is_boundary(cur) && cur != spec.origin_vertex_id &&
                       steps++ <= spec.theta)
                    cur = spec.substitution_ids[spec.origin_clique][spec.boundary_position(cur)];
                if (spec.is_boundary(cur))
                    fail("format", "origin-clique substitution traps boundary vertex " +
                                       spec.vertices[b] + " on the boundary at every level");
            }
        }
    }

    return report;
}

BoundedGeometryReport check_bounded_geometry(const CellSpec& spec) {
    BoundedGeometryReport report;
    FiniteGraph cell = spec.cell_graph();
    for (size_t i = 0; i < spec.boundary_ids.size(); ++i) {
        int v = spec.boundary_ids[i];
        int inside = 0;
        for (int w : cell.neighbors(v))
            if (!spec.is_boundary(w)) ++inside;
        if (inside != spec.theta - 1) {
            report.bounded = false;
            report.details.push_back("boundary vertex " + spec.boundary[i] + " has " +
                                     std::to_string(inside) + " interior neighbours, expected " +
                                     std::to_string(spec.theta - 1));
        }
    }
    return report;
}

namespace {

// Backtracking search for graph automorphisms fixing the boundary setwise.
// The visitor returns false to stop the search.
class AutomorphismSearch {
public:
    AutomorphismSearch(const FiniteGraph& g, const std::vector<int>& boundary)
        : g_(g), n_(g.vertex_count()), is_boundary_(n_, false) {
        for (int b : boundary) is_boundary_[b] = true;
    }

    template <typename Visitor>
    void run(Visitor&& visit) {
        std::vector<int> image(n_, -1), used(n_, 0);
        search(0, image, used, visit);
    }

private:
    template <typename Visitor>
    bool search(int v, std::vector<int>& image, std::vector<int>& used, Visitor& visit) {
        if (v == n_) return visit(image);
        for (int w = 0; w < n_; ++w) {
            if (used[w] || is_boundary_[v] != is_boundary_[w] || g_.degree(v) != g_.degree(w))
                continue;
            bool ok = true;
            for (int u = 0; u < v && ok; ++u)
                if (g_.adjacent(v, u) != g_.adjacent(w, image[u])) ok = false;
            if (!ok) continue;
            image[v] = w;
            used[w] = 1;
            bool keep_going = search(v + 1, image, used, visit);
            image[v] = -1;
            used[w] = 0;
            if (!keep_going) return false;
        }
        return true;
    }

    const FiniteGraph& g_;
    int n_;
    std::vector<char> is_boundary_;
};

} // namespace

SymmetryReport check_symmetry(const CellSpec& spec, int vertex_cap) {
    if (spec.vertex_count() > vertex_cap)
        throw ResourceCap("symmetry search aborted: cell has " +
                          std::to_string(spec.vertex_count()) + " vertices, cap " +
                          std::to_string(vertex_cap));
    FiniteGraph cell = spec.cell_graph();
    const auto& bd = spec.boundary_ids;
    const int theta = spec.theta;
    const int pair_target = theta * (theta - 1);

    std::set<int> single_orbit;
    std::set<std::pair<int, int>> pair_orbit;
    SymmetryReport report;

    AutomorphismSearch search(cell, bd);
    search.run([&](const std::vector<int>& image) {
        ++report.automorphism_count;
        bool fresh = false;
        if (single_orbit.insert(image[bd[0]]).second) fresh = true;
        if (theta >= 2 && pair_orbit.insert({image[bd[0]], image[bd[1]]}).second) fresh = true;
        if (fresh) report.witnesses.push_back(image);
        // Stop once double transitivity is established; the count is then
        // a lower bound, which is all the report needs.
        return static_cast<int>(pair_orbit.size()) < pair_target;
    });

    report.simply_symmetric = static_cast<int>(single_orbit.size()) == theta;
    report.doubly_symmetric = static_cast<int>(pair_orbit.size()) == pair_target;
    return report;
}

} // namespace selfsim
