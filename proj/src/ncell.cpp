#include "selfsim/ncell.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "selfsim/errors.hpp"

namespace selfsim {

CellAddress phi_s_step(const CellAddress& addr) {
    if (addr.digits.empty()) throw std::invalid_argument("phi_s_step: empty address");
    CellAddress out;
    out.digits.assign(addr.digits.begin(), addr.digits.end() - 1);
    return out;
}

CellAddress address_at_level(const CellAddress& addr, const CellSpec& spec, int level) {
    int k = static_cast<int>(addr.digits.size());
    if (level < k) throw std::invalid_argument("address_at_level: level below address length");
    CellAddress out;
    out.digits.assign(level - k, spec.origin_clique);
    out.digits.insert(out.digits.end(), addr.digits.begin(), addr.digits.end());
    return out;
}

CellHierarchy::CellHierarchy(CellSpec spec, std::int64_t vertex_cap)
    : spec_(std::move(spec)), vertex_cap_(vertex_cap) {
    if (spec_.clique_ids.empty())
        throw std::logic_error("CellHierarchy: spec must be validated first");
    boundary_rank_.assign(spec_.vertex_count() + 1, 0);
    for (int v = 1; v <= spec_.vertex_count(); ++v)
        boundary_rank_[v] = boundary_rank_[v - 1] + (spec_.is_boundary(v - 1) ? 1 : 0);
    graphs_.push_back(spec_.cell_graph());
    vcounts_.push_back(spec_.vertex_count());
}

void CellHierarchy::grow_to(int level) {
    while (levels_built() < level) {
        int n = levels_built() + 1;  // level being built
        std::int64_t inner_count = vcounts_.back();
        std::int64_t fresh_per_copy = inner_count - spec_.theta;
        std::int64_t total = spec_.vertex_count() + spec_.mu() * fresh_per_copy;
        if (total > vertex_cap_)
            throw ResourceCap("n-cell at level " + std::to_string(n) + " needs " +
                              std::to_string(total) + " vertices, cap " +
                              std::to_string(vertex_cap_));
        const FiniteGraph& inner = graphs_.back();
        std::vector<std::pair<int, int>> edges;
        edges.reserve(static_cast<size_t>(inner.edge_count()) * spec_.mu());
        vcounts_.push_back(total);
        for (int i = 0; i < spec_.mu(); ++i) {
            for (int v = 0; v < inner.vertex_count(); ++v) {
                int gv = embed_into_copy(n, i, v);
                for (int w : inner.neighbors(v)) {
                    if (w < v) continue;
                    edges.emplace_back(gv, embed_into_copy(n, i, w));
                }
            }
        }
        graphs_.push_back(FiniteGraph::from_edges(static_cast<int>(total), std::move(edges),
                                                  spec_.boundary_ids));
    }
}

const FiniteGraph& CellHierarchy::graph(int level) {
    if (level < 1) throw std::invalid_argument("graph: level must be >= 1");
    grow_to(level);
    return graphs_[level - 1];
}

std::int64_t CellHierarchy::vertex_count(int level) const {
    return vcounts_.at(level - 1);
}

int CellHierarchy::fresh_offset(int level, int clique) const {
    std::int64_t inner_fresh = vcounts_[level - 2] - spec_.theta;
    return static_cast<int>(spec_.vertex_count() + clique * inner_fresh);
}

int CellHierarchy::embed_into_copy(int level, int clique, int inner_id) const {
    if (level < 2) throw std::invalid_argument("embed_into_copy: level must be >= 2");
    // Boundary ids of every level's graph are the host boundary ids.
    if (inner_id < spec_.vertex_count()) {
        int pos = spec_.boundary_position(inner_id);
        if (pos >= 0) return spec_.substitution_ids[clique][pos];
    }
    int rank = inner_id - boundary_rank_[std::min(inner_id, spec_.vertex_count())];
    return fresh_offset(level, clique) + rank;
}

int CellHierarchy::resolve(int level, std::span<const int> digits, int local) const {
    if (static_cast<int>(digits.size()) > level - 1)
        throw std::invalid_argument("resolve: address longer than level allows");
    if (local < 0 || local >= spec_.vertex_count())
        throw std::out_of_range("resolve: local vertex id");
    if (digits.empty()) return local;
    int inner = resolve(level - 1, digits.subspan(1), local);
    return embed_into_copy(level, digits[0], inner);
}

std::string CellHierarchy::vertex_name(int level, int id) const {
    // Inverse of embed_into_copy's dense rank: position r among the
    // non-boundary ids of the inner graph.
    std::vector<int> nonboundary_hosts;
    for (int v = 0; v < spec_.vertex_count(); ++v)
        if (!spec_.is_boundary(v)) nonboundary_hosts.push_back(v);

    std::ostringstream os;
    int cur = id;
    int lv = level;
    bool first = true;
    while (lv > 1 && cur >= spec_.vertex_count()) {
        std::int64_t inner_fresh = vcounts_[lv - 2] - spec_.theta;
        int clique = static_cast<int>((cur - spec_.vertex_count()) / inner_fresh);
        std::int64_t rank = (cur - spec_.vertex_count()) % inner_fresh;
        os << (first ? "" : ".") << clique;
        first = false;
        if (rank < static_cast<std::int64_t>(nonboundary_hosts.size()))
            cur = nonboundary_hosts[rank];
        else
            cur = static_cast<int>(rank - nonboundary_hosts.size() + spec_.vertex_count());
        --lv;
    }
    os << (first ? "" : "/") << spec_.vertices[cur];
    return os.str();
}

std::vector<int> CellHierarchy::copy_vertices(int level, std::span<const int> address) const {
    if (address.empty()) {
        std::vector<int> all(static_cast<size_t>(vcounts_[level - 1]));
        for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        return all;
    }
    auto inner = copy_vertices(level - 1, address.subspan(1));
    std::vector<int> out;
    out.reserve(inner.size());
    for (int v : inner) out.push_back(embed_into_copy(level, address[0], v));
    std::sort(out.begin(), out.end());
    return out;
}

OriginApproximation::OriginApproximation(CellHierarchy& hierarchy, int level, int copies)
    : hier_(hierarchy), level_(level), copies_(copies) {
    const CellSpec& spec = hierarchy.spec();
    if (spec.origin_vertex_id < 0)
        throw SpecError("origin approximation requires an origin_vertex in the cell spec");
    if (copies < 2) throw SpecError("origin approximation requires >= 2 copies");
    origin_vertex_id_ = spec.origin_vertex_id;
    const FiniteGraph& cell = hierarchy.graph(level);
    cell_vertices_ = hierarchy.vertex_count(level);
    std::int64_t total = 1 + copies * (cell_vertices_ - 1);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(cell.edge_count()) * copies);
    for (int c = 0; c < copies; ++c) {
        for (int v = 0; v < cell.vertex_count(); ++v) {
            int gv = id_of(c, v);
            for (int w : cell.neighbors(v)) {
                if (w < v) continue;
                edges.emplace_back(gv, id_of(c, w));
            }
        }
    }
    std::vector<int> bd;
    for (int c = 0; c < copies; ++c)
        for (int b : spec.boundary_ids)
            if (b != origin_vertex_id_) bd.push_back(id_of(c, b));
    std::sort(bd.begin(), bd.end());
    outer_boundary_ = bd;
    graph_ = FiniteGraph::from_edges(static_cast<int>(total), std::move(edges), std::move(bd));
}

int OriginApproximation::id_of(int copy, int cell_id) const {
    if (cell_id == origin_vertex_id_) return 0;
    std::int64_t rank = cell_id - (cell_id > origin_vertex_id_ ? 1 : 0);
    return static_cast<int>(1 + copy * (cell_vertices_ - 1) + rank);
}

std::pair<int, int> OriginApproximation::locate(int id) const {
    if (id == 0) return {0, origin_vertex_id_};
    std::int64_t r = id - 1;
    int copy = static_cast<int>(r / (cell_vertices_ - 1));
    std::int64_t rank = r % (cell_vertices_ - 1);
    int cell_id = static_cast<int>(rank + (rank >= origin_vertex_id_ ? 1 : 0));
    return {copy, cell_id};
}

int OriginApproximation::embed_from_previous(const OriginApproximation& previous, int id) const {
    auto [copy, cell_id] = previous.locate(id);
    int lifted = hier_.embed_into_copy(level_, hier_.spec().origin_clique, cell_id);
    return id_of(copy, lifted);
}

FiniteGraph build_ncell(const CellSpec& spec, int n, std::int64_t vertex_cap) {
    CellHierarchy hier(spec, vertex_cap);
    return hier.graph(n);
}

OriginBuild build_origin_approximation(const CellSpec& spec, int n, OriginMode mode,
                                       std::int64_t vertex_cap) {
    OriginBuild out;
    if (mode == OriginMode::origin_cell) {
        CellHierarchy hier(spec, vertex_cap);
        out.graph = hier.graph(n);
        CellAddress origin;
        origin.digits.assign(n - 1, spec.origin_clique);
        out.origin_cell = hier.copy_vertices(n, origin.digits);
        out.origin = -1;
        return out;
    }
    CellHierarchy hier(spec, vertex_cap);
    if (!spec.star_multiplicity)
        throw SpecError("origin_vertex mode requires star_multiplicity");
    OriginApproximation approx(hier, n, *spec.star_multiplicity);
    out.graph = approx.graph();
    out.origin = approx.origin();
    return out;
}

ShellReport shell_conductance(CellHierarchy& hierarchy, int max_level) {
    const CellSpec& spec = hierarchy.spec();
    if (!spec.star_multiplicity || spec.origin_vertex_id < 0)
        throw SpecError("shell decomposition requires origin_vertex mode");
    int copies = *spec.star_multiplicity;
    int top = max_level + 1;  // edges A_n <-> A_{n+1} need O_{n+1}
    int ov = spec.origin_vertex_id;

    hierarchy.grow_to(top);
    OriginApproximation o_top(hierarchy, top, copies);
    const FiniteGraph& g = o_top.graph();

    // Only the top approximation needs its graph; lower levels enter via
    // their id arithmetic (copy, cell-id) and the origin-clique embedding.
    auto locate_at = [&](std::int64_t cell_count, int id) -> std::pair<int, int> {
        if (id == 0) return {0, ov};
        std::int64_t r = id - 1;
        int copy = static_cast<int>(r / (cell_count - 1));
        std::int64_t rank = r % (cell_count - 1);
        return {copy, static_cast<int>(rank + (rank >= ov ? 1 : 0))};
    };

    std::vector<int> shell(g.vertex_count(), top);
    for (int m = 1; m < top; ++m) {
        std::int64_t count = 1 + static_cast<std::int64_t>(copies) *
                                     (hierarchy.vertex_count(m) - 1);
        for (std::int64_t v = 0; v < count; ++v) {
            auto [copy, cid] = locate_at(hierarchy.vertex_count(m), static_cast<int>(v));
            for (int l = m + 1; l <= top; ++l)
                cid = hierarchy.embed_into_copy(l, spec.origin_clique, cid);
            int id = o_top.id_of(copy, cid);
            if (shell[id] > m) shell[id] = m;
        }
    }

    ShellReport report;
    report.shell_sizes.assign(top, 0);
    for (int v = 0; v < g.vertex_count(); ++v) ++report.shell_sizes[shell[v] - 1];
    report.crossing_edges.assign(top - 1, 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
        for (int w : g.neighbors(v)) {
            if (w < v) continue;
            int a = shell[v], b = shell[w];
            if (a > b) std::swap(a, b);
            if (b - a > 1) report.one_dimensional = false;
            if (b - a == 1) ++report.crossing_edges[a - 1];
        }
    }
    for (std::int64_t c : report.crossing_edges) report.max_crossing = std::max(report.max_crossing, c);
    return report;
}

} // namespace selfsim
