#include "selfsim/oracle.hpp"

#include <algorithm>

#include "selfsim/errors.hpp"
#include "selfsim/resolvent.hpp"

namespace selfsim {

SparseRatMatrix absorbing_walk_matrix(const FiniteGraph& g, const std::vector<int>& absorbing) {
    std::vector<char> absorbed(g.vertex_count(), 0);
    for (int b : absorbing) absorbed[b] = 1;
    SparseRatMatrix q;
    q.n = g.vertex_count();
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (absorbed[v]) continue;
        Rat w(1, g.degree(v));
        for (int u : g.neighbors(v)) q.entries.push_back({v, u, w});
    }
    return q;
}

RationalFunction green_ncell(const AbsorbingWalkProblem& problem) {
    auto q = absorbing_walk_matrix(problem.graph, problem.absorbing);
    auto row = resolvent_row(q, problem.source);
    return row[problem.target];
}

DecimationReport verify_decimation_identities(const CellSpec& spec, int n_max,
                                              std::int64_t vertex_cap) {
    TransferSet t = compute_transfer(spec);
    return verify_decimation_identities(spec, t, n_max, vertex_cap);
}

DecimationReport verify_decimation_identities(const CellSpec& spec, const TransferSet& t,
                                              int n_max, std::int64_t vertex_cap) {
    DecimationReport report;
    CellHierarchy hier(spec, vertex_cap);
    int v = spec.boundary_ids[0];
    int w = spec.boundary_ids[1];
    RationalFunction theta_minus_1(Rat(spec.theta - 1));

    RationalFunction d_power = RationalFunction::identity();  // d^n as n advances
    RationalFunction return_product(Rat(1));                  // prod_{k<n} f(d^k)

    for (int n = 1; n <= n_max; ++n) {
        DecimationLevel level;
        level.level = n;
        const FiniteGraph* g = nullptr;
        try {
            g = &hier.graph(n);
        } catch (const ResourceCap&) {
            report.details = "size cap reached at level " + std::to_string(n);
            break;
        }
        return_product = return_product * compose(t.f, d_power);
        d_power = compose(t.d, d_power);

        std::vector<int> absorbing_a;
        for (int b : spec.boundary_ids)
            if (b != v) absorbing_a.push_back(b);
        auto row_v = resolvent_row(absorbing_walk_matrix(*g, absorbing_a), v);
        level.transition_identity = (row_v[w] * theta_minus_1 == d_power);
        level.return_identity = (row_v[v] == return_product);

        // G_n^B(y, v) for every F^{n-1} vertex y strictly inside the n-cell;
        // the host ids realize phi^{n-1} directly.
        auto col_v = resolvent_column(absorbing_walk_matrix(*g, spec.boundary_ids), v);
        RationalFunction d_prev = iterate_map(t.d, n - 1);
        level.inner_identity = true;
        for (int y : t.interior) {
            RationalFunction expected = compose(t.h_of(y, v), d_prev);
            if (!(col_v[y] == expected)) {
                level.inner_identity = false;
                report.details = "inner identity failed at level " + std::to_string(n) +
                                 " for host vertex " + spec.vertices[y];
                break;
            }
        }
        report.levels.push_back(level);
        if (level.ok())
            report.levels_verified = n;
        else
            break;
    }
    report.all_ok = report.levels_verified == n_max;
    return report;
}

std::vector<Rat> walk_series(const FiniteGraph& g, int from, int to, int order) {
    std::vector<Rat> cur(g.vertex_count(), Rat(0)), next(g.vertex_count());
    cur[from] = 1;
    std::vector<Rat> out;
    out.reserve(order + 1);
    out.push_back(cur[to]);
    for (int k = 1; k <= order; ++k) {
        for (auto& x : next) x = 0;
        for (int i = 0; i < g.vertex_count(); ++i) {
            if (cur[i] == 0) continue;
            Rat share = cur[i] / g.degree(i);
            for (int j : g.neighbors(i)) next[j] += share;
        }
        std::swap(cur, next);
        out.push_back(cur[to]);
    }
    return out;
}

std::vector<Rat> series_multiply(const std::vector<Rat>& a, const std::vector<Rat>& b,
                                 int order) {
    std::vector<Rat> out(order + 1, Rat(0));
    for (int i = 0; i <= order && i < static_cast<int>(a.size()); ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j + i <= order && j < static_cast<int>(b.size()); ++j)
            out[i + j] += a[i] * b[j];
    }
    return out;
}

std::vector<Rat> series_compose(const std::vector<Rat>& outer, const std::vector<Rat>& inner,
                                int order) {
    if (!inner.empty() && inner[0] != 0)
        throw std::invalid_argument("series_compose: inner valuation must be >= 1");
    // Horner over truncated series.
    std::vector<Rat> acc(1, Rat(0));
    for (int k = std::min<int>(order, static_cast<int>(outer.size()) - 1); k >= 0; --k) {
        acc = series_multiply(acc, inner, order);
        acc[0] += outer[k];
    }
    acc.resize(order + 1, Rat(0));
    return acc;
}

SeriesCheckReport functional_equation_series_check(const CellSpec& spec, int order,
                                                   int level_cap) {
    SeriesCheckReport report;
    report.order = order;
    TransferSet t = compute_transfer(spec);
    CellHierarchy hier(spec);
    if (spec.origin_vertex_id < 0 || !spec.star_multiplicity)
        throw SpecError("functional_equation_series_check requires origin_vertex mode");

    // Grow until walks of length <= order from the origin cannot feel the
    // approximation boundary.
    int level = 2;
    for (;; ++level) {
        if (level > level_cap)
            throw ResourceCap("approximation level cap reached before truncation exactness");
        OriginApproximation approx(hier, level, *spec.star_multiplicity);
        auto dist = approx.graph().distances_from_set(approx.outer_boundary());
        if (dist[approx.origin()] > order) break;
    }
    OriginApproximation approx(hier, level, *spec.star_multiplicity);
    report.approximation_level = level;

    auto d_series = t.d.series_coefficients(order + 1);
    auto f_series = t.f.series_coefficients(order + 1);

    // theta-C vertex of copy 0 at a given nesting level, as an id of O_level.
    auto boundary_vertex_at = [&](int at_level) {
        int b1 = -1;
        for (int b : spec.boundary_ids)
            if (b != spec.origin_vertex_id) {
                b1 = b;
                break;
            }
        int cid = b1;
        for (int l = at_level + 1; l <= level; ++l)
            cid = hier.embed_into_copy(l, spec.origin_clique, cid);
        return approx.id_of(0, cid);
    };

    struct PairSpec {
        std::string label;
        int lhs_from, lhs_to;
        int rhs_from, rhs_to;
    };
    int o = approx.origin();
    std::vector<PairSpec> pairs = {
        {"(o,o)", o, o, o, o},
        {"(o,thetaC2)", o, boundary_vertex_at(2), o, boundary_vertex_at(1)},
    };

    report.all_ok = true;
    for (const auto& p : pairs) {
        auto lhs = walk_series(approx.graph(), p.lhs_from, p.lhs_to, order);
        auto shrunk = walk_series(approx.graph(), p.rhs_from, p.rhs_to, order);
        auto rhs = series_multiply(series_compose(shrunk, d_series, order), f_series, order);
        SeriesCheckPair result;
        result.label = p.label;
        result.match = true;
        for (int k = 0; k <= order; ++k) {
            if (lhs[k] != rhs[k]) {
                result.match = false;
                result.first_mismatch = k;
                result.lhs_at_mismatch = lhs[k].get_str();
                result.rhs_at_mismatch = rhs[k].get_str();
                break;
            }
        }
        report.all_ok = report.all_ok && result.match;
        report.pairs.push_back(result);
    }
    return report;
}

} // namespace selfsim
