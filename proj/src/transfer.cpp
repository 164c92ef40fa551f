#include "selfsim/transfer.hpp"

#include <algorithm>
#include <set>

#include "selfsim/errors.hpp"
#include "selfsim/resolvent.hpp"

namespace selfsim {

namespace {

// Substochastic transition matrix of the SRW on `g` with absorbing set B:
// q(x, y) = 1/deg(x) for x ~ y, x not in B.
SparseRatMatrix walk_matrix(const FiniteGraph& g, const std::vector<int>& absorbing) {
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

std::vector<ComplexPoint> dedup_points(std::vector<ComplexPoint> pts, double radius) {
    std::vector<ComplexPoint> out;
    for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : out)
            if (p.same_point(q, radius)) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](const ComplexPoint& a, const ComplexPoint& b) {
        if (a.is_inf != b.is_inf) return b.is_inf;
        if (a.re != b.re) return a.re < b.re;
        return a.im < b.im;
    });
    return out;
}

} // namespace

int TransferSet::interior_position(int vertex_id) const {
    auto it = std::find(interior.begin(), interior.end(), vertex_id);
    return it == interior.end() ? -1 : static_cast<int>(it - interior.begin());
}

const RationalFunction& TransferSet::h_of(int interior_id, int other_id) const {
    int pos = interior_position(interior_id);
    if (pos < 0) throw std::invalid_argument("h_of: first vertex must be interior");
    return h[pos][other_id];
}

RationalFunction TransferSet::h_tilde(int boundary_id, int interior_id) const {
    const RationalFunction& base = h_of(interior_id, boundary_id);
    Rat ratio(cell_degrees[interior_id], cell_degrees[boundary_id]);
    ratio.canonicalize();
    return base * RationalFunction(ratio);
}

std::vector<ComplexPoint> TransferSet::exceptional_seeds() const {
    std::vector<ComplexPoint> seeds = poles_f;
    seeds.insert(seeds.end(), poles_cell.begin(), poles_cell.end());
    return dedup_points(std::move(seeds), 1e-9);
}

TransferSet compute_transfer(const CellSpec& spec) {
    if (spec.clique_ids.empty())
        throw SpecError("compute_transfer: spec must be validated first");
    auto symmetry = check_symmetry(spec);
    if (!symmetry.doubly_symmetric)
        throw SpecError("compute_transfer: cell is not doubly symmetric; "
                        "the transition function would depend on the boundary pair");

    TransferSet t;
    t.theta = spec.theta;
    FiniteGraph cell = spec.cell_graph();
    t.cell_degrees.resize(cell.vertex_count());
    for (int v = 0; v < cell.vertex_count(); ++v) t.cell_degrees[v] = cell.degree(v);
    for (int v = 0; v < cell.vertex_count(); ++v)
        if (!spec.is_boundary(v)) t.interior.push_back(v);

    // d from any ordered boundary pair, f from any boundary vertex; all
    // choices are recomputed and compared exactly.
    bool first = true;
    for (int vpos = 0; vpos < spec.theta; ++vpos) {
        int v = spec.boundary_ids[vpos];
        std::vector<int> absorbing;
        for (int b : spec.boundary_ids)
            if (b != v) absorbing.push_back(b);
        auto row = resolvent_row(walk_matrix(cell, absorbing), v);
        RationalFunction f_here = row[v];
        Rat scale(spec.theta - 1);
        for (int wpos = 0; wpos < spec.theta; ++wpos) {
            if (wpos == vpos) continue;
            RationalFunction d_here = row[spec.boundary_ids[wpos]] * RationalFunction(scale);
            if (first) {
                t.d = d_here;
                t.f = f_here;
                first = false;
            } else if (!(d_here == t.d)) {
                throw SpecError("transition function depends on the boundary pair (" +
                                spec.boundary[vpos] + "," + spec.boundary[wpos] +
                                "); substitution data is inconsistent with (S3)");
            }
        }
        if (!(f_here == t.f))
            throw SpecError("return function depends on the boundary vertex " +
                            spec.boundary[vpos]);
    }

    // Inner transition functions: absorbing boundary is all of theta C.
    SparseRatMatrix q_full = walk_matrix(cell, spec.boundary_ids);
    t.h.reserve(t.interior.size());
    for (int x : t.interior) t.h.push_back(resolvent_row(q_full, x));

    // Boundary diameter inside the cell.
    for (int b : spec.boundary_ids) {
        auto dist = cell.distances_from(b);
        for (int c : spec.boundary_ids) t.diam_boundary = std::max(t.diam_boundary, dist[c]);
    }

    // Derived point sets.
    RootOptions opts;
    auto locs = [](const std::vector<Root>& roots) {
        std::vector<ComplexPoint> out;
        for (const auto& r : roots)
            for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.location);
        return out;
    };
    t.poles_f = dedup_points(locs(find_roots(t.f.den(), opts)), 1e-9);
    t.zeroes_f = t.f.num().degree() > 0 ? dedup_points(locs(find_roots(t.f.num(), opts)), 1e-9)
                                        : std::vector<ComplexPoint>{};
    std::vector<ComplexPoint> cell_poles;
    std::set<std::vector<std::pair<long, long>>> seen_dens;
    for (const auto& row : t.h) {
        for (const auto& entry : row) {
            if (entry.is_zero() || entry.den().degree() == 0) continue;
            // Distinct denominators only; they repeat heavily across pairs.
            std::vector<std::pair<long, long>> key;
            bool key_ok = true;
            for (const auto& c : entry.den().coeffs()) {
                if (!c.get_num().fits_slong_p() || !c.get_den().fits_slong_p()) {
                    key_ok = false;
                    break;
                }
                key.emplace_back(c.get_num().get_si(), c.get_den().get_si());
            }
            if (key_ok && !seen_dens.insert(key).second) continue;
            auto roots = locs(find_roots(entry.den(), opts));
            cell_poles.insert(cell_poles.end(), roots.begin(), roots.end());
        }
    }
    t.poles_cell = dedup_points(std::move(cell_poles), 1e-9);
    return t;
}

FixedPointReport check_fixed_points(const TransferSet& t) {
    FixedPointReport report;
    report.diam_boundary = t.diam_boundary;
    const RationalFunction& d = t.d;
    if (d.is_zero() || d.num().coeff(0) != 0 || d.den().coeff(0) == 0) {
        report.details = "d(0) != 0";
        return report;
    }
    report.order_at_zero = d.num().valuation();
    auto at_one = d.eval_exact(Rat(1));
    report.d_fixes_one = at_one && *at_one == 1;
    auto deriv_at_one = d.derivative().eval_exact(Rat(1));
    if (deriv_at_one) report.d_prime_at_one = *deriv_at_one;
    report.ok = report.order_at_zero == t.diam_boundary && report.order_at_zero >= 2 &&
                report.d_fixes_one && deriv_at_one && *deriv_at_one > 2;
    if (!report.ok) {
        report.details = "fixed-point certificate failed: ord0=" +
                         std::to_string(report.order_at_zero) +
                         " diam=" + std::to_string(t.diam_boundary) +
                         " d(1)=1:" + (report.d_fixes_one ? "yes" : "no") +
                         " d'(1)=" + (deriv_at_one ? deriv_at_one->get_str() : "pole");
    }
    return report;
}

bool check_zeroes_lemma(const TransferSet& t, double radius) {
    for (const auto& zero : t.zeroes_f) {
        bool matched = false;
        for (const auto& pole : t.poles_cell)
            if (zero.same_point(pole, radius)) {
                matched = true;
                break;
            }
        if (!matched) return false;
    }
    return true;
}

bool first_passage_identity(const CellSpec& spec, const TransferSet& t) {
    FiniteGraph cell = spec.cell_graph();
    for (int v : spec.boundary_ids) {
        // First return to v avoiding the rest of the boundary: one step to a
        // neighbour (interior by (F1)), then an inner transition back to v.
        RationalFunction fhat;
        RationalFunction z_over_deg(Polynomial::monomial(Rat(1, cell.degree(v)), 1));
        for (int y : cell.neighbors(v)) fhat += z_over_deg * t.h_of(y, v);
        RationalFunction expected =
            RationalFunction(Rat(1)) - RationalFunction(Rat(1)) / t.f;
        if (!(fhat == expected)) return false;
    }
    return true;
}

} // namespace selfsim
