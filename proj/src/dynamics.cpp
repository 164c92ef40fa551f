#include "selfsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "selfsim/errors.hpp"
#include "selfsim/roots.hpp"

namespace selfsim {

ForwardOrbit forward_orbit(const RationalFunction& d, ComplexPoint z, int max_iter,
                           double attraction_radius) {
    ForwardOrbit out;
    out.orbit.push_back(z);
    for (int n = 0; n <= max_iter; ++n) {
        const ComplexPoint& cur = out.orbit.back();
        if (!cur.is_inf && cur.abs() < attraction_radius) {
            out.converges = true;
            out.iterations = n;
            return out;
        }
        if (n == max_iter) break;
        out.orbit.push_back(d.eval_point(cur));
    }
    out.iterations = max_iter;
    return out;
}

std::vector<ComplexPoint> preimages(const RationalFunction& d, const ComplexPoint& w,
                                    bool high_precision) {
    int deg = d.map_degree();
    RootOptions opts;
    if (high_precision) opts.residual_tol = 0.0;  // force the escalated pass
    std::vector<std::complex<double>> finite;

    if (w.is_inf) {
        // Solutions of den(z) = 0, plus infinity when deg num > deg den.
        if (d.den().degree() > 0) {
            for (const auto& r : find_roots(d.den()))
                for (int k = 0; k < r.multiplicity; ++k)
                    finite.push_back(r.location.value());
        }
    } else {
        // num(z) - w den(z) = 0 with complex coefficients.
        std::vector<std::complex<double>> coeffs(deg + 1, 0.0);
        for (int k = 0; k <= d.num().degree(); ++k) coeffs[k] += to_complex(d.num().coeff(k));
        std::complex<double> wv = w.value();
        for (int k = 0; k <= d.den().degree(); ++k) coeffs[k] -= wv * to_complex(d.den().coeff(k));
        bool all_zero = true;
        for (const auto& c : coeffs)
            if (std::abs(c) > 0) all_zero = false;
        if (!all_zero) finite = find_roots_numeric(std::move(coeffs), opts);
    }

    std::vector<ComplexPoint> out;
    out.reserve(deg);
    for (const auto& r : finite) out.emplace_back(r);
    for (int k = static_cast<int>(finite.size()); k < deg; ++k)
        out.push_back(ComplexPoint::infinity());
    return out;
}

std::vector<double> OrbitTree::finite_real_points() const {
    std::vector<double> out;
    for (const auto& p : points)
        if (!p.z.is_inf && p.z.im == 0.0) out.push_back(p.z.re);
    std::sort(out.begin(), out.end());
    return out;
}

bool OrbitTree::contains_infinity() const {
    return std::any_of(points.begin(), points.end(),
                       [](const OrbitPoint& p) { return p.z.is_inf; });
}

namespace {

// Grid-hash deduplication: two points within dedup_radius of the same or a
// neighbouring grid box are identified.
class PointDedup {
public:
    explicit PointDedup(double radius) : radius_(radius) {}

    bool insert(const ComplexPoint& p) {
        if (p.is_inf) {
            if (has_inf_) return false;
            has_inf_ = true;
            return true;
        }
        long ix = static_cast<long>(std::floor(p.re / radius_));
        long iy = static_cast<long>(std::floor(p.im / radius_));
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy) {
                auto range = grid_.equal_range(key(ix + dx, iy + dy));
                for (auto it = range.first; it != range.second; ++it)
                    if (std::abs(it->second - p.value()) <= radius_) return false;
            }
        grid_.emplace(key(ix, iy), p.value());
        return true;
    }

private:
    static std::uint64_t key(long ix, long iy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) ^
               static_cast<std::uint32_t>(iy);
    }
    double radius_;
    bool has_inf_ = false;
    std::unordered_multimap<std::uint64_t, std::complex<double>> grid_;
};

bool point_less(const ComplexPoint& a, const ComplexPoint& b) {
    if (a.is_inf != b.is_inf) return b.is_inf;
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
}

// Residual of one backward step: distance of d(child) from the parent.
double backstep_residual(const RationalFunction& d, const ComplexPoint& child,
                         const ComplexPoint& parent) {
    ComplexPoint image;
    try {
        image = d.eval_point(child);
    } catch (const EvalIndeterminate&) {
        return 0.0;  // within roundoff of a pole; the step is consistent
    }
    if (parent.is_inf || image.is_inf) {
        // Consistent when both are at (or numerically heading to) infinity.
        if (parent.is_inf && (image.is_inf || image.abs() > 1e8)) return 0.0;
        if (image.is_inf && !parent.is_inf && parent.abs() > 1e8) return 0.0;
        return std::numeric_limits<double>::infinity();
    }
    return std::abs(image.value() - parent.value()) / (1.0 + parent.abs());
}

} // namespace

OrbitTree backward_orbit(const RationalFunction& d, std::vector<ComplexPoint> seeds, int depth,
                         double dedup_radius, std::int64_t point_budget, bool high_precision) {
    OrbitTree tree;
    tree.dedup_radius = dedup_radius;
    tree.depth = depth;
    PointDedup dedup(dedup_radius);

    std::sort(seeds.begin(), seeds.end(), point_less);
    std::vector<int> frontier;
    for (const auto& s : seeds) {
        if (!dedup.insert(s)) continue;
        tree.points.push_back({s, 0, -1});
        frontier.push_back(static_cast<int>(tree.points.size()) - 1);
        if (s.im != 0.0 && !s.is_real()) ++tree.nonreal_count;
    }

    const double snap_tol = 1e-9;
    for (int level = 1; level <= depth; ++level) {
        std::vector<std::pair<ComplexPoint, int>> candidates;
        for (int idx : frontier) {
            const ComplexPoint parent = tree.points[idx].z;
            auto pre = preimages(d, parent, high_precision);
            // Suspiciously near-real points get one escalated retry before
            // being reported as realness violations.
            bool suspicious = false;
            for (const auto& p : pre) {
                if (p.is_inf) continue;
                double im = std::abs(p.im);
                if (im > snap_tol * (1.0 + std::abs(p.re)) && im < 1e-4) suspicious = true;
            }
            if (suspicious) pre = preimages(d, parent, /*high_precision=*/true);
            for (const auto& p : pre) candidates.emplace_back(p, idx);
        }
        std::sort(candidates.begin(), candidates.end(),
                  [](const auto& a, const auto& b) { return point_less(a.first, b.first); });
        std::vector<int> next;
        for (const auto& [p, parent_idx] : candidates) {
            if (static_cast<std::int64_t>(tree.points.size()) >= point_budget) {
                tree.truncated = true;
                return tree;
            }
            if (!dedup.insert(p)) continue;
            tree.points.push_back({p, level, parent_idx});
            next.push_back(static_cast<int>(tree.points.size()) - 1);
            if (!p.is_inf && p.im != 0.0) ++tree.nonreal_count;
            double res = backstep_residual(d, p, tree.points[parent_idx].z);
            tree.max_residual = std::max(tree.max_residual, res);
        }
        frontier = std::move(next);
    }
    return tree;
}

// Largest gap between consecutive points inside [-window,window]\(-1,1).
double largest_interior_gap(const std::vector<double>& sorted_points, double window) {
    double gap = 0.0;
    auto scan = [&](double lo, double hi) {
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (double p : sorted_points) {
            if (p < lo || p > hi) continue;
            if (!std::isnan(prev)) gap = std::max(gap, p - prev);
            prev = p;
        }
    };
    scan(-window, -1.0);
    scan(1.0, window);
    return gap;
}

namespace {

GapStats gap_stats(const OrbitTree& tree, double window) {
    GapStats stats;
    stats.window = window;
    std::vector<std::vector<double>> by_depth(tree.depth + 1);
    for (const auto& p : tree.points)
        if (!p.z.is_inf && p.z.im == 0.0) by_depth[p.depth].push_back(p.z.re);
    std::vector<double> acc;
    for (int k = 0; k <= tree.depth; ++k) {
        acc.insert(acc.end(), by_depth[k].begin(), by_depth[k].end());
        std::sort(acc.begin(), acc.end());
        stats.gap_by_depth.push_back(largest_interior_gap(acc, window));
    }
    return stats;
}

} // namespace

JuliaApproximation approximate_julia(const TransferSet& t, int depth, double dedup_radius,
                                     std::int64_t point_budget, double window,
                                     bool high_precision) {
    auto fp = check_fixed_points(t);
    if (!fp.ok)
        throw NumericError("fixed-point certificate failed; refusing to iterate d: " + fp.details);
    OrbitTree tree = backward_orbit(t.d, {ComplexPoint(1.0, 0.0)}, depth, dedup_radius,
                                    point_budget, high_precision);
    JuliaApproximation j;
    j.depth = depth;
    j.truncated = tree.truncated;
    j.realness_violations = tree.nonreal_count;
    j.has_infinity = tree.contains_infinity();
    j.points = tree.finite_real_points();
    j.gaps = gap_stats(tree, window);
    return j;
}

OrbitTree exceptional_set(const TransferSet& t, int depth, double dedup_radius,
                          std::int64_t point_budget, bool high_precision) {
    return backward_orbit(t.d, t.exceptional_seeds(), depth, dedup_radius, point_budget,
                          high_precision);
}

std::string to_string(JuliaClass c) {
    switch (c) {
        case JuliaClass::interval_like: return "interval-like";
        case JuliaClass::cantor_like: return "cantor-like";
        default: return "unresolved";
    }
}

JuliaClassification classify_julia(const JuliaApproximation& j, int min_depth) {
    JuliaClassification out;
    const auto& gaps = j.gaps.gap_by_depth;
    if (j.depth < min_depth || static_cast<int>(gaps.size()) < 4) {
        out.evidence = "heuristic verdict withheld: depth " + std::to_string(j.depth) +
                       " below minimum " + std::to_string(min_depth);
        return out;
    }
    double g0 = gaps[gaps.size() - 4];
    double g1 = gaps[gaps.size() - 3];
    double g2 = gaps[gaps.size() - 2];
    double g3 = gaps[gaps.size() - 1];
    std::string numbers = "last gaps: " + std::to_string(g1) + ", " + std::to_string(g2) +
                          ", " + std::to_string(g3);
    double resolution = 100.0 * 1e-9;
    if (g3 <= resolution) {
        out.verdict = JuliaClass::interval_like;
        out.evidence = "heuristic: final gap at dedup resolution; " + numbers;
        return out;
    }
    bool shrinking = g3 <= 0.8 * g2 && g2 <= 0.8 * g1 && g1 <= 0.8 * g0;
    bool persistent = g3 >= 0.95 * g0;
    if (shrinking) {
        out.verdict = JuliaClass::interval_like;
        out.evidence = "heuristic: gap shrinks across the last 3 depth increments; " + numbers;
    } else if (persistent) {
        out.verdict = JuliaClass::cantor_like;
        out.evidence = "heuristic: a gap persists across the last 3 depth increments; " + numbers;
    } else {
        out.evidence = "heuristic: gap sequence neither clearly shrinking nor persistent; " +
                       numbers;
    }
    return out;
}

namespace {

double laplacian_image(double z) { return 1.0 - 1.0 / z; }

std::vector<double> laplacian_points(const std::vector<double>& zs, bool with_infinity) {
    std::vector<double> out;
    out.reserve(zs.size() + 1);
    for (double z : zs)
        if (z != 0.0) out.push_back(laplacian_image(z));
    if (with_infinity) out.push_back(1.0);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

SpectrumReport spectrum_bounds(const TransferSet& t, int depth, double dedup_radius,
                               std::int64_t point_budget, double window, bool high_precision) {
    SpectrumReport report;
    report.depth = depth;
    report.inner = approximate_julia(t, depth, dedup_radius, point_budget, window, high_precision);
    OrbitTree d_tree = exceptional_set(t, depth, dedup_radius, point_budget, high_precision);
    report.outer_extra = d_tree.finite_real_points();
    report.outer_has_infinity = d_tree.contains_infinity();

    report.reciprocal_inner = report.inner.points;
    report.reciprocal_outer = report.inner.points;
    report.reciprocal_outer.insert(report.reciprocal_outer.end(), report.outer_extra.begin(),
                                   report.outer_extra.end());
    std::sort(report.reciprocal_outer.begin(), report.reciprocal_outer.end());

    report.laplacian_inner = laplacian_points(report.reciprocal_inner, report.inner.has_infinity);
    report.laplacian_outer = laplacian_points(
        report.reciprocal_outer, report.inner.has_infinity || report.outer_has_infinity);

    report.window = window;
    report.inner_gap = largest_interior_gap(report.reciprocal_inner, window);
    report.outer_gap = largest_interior_gap(report.reciprocal_outer, window);
    report.classification = classify_julia(report.inner);
    if (report.classification.verdict == JuliaClass::cantor_like)
        report.annotation =
            "cantor-like evidence: in the Cantor case the reciprocal spectrum "
            "coincides with the set of singularities of all Green functions";
    return report;
}

} // namespace selfsim
