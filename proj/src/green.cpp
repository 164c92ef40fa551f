#include "selfsim/green.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "selfsim/dynamics.hpp"
#include "selfsim/oracle.hpp"
#include "selfsim/errors.hpp"

namespace selfsim {

VertexRef VertexRef::parse(const std::string& text) {
    auto first = text.find(':');
    auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw SpecError("vertex ref must be level:address:local, got '" + text + "'");
    VertexRef ref;
    try {
        ref.level = std::stoi(text.substr(0, first));
    } catch (...) {
        throw SpecError("vertex ref level must be an integer: '" + text + "'");
    }
    std::string addr = text.substr(first + 1, second - first - 1);
    ref.local = text.substr(second + 1);
    if (ref.local.empty()) throw SpecError("vertex ref has empty local name: '" + text + "'");
    if (!addr.empty() && addr != "e" && addr != "eps" && addr != "\xce\xb5") {
        std::istringstream is(addr);
        std::string digit;
        while (std::getline(is, digit, '.')) {
            try {
                ref.address.push_back(std::stoi(digit));
            } catch (...) {
                throw SpecError("vertex ref address digit '" + digit + "' is not an integer");
            }
        }
    }
    return ref;
}

std::string VertexRef::to_string() const {
    std::ostringstream os;
    os << level << ":";
    if (address.empty()) {
        os << "e";
    } else {
        for (size_t i = 0; i < address.size(); ++i) os << (i ? "." : "") << address[i];
    }
    os << ":" << local;
    return os.str();
}

GreenEvaluator::GreenEvaluator(const CellSpec& spec, TransferSet transfer)
    : spec_(spec), transfer_(std::move(transfer)), hier_(spec) {
    if (spec_.origin_vertex_id < 0 || !spec_.star_multiplicity)
        throw SpecError("Green evaluation requires origin_vertex mode in the cell spec");
}

GreenEvaluator::VKey GreenEvaluator::canonical(VKey key) const {
    // Collapse boundary locals upward through the substitution maps.
    while (!key.digits.empty() && spec_.is_boundary(key.local)) {
        int pos = spec_.boundary_position(key.local);
        key.local = spec_.substitution_ids[key.digits.back()][pos];
        key.digits.pop_back();
    }
    if (key.digits.empty() && key.local == spec_.origin_vertex_id) key.copy = 0;
    return key;
}

int GreenEvaluator::x_degree_key(VKey key) const {
    // Interior cell vertices keep their cell degree at every reduction
    // level; boundary-local keys lift through the origin nesting until the
    // local vertex leaves the boundary.
    for (int guard = 0; guard < 64; ++guard) {
        if (key.digits.empty() && key.local == spec_.origin_vertex_id)
            return *spec_.star_multiplicity * (spec_.theta - 1);
        if (!spec_.is_boundary(key.local)) return transfer_.cell_degrees[key.local];
        key = lift(key);
    }
    throw SpecError("substitution maps keep a non-origin boundary vertex on the boundary "
                    "at every level");
}

int GreenEvaluator::x_degree(const VertexRef& ref) const {
    int level = 0;
    return x_degree_key(ref_to_key(ref, &level));
}

GreenEvaluator::VKey GreenEvaluator::lift(VKey key) const {
    if (key.digits.empty() && spec_.is_boundary(key.local)) {
        // theta-C_L vertex: one nesting step through the origin clique.
        int pos = spec_.boundary_position(key.local);
        key.local = spec_.substitution_ids[spec_.origin_clique][pos];
        return canonical(key);
    }
    key.digits.insert(key.digits.begin(), spec_.origin_clique);
    return key;
}

GreenEvaluator::VKey GreenEvaluator::ref_to_key(const VertexRef& ref, int* level) const {
    VKey key;
    std::string local = ref.local;
    if (spec_.vertex_index(local) < 0 && local == "o") {
        if (spec_.origin_vertex_id < 0) throw SpecError("no origin vertex for alias 'o'");
        local = *spec_.origin_vertex;
    }
    key.local = spec_.vertex_index(local);
    if (key.local < 0) throw SpecError("unknown vertex name '" + ref.local + "'");
    if (!ref.address.empty()) {
        key.copy = ref.address.front();
        key.digits.assign(ref.address.begin() + 1, ref.address.end());
    }
    if (key.copy < 0 || key.copy >= *spec_.star_multiplicity)
        throw SpecError("vertex ref copy index out of range");
    for (int d : key.digits)
        if (d < 0 || d >= spec_.mu()) throw SpecError("vertex ref clique digit out of range");
    key = canonical(key);
    *level = std::max({ref.level, static_cast<int>(key.digits.size()) + 1, 1});
    return key;
}

bool GreenEvaluator::innermost_interior(const VKey& key, int level) const {
    if (spec_.is_boundary(key.local)) return false;  // only possible with empty digits
    return static_cast<int>(key.digits.size()) == level - 1;
}

VertexRef GreenEvaluator::key_to_ref(const VKey& key, int level) const {
    VertexRef ref;
    ref.level = level;
    ref.address.push_back(key.copy);
    ref.address.insert(ref.address.end(), key.digits.begin(), key.digits.end());
    ref.local = spec_.vertices[key.local];
    return ref;
}

OriginApproximation& GreenEvaluator::approximation(int level) {
    auto it = approx_.find(level);
    if (it == approx_.end()) {
        it = approx_
                 .emplace(level, std::make_unique<OriginApproximation>(
                                     hier_, level, *spec_.star_multiplicity))
                 .first;
    }
    return *it->second;
}

int GreenEvaluator::resolve_in(int level, const VKey& key, int key_level) {
    VKey k = key;
    for (int l = key_level; l < level; ++l) k = lift(k);
    int cell_id = hier_.resolve(level, k.digits, k.local);
    return approximation(level).id_of(k.copy, cell_id);
}

std::complex<double> GreenEvaluator::eval_factor(const RationalFunction& r,
                                                 std::complex<double> z,
                                                 const char* what) const {
    ComplexPoint v;
    try {
        v = r.eval_point(ComplexPoint(z));
    } catch (const EvalIndeterminate&) {
        throw PoleHit(std::string(what) +
                      " is indeterminate along the orbit: candidate point of the discrete "
                      "exceptional set");
    }
    if (v.is_inf)
        throw PoleHit(std::string(what) +
                      " has a pole along the orbit: candidate point of the discrete "
                      "exceptional set");
    return v.value();
}

std::vector<Rat>& GreenEvaluator::cached_series(int pair_level, const VKey& x, const VKey& y,
                                                int order, int* exact_level) {
    // Grow the resolution level until walks of length <= order from x stay
    // away from the approximation boundary.
    int level = std::max({pair_level,
                          static_cast<int>(x.digits.size()) + 1,
                          static_cast<int>(y.digits.size()) + 1});
    int xid = 0, yid = 0;
    for (;; ++level) {
        if (level > 40) throw ResourceCap("origin approximation level cap during series growth");
        OriginApproximation& approx = approximation(level);
        xid = resolve_in(level, x, pair_level);
        yid = resolve_in(level, y, pair_level);
        auto dist = approx.graph().distances_from_set(approx.outer_boundary());
        if (dist[xid] > order) break;
    }
    *exact_level = level;
    auto cache_key = std::make_tuple(level, xid, yid);
    auto it = series_cache_.find(cache_key);
    if (it == series_cache_.end() ||
        static_cast<int>(it->second.size()) < order + 1) {
        series_cache_[cache_key] = walk_series(approximation(level).graph(), xid, yid, order);
        it = series_cache_.find(cache_key);
    }
    return it->second;
}

GreenValue GreenEvaluator::evaluate(const VertexRef& xref, const VertexRef& yref, ComplexPoint z,
                                    const GreenOptions& opts) {
    int x_level = 0, y_level = 0;
    VKey x = ref_to_key(xref, &x_level);
    VKey y = ref_to_key(yref, &y_level);

    ForwardOrbit orbit = forward_orbit(transfer_.d, z, opts.max_forward_iterations,
                                       opts.base_radius);
    if (!orbit.converges)
        throw NotInBasin("forward orbit of " + z.to_string() + " undecided after " +
                         std::to_string(opts.max_forward_iterations) +
                         " iterations; the point may lie outside the basin of 0");
    const int n = orbit.iterations;
    for (const auto& p : orbit.orbit)
        if (p.is_inf)
            throw PoleHit("forward orbit passes through infinity: candidate point of the "
                          "discrete exceptional set");

    // Work at a level high enough that n decomposition steps stay valid.
    const int base_level = std::max(x_level, y_level) + 1;
    const int start_level = base_level + n;
    for (int l = x_level; l < start_level; ++l) x = lift(x);
    for (int l = y_level; l < start_level; ++l) y = lift(y);

    std::map<std::pair<VKey, VKey>, std::complex<double>> terms;
    terms[{x, y}] = 1.0;
    std::complex<double> additive = 0.0;
    double coef_magnitude_sum = 1.0;

    for (int step = 0; step < n; ++step) {
        int level = start_level - step;
        std::complex<double> zj = orbit.orbit[step].value();
        std::complex<double> fz = eval_factor(transfer_.f, zj, "return function f");
        std::map<std::pair<VKey, VKey>, std::complex<double>> next;
        for (const auto& [pair, coef] : terms) {
            const auto& [tx, ty] = pair;
            bool x_in = innermost_interior(tx, level);
            bool y_in = innermost_interior(ty, level);

            // Kronecker term when both ends sit in the same cell.
            if (x_in && y_in && tx.copy == ty.copy && tx.digits == ty.digits) {
                additive += coef * eval_factor(transfer_.h_of(tx.local, ty.local), zj,
                                               "inner transition function h");
            }

            std::vector<std::pair<VKey, std::complex<double>>> xs, ys;
            if (x_in) {
                for (int j = 0; j < spec_.theta; ++j) {
                    VKey b = tx;
                    b.local = spec_.boundary_ids[j];
                    std::complex<double> hval = eval_factor(
                        transfer_.h_of(tx.local, spec_.boundary_ids[j]), zj,
                        "inner transition function h");
                    xs.emplace_back(canonical(b), hval);
                }
            } else {
                xs.emplace_back(tx, 1.0);
            }
            if (y_in) {
                for (int j = 0; j < spec_.theta; ++j) {
                    VKey b = ty;
                    b.local = spec_.boundary_ids[j];
                    VKey w = canonical(b);
                    // Last-exit factor out of w, weighted with the degree of
                    // w in the infinite graph.
                    std::complex<double> htval = eval_factor(
                        transfer_.h_of(ty.local, spec_.boundary_ids[j]), zj,
                        "inner transition function h-tilde");
                    htval *= static_cast<double>(transfer_.cell_degrees[ty.local]) /
                             static_cast<double>(x_degree_key(w));
                    ys.emplace_back(std::move(w), htval);
                }
            } else {
                ys.emplace_back(ty, 1.0);
            }
            for (const auto& [xv, xc] : xs)
                for (const auto& [yv, yc] : ys) next[{xv, yv}] += coef * xc * yc * fz;
        }
        terms = std::move(next);
        if (terms.size() > 4096)
            throw NumericError("decomposition term table exceeded its cap");
        coef_magnitude_sum = 0.0;
        for (const auto& [pair, coef] : terms) coef_magnitude_sum += std::abs(coef);
    }

    // Base evaluation at w = d^n(z), |w| <= base_radius, by truncated series
    // with the geometric tail bound (coefficients lie in [0,1]).
    std::complex<double> w = orbit.orbit[n].value();
    double aw = std::abs(w);
    int order = opts.series_cap;
    if (aw > 0) {
        double needed = std::log(opts.target_accuracy * (1.0 - aw) / 4.0) / std::log(aw);
        order = std::min(opts.series_cap, std::max(8, static_cast<int>(std::ceil(needed))));
    }
    double tail = std::pow(aw, order + 1) / (1.0 - aw);
    if (tail > opts.target_accuracy)
        throw NumericError("requested accuracy unreachable at the series cap");

    std::complex<double> total = additive;
    double error = 0.0;
    const int base_level_now = start_level - n;
    for (const auto& [pair, coef] : terms) {
        int exact_level = 0;
        const auto& series = cached_series(base_level_now, pair.first, pair.second, order,
                                           &exact_level);
        std::complex<double> acc = 0.0;
        for (int k = order; k >= 0; --k) acc = acc * w + to_complex(series[k]);
        total += coef * acc;
        error += std::abs(coef) * tail;
    }
    // Roundoff allowance for the finitely many rational factor evaluations.
    error += 1e-13 * (std::abs(total) + coef_magnitude_sum + 1.0);

    GreenValue out;
    out.value = total;
    out.error_bound = error;
    out.continuation_depth = n;
    return out;
}

std::vector<Rat> GreenEvaluator::base_series(const VertexRef& xref, const VertexRef& yref,
                                             int order) {
    int x_level = 0, y_level = 0;
    VKey x = ref_to_key(xref, &x_level);
    VKey y = ref_to_key(yref, &y_level);
    int common = std::max(x_level, y_level);
    for (int l = x_level; l < common; ++l) x = lift(x);
    for (int l = y_level; l < common; ++l) y = lift(y);
    int exact_level = 0;
    auto& series = cached_series(common, x, y, order, &exact_level);
    return {series.begin(), series.begin() + order + 1};
}

GreenEvaluator::Residual GreenEvaluator::functional_equation_residual(const VertexRef& vref,
                                                                      const VertexRef& wref,
                                                                      ComplexPoint z,
                                                                      const GreenOptions& opts) {
    // phi shifts the reference one level down; the ref encoding makes this
    // a pure level decrement.
    GreenValue lhs = evaluate(vref, wref, z, opts);
    VertexRef pv = vref, pw = wref;
    pv.level = std::max(0, pv.level - 1);
    pw.level = std::max(0, pw.level - 1);
    ComplexPoint dz = transfer_.d.eval_point(z);
    GreenValue rhs = evaluate(pv, pw, dz, opts);
    std::complex<double> fz = eval_factor(transfer_.f, z.value(), "return function f");
    Residual r;
    r.residual = std::abs(lhs.value - rhs.value * fz);
    r.combined_bound = lhs.error_bound + rhs.error_bound * std::abs(fz) + 1e-12;
    return r;
}

SingularityProbe GreenEvaluator::singularity_probe(const VertexRef& xref, const VertexRef& yref,
                                                   int k_max, int series_terms) {
    SingularityProbe probe;
    GreenOptions opts;
    for (int k = 1; k <= k_max; ++k) {
        double r = 1.0 - std::pow(2.0, -k);
        probe.radii.push_back(r);
        probe.values.push_back(evaluate(xref, yref, ComplexPoint(r, 0.0), opts).value.real());
    }
    probe.monotone_increasing = true;
    for (size_t i = 1; i < probe.values.size(); ++i)
        if (probe.values[i] <= probe.values[i - 1]) probe.monotone_increasing = false;

    // Log-log slope of G against 1-r; consecutive estimates and their drift.
    std::vector<double> slopes;
    for (size_t i = 1; i < probe.values.size(); ++i) {
        double num = std::log(probe.values[i]) - std::log(probe.values[i - 1]);
        slopes.push_back(num / -std::log(2.0));
    }
    if (!slopes.empty()) {
        probe.fitted_exponent = slopes.back();
        double nearest = std::round(probe.fitted_exponent);
        probe.polar_fit_rejected = std::abs(probe.fitted_exponent - nearest) > 0.05;
    }

    // First-return series at the origin: exact coefficients, summed.
    int x_level = 0;
    VKey x = ref_to_key(xref, &x_level);
    int level = 2;
    for (;; ++level) {
        if (level > 40) throw ResourceCap("approximation growth cap in singularity probe");
        OriginApproximation& approx = approximation(level);
        int xid = resolve_in(level, x, x_level);
        auto dist = approx.graph().distances_from_set(approx.outer_boundary());
        if (dist[xid] > series_terms) break;
        if (static_cast<std::int64_t>(approx.graph().vertex_count()) > 5'000'000) {
            series_terms = dist[xid] - 1;  // settle for what the budget allows
            break;
        }
    }
    OriginApproximation& approx = approximation(level);
    int xid = resolve_in(level, x, x_level);
    const FiniteGraph& g = approx.graph();
    std::vector<double> cur(g.vertex_count(), 0.0), next(g.vertex_count(), 0.0);
    // One step away from x, then absorb at x.
    for (int u : g.neighbors(xid)) cur[u] = 1.0 / g.degree(xid);
    double total = 0.0;
    for (int step = 2; step <= series_terms; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < g.vertex_count(); ++i) {
            if (cur[i] == 0.0 || i == xid) continue;
            double share = cur[i] / g.degree(i);
            for (int j : g.neighbors(i)) next[j] += share;
        }
        total += next[xid];
        next[xid] = 0.0;
        std::swap(cur, next);
    }
    probe.first_passage_partial = total;
    probe.first_passage_terms = series_terms;
    return probe;
}

ShellCheckReport shell_conductance_check(const CellSpec& spec, int n_max,
                                         std::int64_t vertex_cap) {
    CellHierarchy hier(spec, vertex_cap);
    ShellReport shells = shell_conductance(hier, n_max);
    ShellCheckReport report;
    report.crossing_edges = shells.crossing_edges;
    report.max_crossing = shells.max_crossing;
    report.one_dimensional = shells.one_dimensional;
    // Bounded: the crossing counts stop growing (self-similarity makes them
    // eventually constant); with only finitely many levels computable we
    // report whether the tail has stabilized.
    report.bounded = shells.crossing_edges.size() >= 2;
    if (report.bounded) {
        auto tail = shells.crossing_edges.back();
        auto prev = shells.crossing_edges[shells.crossing_edges.size() - 2];
        report.bounded = tail <= std::max<std::int64_t>(prev, 1) || tail == prev;
    }
    return report;
}

} // namespace selfsim
