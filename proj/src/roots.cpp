#include "selfsim/roots.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "selfsim/errors.hpp"

namespace selfsim {

namespace {

using HighComplex = boost::multiprecision::cpp_complex_50;
using HighFloat = boost::multiprecision::cpp_bin_float_50;

template <typename C>
double to_double_abs(const C& z) {
    if constexpr (std::is_same_v<C, std::complex<double>>) {
        return std::abs(z);
    } else {
        return abs(z).template convert_to<double>();
    }
}

template <typename C>
C horner(const std::vector<C>& coeffs, const C& x) {
    C acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

template <typename C>
double majorant(const std::vector<C>& coeffs, double ax) {
    double m = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) m = m * ax + to_double_abs(*it);
    return m;
}

template <typename C>
struct FloatOf {
    using type = double;
};
template <>
struct FloatOf<HighComplex> {
    using type = HighFloat;
};

// Aberth-Ehrlich simultaneous iteration. Coefficients ascending, leading
// coefficient nonzero; returns deg(p) approximations to the roots.
template <typename C>
std::vector<C> aberth(const std::vector<C>& coeffs, int max_iter, double stop_eps,
                      const std::vector<C>* warm_start = nullptr) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<C> deriv(n);
    for (int k = 1; k <= n; ++k) deriv[k - 1] = coeffs[k] * C(k);

    std::vector<C> z(n);
    if (warm_start && static_cast<int>(warm_start->size()) == n) {
        z = *warm_start;
    } else {
        // Cauchy-bound circle with an irrational angle offset so conjugate
        // symmetry cannot trap the iteration on the real axis.
        double amax = 0.0;
        double alead = to_double_abs(coeffs[n]);
        for (int k = 0; k < n; ++k) amax = std::max(amax, to_double_abs(coeffs[k]));
        double radius = 1.0 + amax / alead;
        for (int i = 0; i < n; ++i) {
            double angle = 2.0 * M_PI * i / n + 0.7;
            z[i] = C(radius * 0.7 * std::cos(angle)) + C(radius * 0.7 * std::sin(angle)) * C(0, 1);
        }
    }

    for (int iter = 0; iter < max_iter; ++iter) {
        bool all_small = true;
        for (int i = 0; i < n; ++i) {
            C pv = horner(coeffs, z[i]);
            double scale = majorant(coeffs, to_double_abs(z[i]));
            if (to_double_abs(pv) > stop_eps * scale) all_small = false;
            C dv = horner(deriv, z[i]);
            if (to_double_abs(dv) == 0.0) {
                z[i] += C(1e-6 * (1.0 + to_double_abs(z[i])));
                all_small = false;
                continue;
            }
            C ratio = pv / dv;
            C sum(0);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                C diff = z[i] - z[j];
                if (to_double_abs(diff) == 0.0) {
                    diff = C(1e-12 * (1.0 + to_double_abs(z[i])));
                }
                sum += C(1) / diff;
            }
            C denom = C(1) - ratio * sum;
            if (to_double_abs(denom) == 0.0) denom = C(1e-30);
            z[i] -= ratio / denom;
        }
        if (all_small) break;
    }
    return z;
}

std::vector<std::complex<double>> downgrade(const std::vector<HighComplex>& zs) {
    std::vector<std::complex<double>> out;
    out.reserve(zs.size());
    for (const auto& z : zs)
        out.emplace_back(z.real().convert_to<double>(), z.imag().convert_to<double>());
    return out;
}

std::vector<HighComplex> upgrade(const std::vector<std::complex<double>>& zs) {
    std::vector<HighComplex> out;
    out.reserve(zs.size());
    for (const auto& z : zs) out.emplace_back(z.real(), z.imag());
    return out;
}

HighComplex to_high(const Rat& q) {
    return HighComplex(HighFloat(q.get_num().get_str()) / HighFloat(q.get_den().get_str()));
}

bool residual_ok(const Polynomial& p, const std::vector<std::complex<double>>& roots,
                 double tol) {
    // Residuals are checked against the exact polynomial at high precision.
    double cmax = 0.0;
    std::vector<HighComplex> hc;
    hc.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) {
        hc.push_back(to_high(c));
        cmax = std::max(cmax, std::abs(c.get_d()));
    }
    for (const auto& r : roots) {
        HighComplex v = horner(hc, HighComplex(r.real(), r.imag()));
        double bound = tol * cmax * std::pow(std::max(1.0, std::abs(r)), p.degree());
        if (to_double_abs(v) > bound) return false;
    }
    return true;
}

void snap_real(std::vector<std::complex<double>>& roots, double snap_tol, int* snapped) {
    for (auto& r : roots) {
        if (r.imag() != 0.0 && std::abs(r.imag()) < snap_tol * (1.0 + std::abs(r.real()))) {
            r = {r.real(), 0.0};
            if (snapped) ++(*snapped);
        }
    }
}

// A few high-precision Newton steps per root; squarefree input keeps the
// roots simple, so this removes the forward error that a residual test
// alone cannot see on ill-conditioned polynomials.
void newton_polish(const std::vector<HighComplex>& coeffs,
                   std::vector<std::complex<double>>& roots) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    std::vector<HighComplex> deriv(n);
    for (int k = 1; k <= n; ++k) deriv[k - 1] = coeffs[k] * HighComplex(k);
    for (auto& r : roots) {
        HighComplex z(r.real(), r.imag());
        for (int it = 0; it < 4; ++it) {
            HighComplex pv = horner(coeffs, z);
            HighComplex dv = horner(deriv, z);
            if (to_double_abs(dv) == 0.0) break;
            z -= pv / dv;
        }
        r = {z.real().convert_to<double>(), z.imag().convert_to<double>()};
    }
}

std::vector<std::complex<double>> solve_monic_exact(const Polynomial& p, const RootOptions& opts) {
    std::vector<std::complex<double>> dc = p.scaled_double_coeffs();
    std::vector<std::complex<double>> roots = aberth(dc, opts.max_iterations, 1e-14);
    std::vector<HighComplex> hc;
    hc.reserve(p.coeffs().size());
    for (const auto& c : p.coeffs()) hc.push_back(to_high(c));
    if (!residual_ok(p, roots, opts.residual_tol)) {
        if (!opts.allow_escalation)
            throw NumericError("root residuals exceed tolerance at double precision");
        auto hz = aberth(hc, opts.max_iterations, 1e-40);
        hz = aberth(hc, opts.max_iterations, 1e-40, &hz);
        roots = downgrade(hz);
        if (!residual_ok(p, roots, opts.residual_tol))
            throw NumericError("root finder did not converge at escalated precision");
    }
    newton_polish(hc, roots);
    return roots;
}

} // namespace

std::vector<Root> find_roots(const Polynomial& p, const RootOptions& opts) {
    if (p.is_zero()) throw std::domain_error("find_roots: zero polynomial");
    std::vector<Root> out;
    if (p.degree() == 0) return out;

    int val = p.valuation();
    if (val > 0) {
        Root zero_root;
        zero_root.location = {0.0, 0.0};
        zero_root.multiplicity = val;
        out.push_back(zero_root);
    }
    std::vector<Rat> shifted(p.coeffs().begin() + val, p.coeffs().end());
    Polynomial q = Polynomial(std::move(shifted));
    if (q.degree() == 0) return out;

    auto factors = squarefree_decomposition(q);
    for (size_t k = 0; k < factors.size(); ++k) {
        const Polynomial& s = factors[k];
        if (s.degree() <= 0) continue;
        std::vector<std::complex<double>> roots;
        if (s.degree() == 1) {
            Rat r = -s.coeff(0) / s.coeff(1);
            roots.emplace_back(r.get_d(), 0.0);
        } else {
            roots = solve_monic_exact(s, opts);
        }
        int snapped = 0;
        snap_real(roots, opts.snap_tol, &snapped);
        std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        for (const auto& r : roots) {
            Root root;
            root.location = ComplexPoint(r);
            root.multiplicity = static_cast<int>(k) + 1;
            root.snapped_to_real = (r.imag() == 0.0) && snapped > 0;
            out.push_back(root);
        }
    }
    std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
        if (a.location.re != b.location.re) return a.location.re < b.location.re;
        return a.location.im < b.location.im;
    });
    return out;
}

std::vector<std::complex<double>> find_roots_numeric(std::vector<std::complex<double>> coeffs,
                                                     const RootOptions& opts) {
    double cmax = 0.0;
    for (const auto& c : coeffs) cmax = std::max(cmax, std::abs(c));
    if (cmax == 0.0) throw std::domain_error("find_roots_numeric: zero polynomial");
    // Drop leading coefficients that are roundoff relative to the rest.
    while (coeffs.size() > 1 && std::abs(coeffs.back()) <= 1e-12 * cmax) coeffs.pop_back();
    if (coeffs.size() <= 1) return {};
    if (coeffs.size() == 2) return {-coeffs[0] / coeffs[1]};

    auto roots = aberth(coeffs, opts.max_iterations, 1e-13);
    // Residual check in the numeric setting; escalate in place if needed.
    bool ok = true;
    const int deg = static_cast<int>(coeffs.size()) - 1;
    for (const auto& r : roots) {
        double bound = opts.residual_tol * cmax * std::pow(std::max(1.0, std::abs(r)), deg);
        if (std::abs(horner(coeffs, r)) > bound) {
            ok = false;
            break;
        }
    }
    if (!ok && opts.allow_escalation) {
        auto hcoeffs = upgrade(coeffs);
        auto hz = aberth(hcoeffs, opts.max_iterations, 1e-35);
        roots = downgrade(hz);
    }
    int snapped = 0;
    snap_real(roots, opts.snap_tol, &snapped);
    std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

} // namespace selfsim
