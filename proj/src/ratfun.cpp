#include "selfsim/ratfun.hpp"

#include <cmath>
#include <sstream>

#include "selfsim/errors.hpp"

namespace selfsim {

std::string ComplexPoint::to_string() const {
    if (is_inf) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << re;
    if (im != 0.0) os << (im > 0 ? "+" : "") << im << "i";
    return os.str();
}

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
    normalize();
}

RationalFunction RationalFunction::infinity() {
    RationalFunction r;
    r.num_ = Polynomial::one();
    r.den_ = Polynomial::one();
    r.inf_ = true;
    return r;
}

void RationalFunction::normalize() {
    if (num_.is_zero()) {
        den_ = Polynomial::one();
        return;
    }
    Polynomial g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = Polynomial::divrem(num_, g).first;
        den_ = Polynomial::divrem(den_, g).first;
    }
    Rat inv = 1 / den_.leading();
    if (inv != 1) {
        num_ = num_ * inv;
        den_ = den_ * inv;
    }
}

int RationalFunction::map_degree() const {
    return std::max(num_.degree(), den_.degree());
}

namespace {
void require_finite(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_infinity() || b.is_infinity())
        throw std::domain_error("arithmetic on the constant-infinity rational function");
}
} // namespace

RationalFunction RationalFunction::operator-() const {
    if (inf_) throw std::domain_error("arithmetic on the constant-infinity rational function");
    RationalFunction r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RationalFunction RationalFunction::operator+(const RationalFunction& rhs) const {
    require_finite(*this, rhs);
    return {num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_};
}

RationalFunction RationalFunction::operator-(const RationalFunction& rhs) const {
    require_finite(*this, rhs);
    return {num_ * rhs.den_ - rhs.num_ * den_, den_ * rhs.den_};
}

RationalFunction RationalFunction::operator*(const RationalFunction& rhs) const {
    require_finite(*this, rhs);
    return {num_ * rhs.num_, den_ * rhs.den_};
}

RationalFunction RationalFunction::operator/(const RationalFunction& rhs) const {
    require_finite(*this, rhs);
    if (rhs.is_zero()) throw std::domain_error("division by the zero rational function");
    return {num_ * rhs.den_, den_ * rhs.num_};
}

ComplexPoint RationalFunction::eval_point(const ComplexPoint& z) const {
    if (inf_) return ComplexPoint::infinity();
    if (is_zero()) return {0.0, 0.0};
    if (z.is_inf) {
        int dn = num_.degree(), dd = den_.degree();
        if (dn > dd) return ComplexPoint::infinity();
        if (dn < dd) return {0.0, 0.0};
        Rat lead = num_.leading() / den_.leading();
        return {lead.get_d(), 0.0};
    }
    auto nv = num_.eval_with_bound(z.value());
    auto dv = den_.eval_with_bound(z.value());
    // Roundoff-aware zero test: a Horner result smaller than its accumulated
    // rounding bound is indistinguishable from zero at this precision.
    double eps = std::numeric_limits<double>::epsilon();
    double ntol = 4.0 * (num_.degree() + 1) * eps * nv.majorant;
    double dtol = 4.0 * (den_.degree() + 1) * eps * dv.majorant;
    bool nzero = std::abs(nv.value) <= ntol;
    bool dzero = std::abs(dv.value) <= dtol;
    if (dzero) {
        if (nzero)
            throw EvalIndeterminate("numerator and denominator both vanish at " + z.to_string() +
                                    " within working precision");
        return ComplexPoint::infinity();
    }
    return ComplexPoint(nv.value / dv.value);
}

std::optional<Rat> RationalFunction::eval_exact(const Rat& x) const {
    if (inf_) return std::nullopt;
    Rat dv = den_.eval_rat(x);
    if (dv == 0) return std::nullopt;
    return num_.eval_rat(x) / dv;
}

RationalFunction RationalFunction::derivative() const {
    if (inf_) throw std::domain_error("derivative of the constant-infinity rational function");
    return {num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_};
}

std::vector<Rat> RationalFunction::series_coefficients(int count) const {
    if (inf_) throw std::domain_error("series of the constant-infinity rational function");
    if (den_.coeff(0) == 0)
        throw std::domain_error("series_coefficients: denominator vanishes at 0");
    std::vector<Rat> a(count, Rat(0));
    Rat d0 = den_.coeff(0);
    for (int k = 0; k < count; ++k) {
        Rat s = num_.coeff(k);
        int jmax = std::min(k, den_.degree());
        for (int j = 1; j <= jmax; ++j) s -= den_.coeff(j) * a[k - j];
        a[k] = s / d0;
    }
    return a;
}

std::pair<Polynomial, Polynomial> RationalFunction::display_form() const {
    if (inf_ || is_zero()) return {num_, den_};
    // Integer coefficients: scale by the common denominator, strip the
    // content, make the numerator's leading coefficient positive.
    mpz_class lcm(1);
    for (const auto& c : num_.coeffs())
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    for (const auto& c : den_.coeffs())
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    Polynomial n = num_ * Rat(lcm);
    Polynomial d = den_ * Rat(lcm);
    mpz_class content(0);
    for (const auto& c : n.coeffs())
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_num().get_mpz_t());
    for (const auto& c : d.coeffs())
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_num().get_mpz_t());
    if (content > 1) {
        Rat inv(mpz_class(1), content);
        inv.canonicalize();
        n = n * inv;
        d = d * inv;
    }
    if (n.leading() < 0) {
        n = -n;
        d = -d;
    }
    return {std::move(n), std::move(d)};
}

std::string RationalFunction::to_string(const std::string& var) const {
    if (inf_) return "inf";
    if (is_zero()) return "0";
    auto [n, d] = display_form();
    if (d.is_one()) return n.to_string(var);
    return "(" + n.to_string(var) + ") / (" + d.to_string(var) + ")";
}

RationalFunction compose(const RationalFunction& outer, const RationalFunction& inner) {
    if (outer.is_infinity()) return outer;
    if (inner.is_infinity()) {
        ComplexPoint v = outer.eval_point(ComplexPoint::infinity());
        if (v.is_inf) return RationalFunction::infinity();
        int dn = outer.num().degree(), dd = outer.den().degree();
        if (dn < dd) return RationalFunction();
        return RationalFunction(outer.num().leading() / outer.den().leading());
    }
    if (inner.den().is_one() && inner.num().is_constant()) {
        // Constant inner value: compose by exact evaluation.
        Rat c = inner.num().coeff(0);
        auto v = outer.eval_exact(c);
        if (!v) return RationalFunction::infinity();
        return RationalFunction(*v);
    }
    const Polynomial& p = outer.num();
    const Polynomial& q = outer.den();
    const Polynomial& n = inner.num();
    const Polynomial& d = inner.den();
    int m = std::max(p.degree(), q.degree());
    // p(n/d) * d^m and q(n/d) * d^m expanded by Horner over polynomials.
    std::vector<Polynomial> dpow(m + 1);
    dpow[0] = Polynomial::one();
    for (int k = 1; k <= m; ++k) dpow[k] = dpow[k - 1] * d;
    Polynomial pn, qn;
    for (int k = 0; k <= m; ++k) {
        if (p.coeff(k) != 0) pn = pn + Polynomial(p.coeff(k)) * dpow[m - k] * n.pow(k);
        if (q.coeff(k) != 0) qn = qn + Polynomial(q.coeff(k)) * dpow[m - k] * n.pow(k);
    }
    return {std::move(pn), std::move(qn)};
}

RationalFunction iterate_map(const RationalFunction& f, int n) {
    RationalFunction r = RationalFunction::identity();
    for (int k = 0; k < n; ++k) r = compose(f, r);
    return r;
}

RationalFunction reciprocal_conjugate(const RationalFunction& r) {
    if (r.is_infinity()) return RationalFunction();
    if (r.is_zero()) return RationalFunction::infinity();
    int m = r.map_degree();
    std::vector<Rat> num_rev(m + 1, Rat(0)), den_rev(m + 1, Rat(0));
    for (int k = 0; k <= m; ++k) {
        num_rev[k] = r.num().coeff(m - k);
        den_rev[k] = r.den().coeff(m - k);
    }
    // 1 / r(1/z) = (z^m den(1/z)) / (z^m num(1/z))
    return {Polynomial(std::move(den_rev)), Polynomial(std::move(num_rev))};
}

} // namespace selfsim
