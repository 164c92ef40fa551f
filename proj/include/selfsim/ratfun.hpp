#ifndef SELFSIM_RATFUN_HPP
#define SELFSIM_RATFUN_HPP

#include <complex>
#include <optional>
#include <string>

#include "selfsim/polynomial.hpp"

namespace selfsim {

// A point of the Riemann sphere. Infinity is a single canonical value.
struct ComplexPoint {
    double re = 0.0;
    double im = 0.0;
    bool is_inf = false;

    ComplexPoint() = default;
    ComplexPoint(double r, double i) : re(r), im(i) {}
    explicit ComplexPoint(std::complex<double> z) : re(z.real()), im(z.imag()) {}

    static ComplexPoint infinity() {
        ComplexPoint p;
        p.is_inf = true;
        return p;
    }

    std::complex<double> value() const { return {re, im}; }
    double abs() const { return is_inf ? std::numeric_limits<double>::infinity() : std::abs(value()); }
    bool is_real(double tol = 1e-9) const { return is_inf || std::abs(im) <= tol * (1.0 + std::abs(re)); }

    bool same_point(const ComplexPoint& other, double radius) const {
        if (is_inf || other.is_inf) return is_inf == other.is_inf;
        return std::abs(value() - other.value()) <= radius;
    }

    std::string to_string() const;
};

// Quotient of two exact-rational polynomials in canonical form:
// gcd-reduced, monic denominator. A tagged constant-infinity value stands
// in for compositions landing on a pole; it supports eval and queries but
// not arithmetic.
class RationalFunction {
public:
    RationalFunction() : num_(), den_(Polynomial::one()) {}                // zero
    explicit RationalFunction(Rat constant) : num_(Polynomial(std::move(constant))), den_(Polynomial::one()) {}
    explicit RationalFunction(Polynomial numerator)
        : num_(std::move(numerator)), den_(Polynomial::one()) {}
    RationalFunction(Polynomial numerator, Polynomial denominator);

    static RationalFunction identity() { return RationalFunction(Polynomial::identity()); }
    static RationalFunction constant(Rat c) { return RationalFunction(std::move(c)); }
    static RationalFunction infinity();

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_infinity() const { return inf_; }
    bool is_zero() const { return !inf_ && num_.is_zero(); }
    bool is_constant() const { return inf_ || (num_.is_constant() && den_.is_constant()); }

    // max(deg num, deg den): the degree as a map of the sphere.
    int map_degree() const;

    RationalFunction operator-() const;
    RationalFunction operator+(const RationalFunction& rhs) const;
    RationalFunction operator-(const RationalFunction& rhs) const;
    RationalFunction operator*(const RationalFunction& rhs) const;
    RationalFunction operator/(const RationalFunction& rhs) const;
    RationalFunction& operator+=(const RationalFunction& rhs) { return *this = *this + rhs; }
    RationalFunction& operator-=(const RationalFunction& rhs) { return *this = *this - rhs; }
    RationalFunction& operator*=(const RationalFunction& rhs) { return *this = *this * rhs; }
    RationalFunction& operator/=(const RationalFunction& rhs) { return *this = *this / rhs; }
    bool operator==(const RationalFunction& rhs) const {
        return inf_ == rhs.inf_ && num_ == rhs.num_ && den_ == rhs.den_;
    }

    // Value on the Riemann sphere. Throws EvalIndeterminate when numerator
    // and denominator are both numerically indistinguishable from zero.
    ComplexPoint eval_point(const ComplexPoint& z) const;
    ComplexPoint eval_point(std::complex<double> z) const { return eval_point(ComplexPoint(z)); }

    // Exact evaluation at a rational point; nullopt when on a pole.
    std::optional<Rat> eval_exact(const Rat& x) const;

    RationalFunction derivative() const;

    // First `count` Taylor coefficients at 0, by the denominator's linear
    // recurrence. Requires den(0) != 0.
    std::vector<Rat> series_coefficients(int count) const;

    // Integer-primitive representative with a positive-leading numerator;
    // the form used for display and coefficient listings.
    std::pair<Polynomial, Polynomial> display_form() const;

    std::string to_string(const std::string& var = "z") const;

private:
    void normalize();
    Polynomial num_, den_;
    bool inf_ = false;
};

// Composition outer(inner(z)) as a rational function. Constant inner values
// are handled by exact evaluation; an inner constant sitting on a pole of
// the outer function yields the tagged infinity.
RationalFunction compose(const RationalFunction& outer, const RationalFunction& inner);

// n-fold composition f^(n) = f ∘ f ∘ ... ∘ f.
RationalFunction iterate_map(const RationalFunction& f, int n);

// The function 1 / r(1/z) as a rational function (degree-reversal).
RationalFunction reciprocal_conjugate(const RationalFunction& r);

} // namespace selfsim

#endif
