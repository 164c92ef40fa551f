#ifndef SELFSIM_POLYNOMIAL_HPP
#define SELFSIM_POLYNOMIAL_HPP

#include <complex>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "selfsim/rational.hpp"

namespace selfsim {

// Dense univariate polynomial with exact rational coefficients, stored in
// ascending degree order. Canonical form: no stored trailing zeros, the
// zero polynomial has an empty coefficient vector and degree() == -1.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(Rat constant);
    explicit Polynomial(std::vector<Rat> coeffs);
    Polynomial(std::initializer_list<long> ints);

    static Polynomial zero() { return {}; }
    static Polynomial one() { return Polynomial(Rat(1)); }
    static Polynomial identity();                      // z
    static Polynomial monomial(Rat coeff, int power);  // coeff * z^power

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    bool is_constant() const { return coeffs_.size() <= 1; }
    bool is_one() const;

    // Coefficient of z^k; zero outside the stored range.
    const Rat& coeff(int k) const;
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    const Rat& leading() const;

    // Index of the lowest nonzero coefficient. Requires a nonzero polynomial.
    int valuation() const;

    Polynomial operator-() const;
    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(const Rat& scalar) const;
    bool operator==(const Polynomial& rhs) const { return coeffs_ == rhs.coeffs_; }

    // Euclidean division; denominator must be nonzero.
    static std::pair<Polynomial, Polynomial> divrem(const Polynomial& num,
                                                    const Polynomial& den);

    Polynomial derivative() const;
    Polynomial pow(unsigned exponent) const;

    // Monic image of *this; requires nonzero.
    Polynomial monic() const;

    Rat eval_rat(const Rat& x) const;

    // Horner evaluation together with the coefficient-magnitude majorant
    // sum_k |c_k| |x|^k, used for roundoff-aware zero tests.
    struct EvalWithBound {
        std::complex<double> value;
        double majorant;
    };
    EvalWithBound eval_with_bound(std::complex<double> x) const;
    std::complex<double> eval(std::complex<double> x) const;

    template <typename C>
    C eval_generic(const C& x) const {
        C acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
            acc = acc * x + C(it->get_num().get_str()) / C(it->get_den().get_str());
        return acc;
    }

    // Largest |coefficient| as a double (0 for the zero polynomial).
    double max_abs_coeff() const;

    // Coefficients scaled so the largest magnitude is 1, as complex doubles.
    // Exact rationals can exceed double range; scaling keeps conversion safe.
    std::vector<std::complex<double>> scaled_double_coeffs() const;

    std::string to_string(const std::string& var = "z") const;

private:
    void trim();
    std::vector<Rat> coeffs_;
};

Polynomial operator*(const Rat& scalar, const Polynomial& p);

// Monic greatest common divisor (gcd of anything with 0 is the monic other).
Polynomial poly_gcd(Polynomial a, Polynomial b);

// Yun's squarefree decomposition: returns factors s_1, s_2, ..., s_m with
// p = lc * prod s_k^k and each s_k squarefree. Factors of degree 0 appear
// as the constant one.
std::vector<Polynomial> squarefree_decomposition(const Polynomial& p);

// Chebyshev polynomial of the first kind, by the three-term recurrence.
Polynomial chebyshev_t(int n);

} // namespace selfsim

#endif
