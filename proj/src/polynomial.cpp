#include "selfsim/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace selfsim {

namespace {
const Rat kZero(0);
}

Polynomial::Polynomial(Rat constant) {
    if (constant != 0) coeffs_.push_back(std::move(constant));
}

Polynomial::Polynomial(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<long> ints) {
    coeffs_.reserve(ints.size());
    for (long v : ints) coeffs_.emplace_back(v);
    trim();
}

Polynomial Polynomial::identity() { return monomial(Rat(1), 1); }

Polynomial Polynomial::monomial(Rat coeff, int power) {
    Polynomial p;
    if (coeff != 0) {
        p.coeffs_.assign(power + 1, Rat(0));
        p.coeffs_[power] = std::move(coeff);
    }
    return p;
}

bool Polynomial::is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }

const Rat& Polynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return kZero;
    return coeffs_[k];
}

const Rat& Polynomial::leading() const {
    if (is_zero()) throw std::logic_error("leading(): zero polynomial");
    return coeffs_.back();
}

int Polynomial::valuation() const {
    if (is_zero()) throw std::logic_error("valuation(): zero polynomial");
    for (int k = 0; k < static_cast<int>(coeffs_.size()); ++k)
        if (coeffs_[k] != 0) return k;
    return 0;  // unreachable on canonical form
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::operator-() const {
    Polynomial r(*this);
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    Polynomial r;
    r.coeffs_.resize(std::max(coeffs_.size(), rhs.coeffs_.size()), Rat(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = coeffs_[i];
    for (size_t i = 0; i < rhs.coeffs_.size(); ++i) r.coeffs_[i] += rhs.coeffs_[i];
    r.trim();
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    Polynomial r;
    r.coeffs_.resize(std::max(coeffs_.size(), rhs.coeffs_.size()), Rat(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] = coeffs_[i];
    for (size_t i = 0; i < rhs.coeffs_.size(); ++i) r.coeffs_[i] -= rhs.coeffs_[i];
    r.trim();
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    if (is_zero() || rhs.is_zero()) return {};
    Polynomial r;
    r.coeffs_.assign(coeffs_.size() + rhs.coeffs_.size() - 1, Rat(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        for (size_t j = 0; j < rhs.coeffs_.size(); ++j) {
            if (rhs.coeffs_[j] == 0) continue;
            r.coeffs_[i + j] += coeffs_[i] * rhs.coeffs_[j];
        }
    }
    r.trim();
    return r;
}

Polynomial Polynomial::operator*(const Rat& scalar) const {
    if (scalar == 0) return {};
    Polynomial r(*this);
    for (auto& c : r.coeffs_) c *= scalar;
    return r;
}

Polynomial operator*(const Rat& scalar, const Polynomial& p) { return p * scalar; }

std::pair<Polynomial, Polynomial> Polynomial::divrem(const Polynomial& num,
                                                     const Polynomial& den) {
    if (den.is_zero()) throw std::domain_error("divrem: division by zero polynomial");
    Polynomial q, r = num;
    int dd = den.degree();
    const Rat& lead = den.leading();
    if (r.degree() >= dd) q.coeffs_.assign(r.degree() - dd + 1, Rat(0));
    while (!r.is_zero() && r.degree() >= dd) {
        int shift = r.degree() - dd;
        Rat factor = r.leading() / lead;
        q.coeffs_[shift] = factor;
        // r -= factor * z^shift * den
        for (int k = 0; k <= dd; ++k) {
            if (den.coeffs_[k] == 0) continue;
            r.coeffs_[k + shift] -= factor * den.coeffs_[k];
        }
        r.trim();
    }
    q.trim();
    return {std::move(q), std::move(r)};
}

Polynomial Polynomial::derivative() const {
    Polynomial r;
    if (coeffs_.size() <= 1) return r;
    r.coeffs_.resize(coeffs_.size() - 1);
    for (size_t k = 1; k < coeffs_.size(); ++k) r.coeffs_[k - 1] = coeffs_[k] * Rat(static_cast<long>(k));
    r.trim();
    return r;
}

Polynomial Polynomial::pow(unsigned exponent) const {
    Polynomial result = one();
    Polynomial base = *this;
    while (exponent > 0) {
        if (exponent & 1u) result = result * base;
        base = base * base;
        exponent >>= 1u;
    }
    return result;
}

Polynomial Polynomial::monic() const {
    if (is_zero()) throw std::logic_error("monic(): zero polynomial");
    Rat inv = 1 / leading();
    return *this * inv;
}

Rat Polynomial::eval_rat(const Rat& x) const {
    Rat acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial::EvalWithBound Polynomial::eval_with_bound(std::complex<double> x) const {
    std::complex<double> acc(0.0, 0.0);
    double maj = 0.0;
    double ax = std::abs(x);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + to_complex(*it);
        maj = maj * ax + std::abs(it->get_d());
    }
    return {acc, maj};
}

std::complex<double> Polynomial::eval(std::complex<double> x) const {
    return eval_with_bound(x).value;
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c.get_d()));
    return m;
}

std::vector<std::complex<double>> Polynomial::scaled_double_coeffs() const {
    std::vector<std::complex<double>> out;
    if (is_zero()) return out;
    // Scale exactly by the largest-magnitude coefficient before converting,
    // so huge integer coefficients cannot overflow double.
    Rat scale = coeffs_[0];
    for (const auto& c : coeffs_)
        if (abs(c) > abs(scale)) scale = c;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) {
        Rat t = c / scale;
        out.emplace_back(t.get_d(), 0.0);
    }
    return out;
}

std::string Polynomial::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const Rat& c = coeffs_[k];
        if (c == 0) continue;
        Rat a = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        bool unit = (a == 1);
        if (k == 0 || !unit) os << a.get_str();
        if (k > 0) {
            if (!unit) os << "*";
            os << var;
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

namespace {

// Primitive integer image of a rational-coefficient polynomial.
std::vector<mpz_class> primitive_integer(const Polynomial& p) {
    mpz_class scale(1);
    for (const auto& c : p.coeffs()) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> out;
    out.reserve(p.coeffs().size());
    mpz_class content(0);
    for (const auto& c : p.coeffs()) {
        mpz_class v = c.get_num() * (scale / c.get_den());
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), v.get_mpz_t());
        out.push_back(std::move(v));
    }
    if (content > 1)
        for (auto& v : out) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), content.get_mpz_t());
    return out;
}

constexpr unsigned long kGcdPrimes[] = {2305843009213693951ul,  // 2^61 - 1
                                        4611686018427387847ul, 4611686018427387817ul};

unsigned long mulmod(unsigned long a, unsigned long b, unsigned long p) {
    return static_cast<unsigned long>((static_cast<unsigned __int128>(a) * b) % p);
}

unsigned long invmod(unsigned long a, unsigned long p) {
    // Fermat; p is prime.
    unsigned long r = 1, base = a % p;
    unsigned long e = p - 2;
    while (e) {
        if (e & 1ul) r = mulmod(r, base, p);
        base = mulmod(base, base, p);
        e >>= 1ul;
    }
    return r;
}

// Degree of gcd(F, G) mod p; requires p not dividing either leading
// coefficient. Sound certificate: a constant modular gcd proves the
// rational gcd is constant.
int gcd_degree_mod_p(const std::vector<mpz_class>& f, const std::vector<mpz_class>& g,
                     unsigned long p) {
    auto reduce = [&](const std::vector<mpz_class>& src) {
        std::vector<unsigned long> out(src.size());
        for (size_t i = 0; i < src.size(); ++i) {
            unsigned long m = mpz_fdiv_ui(src[i].get_mpz_t(), p);
            out[i] = m;
        }
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    };
    std::vector<unsigned long> a = reduce(f), b = reduce(g);
    if (a.empty() || b.empty()) return -1;  // unlucky reduction; caller falls back
    while (!b.empty()) {
        // a mod b
        unsigned long inv = invmod(b.back(), p);
        while (a.size() >= b.size()) {
            unsigned long factor = mulmod(a.back(), inv, p);
            size_t shift = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i) {
                unsigned long sub = mulmod(factor, b[i], p);
                a[i + shift] = (a[i + shift] + p - sub) % p;
            }
            while (!a.empty() && a.back() == 0) a.pop_back();
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

mpz_class eval_at(const std::vector<mpz_class>& f, const mpz_class& x) {
    mpz_class acc(0);
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial from_integer(const std::vector<mpz_class>& f) {
    std::vector<Rat> coeffs;
    coeffs.reserve(f.size());
    for (const auto& c : f) coeffs.emplace_back(c);
    return Polynomial(std::move(coeffs));
}

bool divides_exactly(const Polynomial& divisor, const Polynomial& p) {
    return Polynomial::divrem(p, divisor).second.is_zero();
}

Polynomial euclid_gcd(Polynomial a, Polynomial b) {
    a = a.monic();
    b = b.monic();
    while (!b.is_zero()) {
        Polynomial r = Polynomial::divrem(a, b).second;
        a = std::move(b);
        b = r.is_zero() ? Polynomial::zero() : r.monic();
    }
    return a;
}

// Heuristic integer gcd: evaluate at a large point, take the integer gcd,
// read the candidate back off its balanced base-xi digits, verify by exact
// division. Returns nullopt when the heuristic does not settle.
std::optional<Polynomial> heuristic_gcd(const std::vector<mpz_class>& f,
                                        const std::vector<mpz_class>& g, const Polynomial& a,
                                        const Polynomial& b) {
    mpz_class maxf(0), maxg(0);
    for (const auto& c : f) {
        mpz_class v = abs(c);
        if (v > maxf) maxf = v;
    }
    for (const auto& c : g) {
        mpz_class v = abs(c);
        if (v > maxg) maxg = v;
    }
    mpz_class xi = 2 * std::min(maxf, maxg) + 2;
    if (xi < 4) xi = 4;
    for (int attempt = 0; attempt < 6; ++attempt) {
        mpz_class gamma;
        mpz_class fe = eval_at(f, xi);
        mpz_class ge = eval_at(g, xi);
        mpz_gcd(gamma.get_mpz_t(), gamma.get_mpz_t(), fe.get_mpz_t());
        mpz_gcd(gamma.get_mpz_t(), gamma.get_mpz_t(), ge.get_mpz_t());
        // balanced xi-adic digits of gamma
        std::vector<mpz_class> cand;
        mpz_class rest = gamma;
        mpz_class half = xi / 2;
        while (rest != 0 && static_cast<int>(cand.size()) <= static_cast<int>(f.size())) {
            mpz_class digit = rest % xi;
            if (digit > half) digit -= xi;
            if (digit <= -half) digit += xi;
            cand.push_back(digit);
            rest = (rest - digit) / xi;
        }
        if (rest == 0 && !cand.empty()) {
            mpz_class content(0);
            for (const auto& c : cand) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_mpz_t());
            if (content > 1)
                for (auto& c : cand) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), content.get_mpz_t());
            Polynomial candidate = from_integer(cand);
            if (!candidate.is_zero() && divides_exactly(candidate, a) && divides_exactly(candidate, b))
                return candidate.monic();
        }
        xi = xi * 73794 / 27011;
    }
    return std::nullopt;
}

} // namespace

Polynomial poly_gcd(Polynomial a, Polynomial b) {
    if (a.is_zero()) return b.is_zero() ? Polynomial::zero() : b.monic();
    if (b.is_zero()) return a.monic();
    if (a.degree() == 0 || b.degree() == 0) return Polynomial::one();
    if (a.degree() <= 4 && b.degree() <= 4) return euclid_gcd(std::move(a), std::move(b));

    auto fi = primitive_integer(a);
    auto gi = primitive_integer(b);
    for (unsigned long p : kGcdPrimes) {
        if (mpz_fdiv_ui(fi.back().get_mpz_t(), p) == 0) continue;
        if (mpz_fdiv_ui(gi.back().get_mpz_t(), p) == 0) continue;
        int deg = gcd_degree_mod_p(fi, gi, p);
        if (deg == 0) return Polynomial::one();
        break;
    }
    if (auto h = heuristic_gcd(fi, gi, a, b)) return *h;
    return euclid_gcd(std::move(a), std::move(b));
}

std::vector<Polynomial> squarefree_decomposition(const Polynomial& p) {
    std::vector<Polynomial> factors;
    if (p.degree() <= 0) return factors;
    Polynomial a = p.monic();
    Polynomial g = poly_gcd(a, a.derivative());
    Polynomial w = Polynomial::divrem(a, g).first;
    // Yun: peel off the squarefree parts in multiplicity order.
    while (!w.is_constant()) {
        Polynomial y = poly_gcd(w, g);
        Polynomial s = Polynomial::divrem(w, y).first;
        factors.push_back(s.monic());
        w = y;
        g = Polynomial::divrem(g, y).first;
    }
    return factors;
}

Polynomial chebyshev_t(int n) {
    Polynomial prev = Polynomial::one();
    if (n == 0) return prev;
    Polynomial cur = Polynomial::identity();
    Polynomial two_z = Polynomial::monomial(Rat(2), 1);
    for (int k = 2; k <= n; ++k) {
        Polynomial next = two_z * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

} // namespace selfsim
