#ifndef SELFSIM_RATIONAL_HPP
#define SELFSIM_RATIONAL_HPP

#include <complex>
#include <string>

#include <gmpxx.h>

namespace selfsim {

// Exact rational scalar. GMP does the heavy lifting; everything symbolic
// in this library is built on top of this type.
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline double to_double(const Rat& q) { return q.get_d(); }

inline std::complex<double> to_complex(const Rat& q) {
    return {q.get_d(), 0.0};
}

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

} // namespace selfsim

#endif
