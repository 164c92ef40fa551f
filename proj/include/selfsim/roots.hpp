#ifndef SELFSIM_ROOTS_HPP
#define SELFSIM_ROOTS_HPP

#include <complex>
#include <vector>

#include "selfsim/ratfun.hpp"

namespace selfsim {

struct Root {
    ComplexPoint location;
    int multiplicity = 1;
    bool snapped_to_real = false;
};

struct RootOptions {
    // Residual acceptance: |p(root)| <= residual_tol * max|coeff| * max(1,|root|)^deg.
    double residual_tol = 1e-10;
    // Roots with |im| < snap_tol * (1 + |re|) are snapped to the real axis.
    double snap_tol = 1e-9;
    int max_iterations = 400;
    bool allow_escalation = true;  // retry at ~160-bit precision on failure
};

// All complex roots of an exact polynomial with multiplicities, found by
// Yun squarefree splitting followed by Aberth-Ehrlich iteration. Double
// precision by default; escalates when the residual bound fails.
std::vector<Root> find_roots(const Polynomial& p, const RootOptions& opts = {});

// Roots of a polynomial given by complex double coefficients (ascending).
// Multiplicities are not separated; near-multiple roots come out as
// clusters. Leading coefficients smaller than lead_tol * max|coeff| are
// dropped (degree deficiency; the caller decides what that means).
std::vector<std::complex<double>> find_roots_numeric(std::vector<std::complex<double>> coeffs,
                                                     const RootOptions& opts = {});

} // namespace selfsim

#endif
