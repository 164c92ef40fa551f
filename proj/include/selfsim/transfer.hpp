#ifndef SELFSIM_TRANSFER_HPP
#define SELFSIM_TRANSFER_HPP

#include <string>
#include <vector>

#include "selfsim/cellspec.hpp"
#include "selfsim/ratfun.hpp"
#include "selfsim/roots.hpp"

namespace selfsim {

// The transition function d, return function f and inner transition
// functions of a cell, together with the derived pole/zero data that seeds
// the dynamics.
struct TransferSet {
    RationalFunction d;  // first-hit generating function, scaled by theta-1
    RationalFunction f;  // return generating function

    int theta = 0;
    int diam_boundary = 0;
    std::vector<int> cell_degrees;  // degree in C-hat per vertex id
    std::vector<int> interior;      // non-boundary vertex ids

    // h(x, y) for x interior, y any cell vertex; first index is the
    // position of x in `interior`.
    std::vector<std::vector<RationalFunction>> h;

    std::vector<ComplexPoint> poles_f;
    std::vector<ComplexPoint> zeroes_f;
    std::vector<ComplexPoint> poles_cell;  // union of h-denominator roots

    int interior_position(int vertex_id) const;
    const RationalFunction& h_of(int interior_id, int other_id) const;
    // h-tilde(w, y) = deg(y)/deg(w) * h(y, w) for w boundary, y interior.
    RationalFunction h_tilde(int boundary_id, int interior_id) const;

    // Seeds for the discrete exceptional set: poles_f plus poles_cell.
    std::vector<ComplexPoint> exceptional_seeds() const;
};

// Computes the TransferSet from a validated, doubly symmetric spec.
// d and f are recomputed for every ordered boundary pair and must agree
// exactly; disagreement signals inconsistent substitution data.
TransferSet compute_transfer(const CellSpec& spec);

struct FixedPointReport {
    bool ok = false;
    int order_at_zero = 0;   // numerator valuation of d
    int diam_boundary = 0;
    bool d_fixes_one = false;
    Rat d_prime_at_one;      // exact
    std::string details;
};

// Exact certificates: ord_0(d) = diam(theta C), d(1) = 1, d'(1) > 2.
// Downstream dynamics must not run when this fails.
FixedPointReport check_fixed_points(const TransferSet& t);

// Every numeric zero of f lies within `radius` of some pole of the inner
// transition functions.
bool check_zeroes_lemma(const TransferSet& t, double radius = 1e-8);

// Recomputes the first-return generating function of a boundary vertex
// directly from the h entries and asserts exact equality with 1 - 1/f.
bool first_passage_identity(const CellSpec& spec, const TransferSet& t);

} // namespace selfsim

#endif
