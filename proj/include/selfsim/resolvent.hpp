#ifndef SELFSIM_RESOLVENT_HPP
#define SELFSIM_RESOLVENT_HPP

#include <vector>

#include "selfsim/ratfun.hpp"

namespace selfsim {

// Sparse square matrix of exact rationals, row-major triplets.
struct SparseRatMatrix {
    int n = 0;
    struct Entry {
        int row;
        int col;
        Rat value;
    };
    std::vector<Entry> entries;
};

// Requested entries of (I - zQ)^{-1} as exact reduced rational functions.
// Q must be substochastic (entries in [0,1], row sums <= 1), which keeps
// det(I - zQ) away from the zero polynomial. Elimination runs over the
// field Q(z) with Markowitz pivoting on the diagonal.
std::vector<std::vector<RationalFunction>> solve_resolvent(const SparseRatMatrix& q,
                                                           const std::vector<int>& rows,
                                                           const std::vector<int>& cols);

// Column `col` of (I - zQ)^{-1}: entries (x, col) for every x.
std::vector<RationalFunction> resolvent_column(const SparseRatMatrix& q, int col);

// Row `row` of (I - zQ)^{-1}: entries (row, y) for every y.
std::vector<RationalFunction> resolvent_row(const SparseRatMatrix& q, int row);

} // namespace selfsim

#endif
