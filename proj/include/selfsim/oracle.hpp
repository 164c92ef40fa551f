#ifndef SELFSIM_ORACLE_HPP
#define SELFSIM_ORACLE_HPP

#include <string>
#include <vector>

#include "selfsim/ncell.hpp"
#include "selfsim/resolvent.hpp"
#include "selfsim/ratfun.hpp"
#include "selfsim/transfer.hpp"

namespace selfsim {

// Simple random walk on a finite graph with an absorbing vertex set.
struct AbsorbingWalkProblem {
    const FiniteGraph& graph;
    std::vector<int> absorbing;
    int source = 0;
    int target = 0;
};

// Exact Green function entry of the walk: ((I - z Q_B)^{-1})_{source,target}.
RationalFunction green_ncell(const AbsorbingWalkProblem& problem);

// The substochastic walk matrix with absorbing set B (exposed for tests).
SparseRatMatrix absorbing_walk_matrix(const FiniteGraph& g, const std::vector<int>& absorbing);

struct DecimationLevel {
    int level = 0;
    bool transition_identity = false;  // (theta-1) G_n^A(v,w) = d^n
    bool return_identity = false;      // G_n^A(v,v) = prod f(d^k)
    bool inner_identity = false;       // G_n^B(y,v) = h(.,.) o d^{n-1}
    bool ok() const { return transition_identity && return_identity && inner_identity; }
};

struct DecimationReport {
    std::vector<DecimationLevel> levels;
    int levels_verified = 0;  // largest n with all three identities exact
    bool all_ok = false;
    std::string details;
};

// Exact rational-function verification of the three n-cell Green
// identities against the iterated transfer functions, for n <= n_max.
DecimationReport verify_decimation_identities(const CellSpec& spec, int n_max,
                                              std::int64_t vertex_cap = 50'000'000);
DecimationReport verify_decimation_identities(const CellSpec& spec, const TransferSet& t,
                                              int n_max, std::int64_t vertex_cap = 50'000'000);

// Exact n-step transition coefficients p^(k)(from, to), k = 0..order, of the
// unrestricted walk on `g`. Exactness on the infinite graph is the caller's
// concern (walks must not feel the approximation boundary).
std::vector<Rat> walk_series(const FiniteGraph& g, int from, int to, int order);

struct SeriesCheckPair {
    std::string label;
    bool match = false;
    int first_mismatch = -1;  // coefficient index, -1 when all agree
    std::string lhs_at_mismatch;
    std::string rhs_at_mismatch;
};

struct SeriesCheckReport {
    int order = 0;
    int approximation_level = 0;
    std::vector<SeriesCheckPair> pairs;
    bool all_ok = false;
};

// Coefficient-wise check of G(v,w|z) = G(phi v, phi w|d(z)) f(z) on an
// origin approximation grown until truncation is exact to the requested
// order, for the pairs (o,o) and (o, theta-C-vertex at level 2).
SeriesCheckReport functional_equation_series_check(const CellSpec& spec, int order,
                                                   int level_cap = 24);

// Truncated product of two coefficient lists and truncated composition
// outer(inner(z)) for series with inner valuation >= 1 (exposed for tests).
std::vector<Rat> series_multiply(const std::vector<Rat>& a, const std::vector<Rat>& b, int order);
std::vector<Rat> series_compose(const std::vector<Rat>& outer, const std::vector<Rat>& inner,
                                int order);

} // namespace selfsim

#endif
