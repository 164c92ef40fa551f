#ifndef SELFSIM_GREEN_HPP
#define SELFSIM_GREEN_HPP

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "selfsim/ncell.hpp"
#include "selfsim/transfer.hpp"

namespace selfsim {

// Vertex of the infinite graph, named relative to an origin approximation:
// at `level`, descend `address` (first digit picks the glued copy, the rest
// pick nested cliques) and take cell vertex `local`. The same vertex keeps
// its meaning at any higher level through the origin nesting.
struct VertexRef {
    int level = 0;
    std::vector<int> address;
    std::string local;

    // Syntax "level:address:local", address = dotted digits or epsilon.
    // The local name "o" is an alias for the origin vertex when the cell
    // has no vertex of that name.
    static VertexRef parse(const std::string& text);
    std::string to_string() const;
};

struct GreenOptions {
    double target_accuracy = 1e-10;
    double base_radius = 0.5;
    int series_cap = 200;
    int max_forward_iterations = 200;
};

struct GreenValue {
    std::complex<double> value;
    double error_bound = 0.0;
    int continuation_depth = 0;  // forward-orbit steps used
};

struct SingularityProbe {
    std::vector<double> radii;         // r_k = 1 - 2^{-k}
    std::vector<double> values;        // G(x,y|r_k)
    bool monotone_increasing = false;
    double fitted_exponent = 0.0;      // log-log slope over the last steps
    bool polar_fit_rejected = false;   // slope not converging to an integer
    double first_passage_partial = 0.0;  // sum of first-return coefficients
    int first_passage_terms = 0;
};

// Evaluates Green functions anywhere in the basin of attraction of 0 by
// the decomposition algorithm, with a rigorous truncation error bound.
class GreenEvaluator {
public:
    GreenEvaluator(const CellSpec& spec, TransferSet transfer);

    const TransferSet& transfer() const { return transfer_; }
    const CellSpec& spec() const { return spec_; }

    GreenValue evaluate(const VertexRef& x, const VertexRef& y, ComplexPoint z,
                        const GreenOptions& opts = {});

    // Degree of the vertex in the infinite graph.
    int x_degree(const VertexRef& ref) const;

    // Exact base-series coefficients p^(k)(x,y), k <= order, on an origin
    // approximation grown until truncation is exact.
    std::vector<Rat> base_series(const VertexRef& x, const VertexRef& y, int order);

    // |G(v,w|z) - G(phi v, phi w|d(z)) f(z)| together with the combined
    // error bound of both sides.
    struct Residual {
        double residual;
        double combined_bound;
    };
    Residual functional_equation_residual(const VertexRef& v, const VertexRef& w, ComplexPoint z,
                                          const GreenOptions& opts = {});

    SingularityProbe singularity_probe(const VertexRef& x, const VertexRef& y, int k_max = 20,
                                       int series_terms = 400);

private:
    struct VKey {
        int copy = 0;
        std::vector<int> digits;
        int local = 0;
        auto operator<=>(const VKey&) const = default;
    };

    VKey canonical(VKey key) const;
    int x_degree_key(VKey key) const;
    VKey lift(VKey key) const;                    // one origin-nesting level up
    VKey ref_to_key(const VertexRef& ref, int* level) const;
    bool innermost_interior(const VKey& key, int level) const;
    VertexRef key_to_ref(const VKey& key, int level) const;

    OriginApproximation& approximation(int level);
    int resolve_in(int level, const VKey& key, int key_level);

    std::vector<Rat>& cached_series(int pair_level, const VKey& x, const VKey& y, int order,
                                    int* exact_level);

    std::complex<double> eval_factor(const RationalFunction& r, std::complex<double> z,
                                     const char* what) const;

    CellSpec spec_;
    TransferSet transfer_;
    CellHierarchy hier_;
    std::map<int, std::unique_ptr<OriginApproximation>> approx_;
    std::map<std::tuple<int, int, int>, std::vector<Rat>> series_cache_;  // (level, x, y)
};

struct ShellCheckReport {
    std::vector<std::int64_t> crossing_edges;
    std::int64_t max_crossing = 0;
    bool bounded = false;       // all a_n at or below the observed bound
    bool one_dimensional = false;
};

// Shell conductances a_n of the one-dimensional partition built from the
// nested origin approximations, n <= n_max.
ShellCheckReport shell_conductance_check(const CellSpec& spec, int n_max,
                                         std::int64_t vertex_cap = 50'000'000);

} // namespace selfsim

#endif
