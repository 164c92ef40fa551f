#ifndef SELFSIM_DYNAMICS_HPP
#define SELFSIM_DYNAMICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "selfsim/ratfun.hpp"
#include "selfsim/transfer.hpp"

namespace selfsim {

struct ForwardOrbit {
    bool converges = false;
    int iterations = 0;  // first n with |d^n(z)| < attraction radius
    std::vector<ComplexPoint> orbit;
};

// Iterates d until the orbit enters the attraction radius of 0 or the
// iteration cap is hit.
ForwardOrbit forward_orbit(const RationalFunction& d, ComplexPoint z, int max_iter = 200,
                           double attraction_radius = 0.5);

// All sphere preimages of w under d, with multiplicity; count equals the
// map degree. Deficient finite degree contributes copies of infinity.
std::vector<ComplexPoint> preimages(const RationalFunction& d, const ComplexPoint& w,
                                    bool high_precision = false);

struct OrbitPoint {
    ComplexPoint z;
    int depth = 0;
    int parent = -1;  // index into points, -1 for seeds
};

struct OrbitTree {
    std::vector<OrbitPoint> points;
    double dedup_radius = 1e-9;
    int depth = 0;
    bool truncated = false;       // point budget hit
    double max_residual = 0.0;    // max |d(child) - parent| over finite parents
    int nonreal_count = 0;        // points kept with |im| above the snap tolerance

    std::vector<double> finite_real_points() const;  // sorted, only real finite
    bool contains_infinity() const;
};

// Breadth-first deduplicated backward iteration of d from the seeds.
OrbitTree backward_orbit(const RationalFunction& d, std::vector<ComplexPoint> seeds, int depth,
                         double dedup_radius = 1e-9, std::int64_t point_budget = 1'000'000,
                         bool high_precision = false);

struct GapStats {
    double window = 10.0;
    // Largest gap between consecutive points of the approximation inside
    // [-window,window] \ (-1,1), per depth (index k = depth k).
    std::vector<double> gap_by_depth;
    double final_gap() const { return gap_by_depth.empty() ? 0.0 : gap_by_depth.back(); }
};

struct JuliaApproximation {
    std::vector<double> points;  // sorted finite real points
    bool has_infinity = false;
    int depth = 0;
    GapStats gaps;
    int realness_violations = 0;  // reported, never silently dropped
    bool truncated = false;
};

// Backward orbit of the repelling fixed point 1; asserts realness of the
// retained points after snapping.
JuliaApproximation approximate_julia(const TransferSet& t, int depth,
                                     double dedup_radius = 1e-9,
                                     std::int64_t point_budget = 1'000'000,
                                     double window = 10.0, bool high_precision = false);

// Backward orbit of poles(f) and poles(C-hat): the discrete exceptional
// set truncated at the given depth.
OrbitTree exceptional_set(const TransferSet& t, int depth, double dedup_radius = 1e-9,
                          std::int64_t point_budget = 1'000'000, bool high_precision = false);

enum class JuliaClass { interval_like, cantor_like, unresolved };

std::string to_string(JuliaClass c);

struct JuliaClassification {
    JuliaClass verdict = JuliaClass::unresolved;
    std::string evidence;  // the verdict is a labeled heuristic, never a theorem claim
};

// Gap-shrinkage heuristic over the last depth increments.
JuliaClassification classify_julia(const JuliaApproximation& j, int min_depth = 8);

struct SpectrumReport {
    JuliaApproximation inner;            // Julia approximation
    std::vector<double> outer_extra;     // truncated D points not in the window sense
    bool outer_has_infinity = false;

    // Reciprocal-spectrum bounds: inner points and inner+outer points.
    std::vector<double> reciprocal_inner;
    std::vector<double> reciprocal_outer;

    // Laplacian form via lambda = 1 - 1/z (z = infinity -> 1).
    std::vector<double> laplacian_inner;
    std::vector<double> laplacian_outer;

    JuliaClassification classification;
    std::string annotation;  // Cantor case: spec^{-1}P equals the singularity set
    int depth = 0;
    double window = 10.0;
    double inner_gap = 0.0;  // largest gap of the inner bound inside the window
    double outer_gap = 0.0;  // ... of the full outer bound (inner plus D)
};

// Largest gap between consecutive points of a sorted set within
// [-window,window] \ (-1,1).
double largest_interior_gap(const std::vector<double>& sorted_points, double window);

SpectrumReport spectrum_bounds(const TransferSet& t, int depth, double dedup_radius = 1e-9,
                               std::int64_t point_budget = 1'000'000, double window = 10.0,
                               bool high_precision = false);

} // namespace selfsim

#endif
