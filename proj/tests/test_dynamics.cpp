#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "selfsim/cellspec.hpp"
#include "selfsim/dynamics.hpp"
#include "selfsim/transfer.hpp"

using namespace selfsim;

namespace {

CellSpec load_valid(const std::string& name) {
    CellSpec spec = load_cell_spec(std::string(SELFSIM_DATA_DIR) + "/" + name);
    auto report = validate_spec(spec);
    REQUIRE(report.ok());
    return spec;
}

TransferSet& line_transfer() {
    static TransferSet t = compute_transfer(load_valid("line2.json"));
    return t;
}

} // namespace

TEST_CASE("forward orbits") {
    const TransferSet& t = line_transfer();
    // 0.3 already lies inside the default attraction radius
    auto fast = forward_orbit(t.d, ComplexPoint(0.3, 0.0));
    CHECK(fast.converges);
    CHECK(fast.iterations == 0);
    CHECK(t.d.eval_point(ComplexPoint(0.3, 0.0)).re == doctest::Approx(0.09 / 1.91));
    // from 0.55 one application lands inside
    auto one = forward_orbit(t.d, ComplexPoint(0.55, 0.0));
    CHECK(one.converges);
    CHECK(one.iterations == 1);

    auto at_zero = forward_orbit(t.d, ComplexPoint(0.0, 0.0));
    CHECK(at_zero.converges);
    CHECK(at_zero.iterations == 0);

    auto repelled = forward_orbit(t.d, ComplexPoint(1.0, 0.0));
    CHECK_FALSE(repelled.converges);  // z = 1 is a repelling fixed point
}

TEST_CASE("preimages on the sphere") {
    const TransferSet& t = line_transfer();
    auto pre1 = preimages(t.d, ComplexPoint(1.0, 0.0));
    REQUIRE(pre1.size() == 2);
    CHECK(pre1[0].re == doctest::Approx(-1.0));
    CHECK(pre1[1].re == doctest::Approx(1.0));

    auto pre0 = preimages(t.d, ComplexPoint(0.0, 0.0));
    REQUIRE(pre0.size() == 2);
    CHECK(pre0[0].re == doctest::Approx(0.0));
    CHECK(pre0[1].re == doctest::Approx(0.0));

    auto pre_sqrt2 = preimages(t.d, ComplexPoint(std::sqrt(2.0), 0.0));
    REQUIRE(pre_sqrt2.size() == 2);
    CHECK(pre_sqrt2[1].re == doctest::Approx(1.0823922002923939688));

    // d(inf) = -1: preimages of -1 are two copies of infinity
    auto pre_minus1 = preimages(t.d, ComplexPoint(-1.0, 0.0));
    REQUIRE(pre_minus1.size() == 2);
    CHECK(pre_minus1[0].is_inf);
    CHECK(pre_minus1[1].is_inf);

    // preimages of infinity are the denominator roots
    auto pre_inf = preimages(t.d, ComplexPoint::infinity());
    REQUIRE(pre_inf.size() == 2);
    CHECK(pre_inf[0].re == doctest::Approx(-std::sqrt(2.0)));
    CHECK(pre_inf[1].re == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("backward orbit basics") {
    const TransferSet& t = line_transfer();
    auto tree1 = backward_orbit(t.d, {ComplexPoint(1.0, 0.0)}, 1);
    // {1} at depth 0, {-1} new at depth 1
    REQUIRE(tree1.points.size() == 2);
    CHECK(tree1.points[0].z.re == doctest::Approx(1.0));
    CHECK(tree1.points[1].z.re == doctest::Approx(-1.0));
    CHECK(tree1.points[1].depth == 1);
    CHECK(tree1.points[1].parent == 0);

    // depth 0 from the exceptional seeds is the seeds themselves
    auto tree0 = backward_orbit(t.d, t.exceptional_seeds(), 0);
    CHECK(tree0.points.size() == 2);

    auto tree_d1 = backward_orbit(t.d, t.exceptional_seeds(), 1);
    auto reals = tree_d1.finite_real_points();
    // {+-sqrt2, +-sqrt(4-2sqrt2), +-sqrt(4+2sqrt2)}
    REQUIRE(reals.size() == 6);
    CHECK(reals[5] == doctest::Approx(std::sqrt(4.0 + 2.0 * std::sqrt(2.0))));
    CHECK(reals[4] == doctest::Approx(std::sqrt(2.0)));
    CHECK(reals[3] == doctest::Approx(1.0823922002923939688));
}

TEST_CASE("backward orbit residuals and realness") {
    const TransferSet& t = line_transfer();
    auto tree = backward_orbit(t.d, {ComplexPoint(1.0, 0.0)}, 10);
    CHECK(tree.max_residual <= 1e-8);
    CHECK(tree.nonreal_count == 0);
    // no point of the tree is the superattracting fixed point 0
    for (const auto& p : tree.points)
        CHECK((p.z.is_inf || std::abs(p.z.re) >= 1.0 - 1e-9));
}

TEST_CASE("line backward orbit matches the secant grid of the Chebyshev conjugacy") {
    const TransferSet& t = line_transfer();
    const int depth = 7;
    auto tree = backward_orbit(t.d, {ComplexPoint(1.0, 0.0)}, depth);
    auto points = tree.finite_real_points();
    // expected: the tree at depth n is d^{-n}(1) = {sec(2 pi k / 2^n)},
    // k = 0..2^{n-1}, minus the pole of sec
    const int n_angle = 1 << depth;
    std::vector<double> expect;
    for (int k = 0; 2 * k <= n_angle; ++k) {
        double c = std::cos(2.0 * M_PI * k / n_angle);
        if (std::abs(c) < 1e-12) continue;
        expect.push_back(1.0 / c);
    }
    std::sort(expect.begin(), expect.end());
    REQUIRE(points.size() == expect.size());
    for (size_t i = 0; i < points.size(); ++i)
        CHECK(points[i] == doctest::Approx(expect[i]).epsilon(1e-8));
    CHECK(tree.contains_infinity());
}

TEST_CASE("julia approximations accumulate monotonically") {
    const TransferSet& t = line_transfer();
    auto j1 = approximate_julia(t, 6);
    auto j2 = approximate_julia(t, 7);
    // every depth-6 point appears in the depth-7 set within the dedup radius
    for (double p : j1.points) {
        auto it = std::lower_bound(j2.points.begin(), j2.points.end(), p - 1e-8);
        bool found = it != j2.points.end() && *it <= p + 1e-8;
        CHECK(found);
    }
}

TEST_CASE("classification: line interval-like, sierpinski and vicsek cantor-like") {
    auto line_j = approximate_julia(line_transfer(), 12);
    CHECK(line_j.realness_violations == 0);
    auto line_c = classify_julia(line_j);
    CHECK(line_c.verdict == JuliaClass::interval_like);

    TransferSet sierp = compute_transfer(load_valid("sierpinski.json"));
    auto sierp_j = approximate_julia(sierp, 10);
    auto sierp_c = classify_julia(sierp_j);
    CHECK(sierp_c.verdict == JuliaClass::cantor_like);
    // persistent-gap golden value from the recorded run
    CHECK(sierp_j.gaps.final_gap() == doctest::Approx(0.638236).epsilon(1e-4));

    TransferSet vicsek = compute_transfer(load_valid("vicsek.json"));
    auto vicsek_j = approximate_julia(vicsek, 8);
    auto vicsek_c = classify_julia(vicsek_j);
    CHECK(vicsek_c.verdict == JuliaClass::cantor_like);
    CHECK(vicsek_j.gaps.final_gap() == doctest::Approx(4.0).epsilon(1e-6));

    // shallow runs stay unresolved by construction
    auto shallow = approximate_julia(line_transfer(), 2);
    CHECK(classify_julia(shallow).verdict == JuliaClass::unresolved);
}

TEST_CASE("exceptional set stays real and outside the unit disc") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        TransferSet t = compute_transfer(load_valid(name));
        auto tree = exceptional_set(t, 6);
        CHECK(tree.nonreal_count == 0);
        for (const auto& p : tree.points) {
            if (p.z.is_inf) continue;
            CHECK(std::abs(p.z.im) <= 1e-9 * (1.0 + std::abs(p.z.re)));
            CHECK(std::abs(p.z.re) >= 1.0 - 1e-9);
        }
    }
}

TEST_CASE("point budget truncates gracefully") {
    TransferSet t = compute_transfer(load_valid("sierpinski.json"));
    auto tree = backward_orbit(t.d, {ComplexPoint(1.0, 0.0)}, 12, 1e-9, 500);
    CHECK(tree.truncated);
    CHECK(tree.points.size() <= 500);
}

TEST_CASE("spectrum report: line fills the reciprocal line, laplacian form in [0,2]") {
    SpectrumReport report = spectrum_bounds(line_transfer(), 12);
    CHECK(report.classification.verdict == JuliaClass::interval_like);
    CHECK(report.outer_gap < 0.05);
    CHECK(report.inner.has_infinity);

    // laplacian image: z=1 -> 0, z=-1 -> 2, z=inf -> 1 and everything in [0,2]
    REQUIRE(!report.laplacian_outer.empty());
    for (double lam : report.laplacian_outer) {
        CHECK(lam >= -1e-9);
        CHECK(lam <= 2.0 + 1e-9);
    }
    CHECK(report.laplacian_outer.front() == doctest::Approx(0.0));
    CHECK(report.laplacian_outer.back() == doctest::Approx(2.0));
    bool has_one = std::any_of(report.laplacian_outer.begin(), report.laplacian_outer.end(),
                               [](double l) { return std::abs(l - 1.0) < 1e-9; });
    CHECK(has_one);
}

TEST_CASE("spectrum report: cantor case carries the singularity annotation") {
    TransferSet t = compute_transfer(load_valid("sierpinski.json"));
    SpectrumReport report = spectrum_bounds(t, 9);
    CHECK(report.classification.verdict == JuliaClass::cantor_like);
    CHECK_FALSE(report.annotation.empty());
    // inner bound is contained in the outer bound
    CHECK(report.reciprocal_inner.size() <= report.reciprocal_outer.size());
}
