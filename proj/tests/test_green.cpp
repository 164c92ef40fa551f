#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "selfsim/cellspec.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/green.hpp"
#include "selfsim/oracle.hpp"
#include "selfsim/transfer.hpp"

using namespace selfsim;

namespace {

CellSpec load_valid(const std::string& name) {
    CellSpec spec = load_cell_spec(std::string(SELFSIM_DATA_DIR) + "/" + name);
    auto report = validate_spec(spec);
    REQUIRE(report.ok());
    return spec;
}

GreenEvaluator& line_evaluator() {
    static CellSpec spec = load_valid("line2.json");
    static GreenEvaluator ev(spec, compute_transfer(spec));
    return ev;
}

// Closed form of the line's Green function at the origin; the principal
// square root is analytic exactly off (-inf,-1] u [1,inf), which is the
// continuation domain.
std::complex<double> line_closed_form(std::complex<double> z) {
    return 1.0 / std::sqrt(std::complex<double>(1.0, 0.0) - z * z);
}

} // namespace

TEST_CASE("vertex ref parsing") {
    VertexRef o = VertexRef::parse("0:e:o");
    CHECK(o.level == 0);
    CHECK(o.address.empty());
    CHECK(o.local == "o");
    VertexRef deep = VertexRef::parse("3:0.1.2:m");
    CHECK(deep.level == 3);
    CHECK(deep.address == std::vector<int>{0, 1, 2});
    CHECK(deep.to_string() == "3:0.1.2:m");
    CHECK_THROWS_AS(VertexRef::parse("nonsense"), SpecError);
    CHECK_THROWS_AS(VertexRef::parse("1:0:"), SpecError);
}

TEST_CASE("base series: central binomial coefficients at the origin") {
    auto series = line_evaluator().base_series(VertexRef::parse("0:e:o"),
                                               VertexRef::parse("0:e:o"), 8);
    CHECK(series[0] == 1);
    CHECK(series[1] == 0);
    CHECK(series[2] == Rat(1, 2));
    CHECK(series[4] == Rat(3, 8));
    CHECK(series[6] == Rat(5, 16));
    CHECK(series[8] == Rat(35, 128));
}

TEST_CASE("base series: delta at order zero, one-step probability at order one") {
    CellSpec spec = load_valid("sierpinski.json");
    GreenEvaluator ev(spec, compute_transfer(spec));
    VertexRef o = VertexRef::parse("0:e:o");
    auto self_series = ev.base_series(o, o, 1);
    CHECK(self_series[0] == 1);
    CHECK(self_series[1] == 0);
    // a neighbour of the origin: interior vertex ab of the first copy
    VertexRef ab = VertexRef::parse("1:0:ab");
    auto step = ev.base_series(o, ab, 1);
    CHECK(step[0] == 0);
    CHECK(step[1] == Rat(1, 4));  // deg_X(o) = 2 cells * (theta-1) = 4
}

TEST_CASE("line green function matches the closed form inside the disc") {
    GreenEvaluator& ev = line_evaluator();
    VertexRef o = VertexRef::parse("0:e:o");
    for (double z : {0.6, 0.0, -0.25, 0.9, -0.99}) {
        auto v = ev.evaluate(o, o, ComplexPoint(z, 0.0));
        auto expect = line_closed_form({z, 0.0});
        CHECK(std::abs(v.value - expect) <= 1e-10);
        CHECK(std::abs(v.value - expect) <= v.error_bound);
    }
    // z = 0.6 is the worked value 1/sqrt(1-0.36) = 1.25
    auto v = ev.evaluate(o, o, ComplexPoint(0.6, 0.0));
    CHECK(v.value.real() == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("line green function continues analytically off the reals") {
    GreenEvaluator& ev = line_evaluator();
    VertexRef o = VertexRef::parse("0:e:o");
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> re(-10.0, 10.0), im(0.1, 5.0);
    for (int k = 0; k < 50; ++k) {
        double x = re(rng);
        double y = im(rng) * (k % 2 ? 1.0 : -1.0);
        auto v = ev.evaluate(o, o, ComplexPoint(x, y));
        auto expect = line_closed_form({x, y});
        CHECK(std::abs(v.value - expect) <= 1e-8);
    }
    // the worked off-axis point
    auto v = ev.evaluate(o, o, ComplexPoint(2.0, 0.5));
    CHECK(std::abs(v.value - line_closed_form({2.0, 0.5})) <= 1e-8);
}

TEST_CASE("off-origin pairs match the closed form for the line") {
    GreenEvaluator& ev = line_evaluator();
    VertexRef o = VertexRef::parse("0:e:o");
    VertexRef m = VertexRef::parse("1:0:m");   // distance 1 from the origin
    VertexRef b1 = VertexRef::parse("1:0:b1"); // distance 2 from the origin
    std::complex<double> z(0.6, 0.0);
    auto s = std::sqrt(std::complex<double>(1.0, 0.0) - z * z);
    auto ratio = (1.0 - s) / z;  // F(0,1|z) on the integer line
    auto g_om = ev.evaluate(o, m, ComplexPoint(z));
    CHECK(std::abs(g_om.value - ratio / s) <= 1e-10);
    auto g_ob = ev.evaluate(o, b1, ComplexPoint(z));
    CHECK(std::abs(g_ob.value - ratio * ratio / s) <= 1e-10);
    auto g_mm = ev.evaluate(m, m, ComplexPoint(z));
    CHECK(std::abs(g_mm.value - 1.0 / s) <= 1e-10);
    // an interior pair across the origin: both at distance 1, graph distance 2
    VertexRef m_other = VertexRef::parse("1:1:m");
    auto g_mm2 = ev.evaluate(m, m_other, ComplexPoint(z));
    CHECK(std::abs(g_mm2.value - ratio * ratio / s) <= 1e-10);
}

TEST_CASE("green value at z=0 is the Kronecker delta") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        GreenEvaluator ev(spec, compute_transfer(spec));
        VertexRef o = VertexRef::parse("0:e:o");
        auto self_value = ev.evaluate(o, o, ComplexPoint(0.0, 0.0));
        CHECK(std::abs(self_value.value - 1.0) <= 1e-12);
        VertexRef other = VertexRef::parse(std::string("1:0:") + spec.vertices[spec.clique_ids[0][1]]);
        auto cross = ev.evaluate(o, other, ComplexPoint(0.0, 0.0));
        CHECK(std::abs(cross.value) <= 1e-12);
    }
}

TEST_CASE("functional equation residual is within combined bounds") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        GreenEvaluator ev(spec, compute_transfer(spec));
        VertexRef o = VertexRef::parse("0:e:o");
        for (double z : {0.3, 0.25, -0.2, 0.1}) {
            auto r = ev.functional_equation_residual(o, o, ComplexPoint(z, 0.0));
            CHECK(r.residual <= r.combined_bound);
            CHECK(r.residual <= 1e-10);
        }
    }
}

TEST_CASE("resolvent column identity at base points on all bundled specs") {
    // G(x,y|w) = [x=y] + w sum_v p(x,v) G(v,y|w), sampled at 10 base points
    // with x = y = o; the neighbours of o are the cell-neighbours of the
    // origin vertex in each glued copy.
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        GreenEvaluator ev(spec, compute_transfer(spec));
        VertexRef o = VertexRef::parse("0:e:o");
        FiniteGraph cell = spec.cell_graph();
        std::vector<VertexRef> neighbors;
        for (int c = 0; c < *spec.star_multiplicity; ++c)
            for (int u : cell.neighbors(spec.origin_vertex_id)) {
                VertexRef ref;
                ref.level = 1;
                ref.address = {c};
                ref.local = spec.vertices[u];
                neighbors.push_back(ref);
            }
        REQUIRE(static_cast<int>(neighbors.size()) == ev.x_degree(o));
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> dist(-0.5, 0.5);
        for (int k = 0; k < 10; ++k) {
            std::complex<double> w(dist(rng), dist(rng) * 0.5);
            auto g_oo = ev.evaluate(o, o, ComplexPoint(w));
            std::complex<double> sum = 0.0;
            double bound = g_oo.error_bound + 1e-12;
            for (const auto& v : neighbors) {
                auto g_vo = ev.evaluate(v, o, ComplexPoint(w));
                sum += g_vo.value;
                bound += std::abs(w) / neighbors.size() * g_vo.error_bound;
            }
            std::complex<double> rhs = 1.0 + w * sum / static_cast<double>(neighbors.size());
            CHECK(std::abs(g_oo.value - rhs) <= bound);
        }
    }
}

TEST_CASE("reversibility with infinite-graph degrees") {
    CellSpec spec = load_valid("sierpinski.json");
    GreenEvaluator ev(spec, compute_transfer(spec));
    VertexRef o = VertexRef::parse("0:e:o");
    VertexRef ab = VertexRef::parse("1:0:ab");
    VertexRef b = VertexRef::parse("1:0:b");
    CHECK(ev.x_degree(o) == 4);   // 2 cells x (theta-1)
    CHECK(ev.x_degree(ab) == 4);  // interior vertex of the cell
    CHECK(ev.x_degree(b) == 4);   // boundary vertex, two cells in X
    for (double z : {0.3, 0.2}) {
        auto fwd = ev.evaluate(o, ab, ComplexPoint(z, 0.0));
        auto bwd = ev.evaluate(ab, o, ComplexPoint(z, 0.0));
        double lhs = ev.x_degree(o) * fwd.value.real();
        double rhs = ev.x_degree(ab) * bwd.value.real();
        CHECK(std::abs(lhs - rhs) <=
              ev.x_degree(o) * fwd.error_bound + ev.x_degree(ab) * bwd.error_bound + 1e-10);
    }
}

TEST_CASE("conjugate symmetry") {
    GreenEvaluator& ev = line_evaluator();
    VertexRef o = VertexRef::parse("0:e:o");
    for (std::complex<double> z : {std::complex<double>(0.3, 0.2),
                                   std::complex<double>(2.0, 1.0),
                                   std::complex<double>(-4.0, 0.7)}) {
        auto plus = ev.evaluate(o, o, ComplexPoint(z));
        auto minus = ev.evaluate(o, o, ComplexPoint(std::conj(z)));
        CHECK(std::abs(std::conj(plus.value) - minus.value) <=
              plus.error_bound + minus.error_bound + 1e-12);
    }
}

TEST_CASE("continuation is independent of the base radius") {
    GreenEvaluator& ev = line_evaluator();
    VertexRef o = VertexRef::parse("0:e:o");
    GreenOptions half;
    GreenOptions quarter;
    quarter.base_radius = 0.25;
    for (std::complex<double> z : {std::complex<double>(3.0, 0.4),
                                   std::complex<double>(0.8, 0.0),
                                   std::complex<double>(-6.0, 2.0)}) {
        auto a = ev.evaluate(o, o, ComplexPoint(z), half);
        auto b = ev.evaluate(o, o, ComplexPoint(z), quarter);
        CHECK(std::abs(a.value - b.value) <= a.error_bound + b.error_bound);
    }
}

TEST_CASE("half-plane branches agree at real Fatou points of a cantor-like cell") {
    CellSpec spec = load_valid("sierpinski.json");
    GreenEvaluator ev(spec, compute_transfer(spec));
    VertexRef o = VertexRef::parse("0:e:o");
    // 3.0 lies in the gap of the Sierpinski Julia set (forward orbit
    // converges), so both half-plane limits must agree there.
    double x = 3.0;
    auto from_above = ev.evaluate(o, o, ComplexPoint(x, 1e-7));
    auto from_below = ev.evaluate(o, o, ComplexPoint(x, -1e-7));
    auto on_axis = ev.evaluate(o, o, ComplexPoint(x, 0.0));
    CHECK(std::abs(from_above.value - from_below.value) <= 1e-6);
    CHECK(std::abs(from_above.value - on_axis.value) <= 1e-6);
}

TEST_CASE("julia points are rejected as not-in-basin") {
    GreenEvaluator& ev = line_evaluator();
    VertexRef o = VertexRef::parse("0:e:o");
    CHECK_THROWS_AS(ev.evaluate(o, o, ComplexPoint(1.5, 0.0)), NotInBasin);
}

TEST_CASE("pole hits along the orbit are reported as candidate D points") {
    GreenEvaluator& ev = line_evaluator();
    VertexRef o = VertexRef::parse("0:e:o");
    // sqrt(2) is a pole of f and of d: the first factor evaluation blows up
    CHECK_THROWS_AS(ev.evaluate(o, o, ComplexPoint(std::sqrt(2.0), 0.0)), Error);
}

TEST_CASE("singularity probe: line exponent -1/2, monotone divergence") {
    GreenEvaluator& ev = line_evaluator();
    VertexRef o = VertexRef::parse("0:e:o");
    auto probe = ev.singularity_probe(o, o, 18);
    CHECK(probe.monotone_increasing);
    CHECK(probe.fitted_exponent == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(std::abs(probe.fitted_exponent + 0.5) <= 0.05);
    CHECK(probe.polar_fit_rejected);
    CHECK(probe.first_passage_partial > 0.9);
    CHECK(probe.first_passage_partial <= 1.0);
}

TEST_CASE("shell conductances stay bounded") {
    CellSpec line = load_valid("line2.json");
    auto report = shell_conductance_check(line, 8);
    CHECK(report.one_dimensional);
    CHECK(report.bounded);
    REQUIRE(report.crossing_edges.size() == 8);
    for (auto a : report.crossing_edges) CHECK(a == 2);

    CellSpec sierpinski = load_valid("sierpinski.json");
    auto rs = shell_conductance_check(sierpinski, 6);
    CHECK(rs.one_dimensional);
    CHECK(rs.bounded);
}
