#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "selfsim/cellspec.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/transfer.hpp"

using namespace selfsim;

namespace {

CellSpec load_valid(const std::string& name) {
    CellSpec spec = load_cell_spec(std::string(SELFSIM_DATA_DIR) + "/" + name);
    auto report = validate_spec(spec);
    REQUIRE(report.ok());
    return spec;
}

bool contains_point(const std::vector<ComplexPoint>& pts, double re, double tol = 1e-8) {
    return std::any_of(pts.begin(), pts.end(), [&](const ComplexPoint& p) {
        return !p.is_inf && std::abs(p.re - re) <= tol && std::abs(p.im) <= tol;
    });
}

} // namespace

TEST_CASE("line transfer functions in closed form") {
    CellSpec line = load_valid("line2.json");
    TransferSet t = compute_transfer(line);
    CHECK(t.d == RationalFunction(Polynomial{0, 0, 1}, Polynomial{2, 0, -1}));
    CHECK(t.f == RationalFunction(Polynomial{2}, Polynomial{2, 0, -1}));
    CHECK(t.theta == 2);
    CHECK(t.diam_boundary == 2);

    int m = line.vertex_index("m");
    int b0 = line.vertex_index("b0");
    int b1 = line.vertex_index("b1");
    CHECK(t.h_of(m, b0) == RationalFunction(Polynomial{0, 1}, Polynomial{2}));
    CHECK(t.h_of(m, m) == RationalFunction(Rat(1)));
    CHECK(t.h_of(m, b1) == RationalFunction(Polynomial{0, 1}, Polynomial{2}));

    CHECK(t.poles_cell.empty());
    CHECK(t.zeroes_f.empty());
    REQUIRE(t.poles_f.size() == 2);
    CHECK(contains_point(t.poles_f, std::sqrt(2.0)));
    CHECK(contains_point(t.poles_f, -std::sqrt(2.0)));
}

TEST_CASE("sierpinski transfer functions match the classical decimation pair") {
    CellSpec spec = load_valid("sierpinski.json");
    TransferSet t = compute_transfer(spec);
    // d = z^2/(4-3z): the classical Sierpinski map with d'(1) = 5
    CHECK(t.d == RationalFunction(Polynomial{0, 0, 1}, Polynomial{4, -3}));
    // f = (2-z)(z+4) / ((z+2)(4-3z))
    RationalFunction f_expect(Polynomial{2, -1} * Polynomial{4, 1},
                              Polynomial{2, 1} * Polynomial{4, -3});
    CHECK(t.f == f_expect);
    CHECK(t.diam_boundary == 2);
    CHECK(*t.d.derivative().eval_exact(Rat(1)) == 5);

    // h golden values, from the 6-vertex cell with absorbing {a,b,c}:
    // h(ab,a) = 2z/(8-2z-z^2), h(ab,c) = z^2/(8-2z-z^2),
    // h(ab,ab) = (8-2z)/(8-2z-z^2)
    int a = spec.vertex_index("a");
    int c = spec.vertex_index("c");
    int ab = spec.vertex_index("ab");
    Polynomial den{8, -2, -1};
    CHECK(t.h_of(ab, a) == RationalFunction(Polynomial{0, 2}, den));
    CHECK(t.h_of(ab, c) == RationalFunction(Polynomial{0, 0, 1}, den));
    CHECK(t.h_of(ab, ab) == RationalFunction(Polynomial{8, -2}, den));

    // zeroes(f) = {-4, 2} and poles(C-hat) = {-4, 2}; poles(f) = {-2, 4/3}
    REQUIRE(t.zeroes_f.size() == 2);
    CHECK(contains_point(t.zeroes_f, -4.0));
    CHECK(contains_point(t.zeroes_f, 2.0));
    REQUIRE(t.poles_cell.size() == 2);
    CHECK(contains_point(t.poles_cell, -4.0));
    CHECK(contains_point(t.poles_cell, 2.0));
    REQUIRE(t.poles_f.size() == 2);
    CHECK(contains_point(t.poles_f, -2.0));
    CHECK(contains_point(t.poles_f, 4.0 / 3.0));
}

TEST_CASE("vicsek transfer functions golden values") {
    CellSpec spec = load_valid("vicsek.json");
    TransferSet t = compute_transfer(spec);
    // d = z^3 / ((3-2z)(12-12z+z^2)), f = 3(2-z)(18-15z+z^2) / ((3+z)(3-2z)(12-12z+z^2))
    Polynomial den_d = Polynomial{3, -2} * Polynomial{12, -12, 1};
    CHECK(t.d == RationalFunction(Polynomial{0, 0, 0, 1}, den_d));
    RationalFunction f_expect(Polynomial{3} * Polynomial{2, -1} * Polynomial{18, -15, 1},
                              Polynomial{3, 1} * den_d);
    CHECK(t.f == f_expect);
    CHECK(t.diam_boundary == 3);
    CHECK(*t.d.derivative().eval_exact(Rat(1)) == 15);

    // poles(C-hat) = {-3, 2, (15 +- 3 sqrt 17)/2}
    double s17 = std::sqrt(17.0);
    REQUIRE(t.poles_cell.size() == 4);
    CHECK(contains_point(t.poles_cell, -3.0));
    CHECK(contains_point(t.poles_cell, 2.0));
    CHECK(contains_point(t.poles_cell, (15.0 - 3.0 * s17) / 2.0));
    CHECK(contains_point(t.poles_cell, (15.0 + 3.0 * s17) / 2.0));
    // poles(f) = {-3, 3/2, 6 +- 2 sqrt 6}
    double s6 = std::sqrt(6.0);
    REQUIRE(t.poles_f.size() == 4);
    CHECK(contains_point(t.poles_f, -3.0));
    CHECK(contains_point(t.poles_f, 1.5));
    CHECK(contains_point(t.poles_f, 6.0 - 2.0 * s6));
    CHECK(contains_point(t.poles_f, 6.0 + 2.0 * s6));
}

TEST_CASE("fixed point certificates") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        TransferSet t = compute_transfer(spec);
        auto fp = check_fixed_points(t);
        CHECK(fp.ok);
        CHECK(fp.order_at_zero == t.diam_boundary);
        CHECK(fp.d_fixes_one);
        CHECK(fp.d_prime_at_one > 2);
    }
}

TEST_CASE("zeroes of f lie among the poles of the inner transition functions") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        TransferSet t = compute_transfer(spec);
        CHECK(check_zeroes_lemma(t));
    }
}

TEST_CASE("first passage identity F-hat = 1 - 1/f holds exactly") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        TransferSet t = compute_transfer(spec);
        CHECK(first_passage_identity(spec, t));
    }
    // and the line value is z^2/2 explicitly
    CellSpec line = load_valid("line2.json");
    TransferSet t = compute_transfer(line);
    RationalFunction expected = RationalFunction(Rat(1)) - RationalFunction(Rat(1)) / t.f;
    CHECK(expected == RationalFunction(Polynomial{0, 0, 1}, Polynomial{2}));
}

TEST_CASE("transfer series coefficients are probabilities") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        TransferSet t = compute_transfer(spec);
        auto d_series = t.d.series_coefficients(30);
        Rat total(0);
        for (const auto& c : d_series) {
            CHECK(c >= 0);
            total += c;
        }
        CHECK(total <= 1);
        auto f_series = t.f.series_coefficients(30);
        for (const auto& c : f_series) {
            CHECK(c >= 0);
            CHECK(c <= 1);
        }
    }
}

TEST_CASE("h-tilde reversibility") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        TransferSet t = compute_transfer(spec);
        for (int w : spec.boundary_ids) {
            for (int y : t.interior) {
                RationalFunction lhs = t.h_tilde(w, y) * RationalFunction(Rat(t.cell_degrees[w]));
                RationalFunction rhs = t.h_of(y, w) * RationalFunction(Rat(t.cell_degrees[y]));
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("pole sets are real and outside the open unit interval") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        TransferSet t = compute_transfer(spec);
        auto all = t.exceptional_seeds();
        for (const auto& p : all) {
            CHECK(p.is_real());
            CHECK(p.abs() >= 1.0 - 1e-9);
        }
    }
}

TEST_CASE("substitution map permutations leave the transfer set unchanged") {
    CellSpec spec = load_valid("sierpinski.json");
    TransferSet base = compute_transfer(spec);
    // permute the substitution map of clique 1 (any bijection is valid)
    CellSpec permuted = load_valid("sierpinski.json");
    std::rotate(permuted.substitution_maps[1].begin(), permuted.substitution_maps[1].begin() + 1,
                permuted.substitution_maps[1].end());
    auto report = validate_spec(permuted);
    // rotating may break the origin-fix only for the origin clique; clique 1 is safe
    REQUIRE(report.ok());
    TransferSet other = compute_transfer(permuted);
    CHECK(base.d == other.d);
    CHECK(base.f == other.f);
    CHECK(base.h == other.h);
}

TEST_CASE("inconsistent spec without double symmetry is refused") {
    CellSpec spec = parse_cell_spec(R"({
        "name": "lopsided", "theta": 2,
        "vertices": ["b0", "m", "n", "p", "b1"],
        "boundary": ["b0", "b1"],
        "cliques": [["b0", "m"], ["m", "n"], ["n", "b1"], ["m", "p"]],
        "origin_clique": 0,
        "substitution_maps": [["b0", "m"], ["m", "n"], ["n", "b1"], ["m", "p"]]
    })");
    auto report = validate_spec(spec);
    REQUIRE(report.ok());
    CHECK_THROWS_AS(compute_transfer(spec), SpecError);
}
