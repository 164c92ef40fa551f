#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "selfsim/cellspec.hpp"
#include "selfsim/ncell.hpp"
#include "selfsim/oracle.hpp"
#include "selfsim/resolvent.hpp"
#include "selfsim/transfer.hpp"

using namespace selfsim;

namespace {

CellSpec load_valid(const std::string& name) {
    CellSpec spec = load_cell_spec(std::string(SELFSIM_DATA_DIR) + "/" + name);
    auto report = validate_spec(spec);
    REQUIRE(report.ok());
    return spec;
}

// Independent oracle for closed-walk coefficients on the integer line:
// p^(2k)(0,0) = C(2k,k)/4^k.
Rat central_binomial_walk(int steps) {
    if (steps % 2 != 0) return Rat(0);
    int k = steps / 2;
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), 2 * k, k);
    mpz_class pow4;
    mpz_ui_pow_ui(pow4.get_mpz_t(), 4, k);
    Rat r(binom, pow4);
    r.canonicalize();
    return r;
}

} // namespace

TEST_CASE("green_ncell base cases reproduce d, f and h on the line") {
    CellSpec line = load_valid("line2.json");
    FiniteGraph cell = line.cell_graph();
    int b0 = line.vertex_index("b0");
    int b1 = line.vertex_index("b1");
    int m = line.vertex_index("m");

    AbsorbingWalkProblem to_b1{cell, {b1}, b0, b1};
    CHECK(green_ncell(to_b1) == RationalFunction(Polynomial{0, 0, 1}, Polynomial{2, 0, -1}));

    AbsorbingWalkProblem both{cell, {b0, b1}, m, b0};
    CHECK(green_ncell(both) == RationalFunction(Polynomial{0, 1}, Polynomial{2}));

    // n = 2: the direct 5-vertex solve equals d(d(z))
    FiniteGraph l2 = build_ncell(line, 2);
    AbsorbingWalkProblem second{l2, {b1}, b0, b1};
    CHECK(green_ncell(second) ==
          RationalFunction(Polynomial{0, 0, 0, 0, 1}, Polynomial{8, 0, -8, 0, 1}));
}

TEST_CASE("resolvent identity (I - zQ_B) G = I on bundled cells") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        FiniteGraph cell = spec.cell_graph();
        auto q = absorbing_walk_matrix(cell, spec.boundary_ids);
        int n = cell.vertex_count();
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i;
        auto inverse = solve_resolvent(q, all, all);
        // M = I - zQ as dense rational functions
        std::vector<std::vector<RationalFunction>> m(n, std::vector<RationalFunction>(n));
        for (int i = 0; i < n; ++i) m[i][i] = RationalFunction(Rat(1));
        Polynomial minus_z = Polynomial::monomial(Rat(-1), 1);
        for (const auto& e : q.entries)
            m[e.row][e.col] += RationalFunction(Polynomial(e.value) * minus_z);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                RationalFunction acc;
                for (int k = 0; k < n; ++k) acc += m[i][k] * inverse[k][j];
                CHECK(acc == RationalFunction(Rat(i == j ? 1 : 0)));
            }
        }
    }
}

TEST_CASE("walk reversibility deg(x) G(x,y) = deg(y) G(y,x) off the absorbing set") {
    CellSpec spec = load_valid("sierpinski.json");
    FiniteGraph cell = spec.cell_graph();
    // absorb only one boundary vertex so non-absorbing pairs exist
    std::vector<int> absorbing{spec.boundary_ids[0]};
    auto q = absorbing_walk_matrix(cell, absorbing);
    int n = cell.vertex_count();
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    auto g = solve_resolvent(q, all, all);
    for (int x = 0; x < n; ++x) {
        if (x == absorbing[0]) continue;
        for (int y = 0; y < n; ++y) {
            if (y == absorbing[0]) continue;
            CHECK(g[x][y] * RationalFunction(Rat(cell.degree(x))) ==
                  g[y][x] * RationalFunction(Rat(cell.degree(y))));
        }
    }
}

TEST_CASE("decimation identities hold exactly to level 3 on line and sierpinski") {
    for (const char* name : {"line2.json", "sierpinski.json"}) {
        CellSpec spec = load_valid(name);
        auto report = verify_decimation_identities(spec, 3);
        CHECK(report.all_ok);
        CHECK(report.levels_verified == 3);
        for (const auto& level : report.levels) {
            CHECK(level.transition_identity);
            CHECK(level.return_identity);
            CHECK(level.inner_identity);
        }
    }
}

TEST_CASE("decimation identities hold exactly to level 2 on vicsek") {
    CellSpec spec = load_valid("vicsek.json");
    auto report = verify_decimation_identities(spec, 2);
    CHECK(report.all_ok);
    CHECK(report.levels_verified == 2);
}

TEST_CASE("identities still hold after permuting a substitution map") {
    CellSpec spec = load_valid("sierpinski.json");
    std::rotate(spec.substitution_maps[2].begin(), spec.substitution_maps[2].begin() + 1,
                spec.substitution_maps[2].end());
    auto report = validate_spec(spec);
    REQUIRE(report.ok());
    auto dec = verify_decimation_identities(spec, 2);
    CHECK(dec.all_ok);
}

TEST_CASE("walk series on the two-sided line matches central binomials") {
    CellSpec line = load_valid("line2.json");
    auto ob = build_origin_approximation(line, 4, OriginMode::origin_vertex);
    auto series = walk_series(ob.graph, ob.origin, ob.origin, 8);
    for (int k = 0; k <= 8; ++k) CHECK(series[k] == central_binomial_walk(k));
    CHECK(series[0] == 1);
    CHECK(series[2] == Rat(1, 2));
    CHECK(series[4] == Rat(3, 8));
}

TEST_CASE("one-step walk series basics on any cell") {
    CellSpec spec = load_valid("vicsek.json");
    FiniteGraph cell = spec.cell_graph();
    int x = spec.clique_ids[0][0];
    int y = spec.clique_ids[0][1];
    auto series = walk_series(cell, x, y, 1);
    CHECK(series[0] == 0);
    CHECK(series[1] == Rat(1, cell.degree(x)));
    auto self_series = walk_series(cell, x, x, 0);
    CHECK(self_series[0] == 1);
}

TEST_CASE("functional equation series check passes on all bundled specs") {
    for (const char* name : {"line2.json", "sierpinski.json", "vicsek.json"}) {
        CellSpec spec = load_valid(name);
        auto report = functional_equation_series_check(spec, 12);
        CHECK(report.all_ok);
        for (const auto& pair : report.pairs) {
            CHECK(pair.match);
            CHECK(pair.first_mismatch == -1);
        }
    }
}

TEST_CASE("series helpers: multiply and compose truncations") {
    // (1+z)^2 = 1+2z+z^2
    std::vector<Rat> one_z{Rat(1), Rat(1)};
    auto sq = series_multiply(one_z, one_z, 4);
    CHECK(sq[0] == 1);
    CHECK(sq[1] == 2);
    CHECK(sq[2] == 1);
    CHECK(sq[3] == 0);
    // compose 1/(1-u) with u = z^2: 1 + z^2 + z^4
    std::vector<Rat> geom{Rat(1), Rat(1), Rat(1), Rat(1), Rat(1)};
    std::vector<Rat> zsq{Rat(0), Rat(0), Rat(1)};
    auto comp = series_compose(geom, zsq, 4);
    CHECK(comp[0] == 1);
    CHECK(comp[2] == 1);
    CHECK(comp[4] == 1);
    CHECK(comp[1] == 0);
}
