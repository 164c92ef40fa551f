// Command-line front end: validation, transfer functions, oracle checks,
// dynamics, spectrum bounds, Green evaluation and recurrence probes for
// symmetrically self-similar graphs given by a cell-spec file.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "selfsim/cellspec.hpp"
#include "selfsim/dynamics.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/green.hpp"
#include "selfsim/ncell.hpp"
#include "selfsim/oracle.hpp"
#include "selfsim/transfer.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace selfsim;
using nlohmann::json;

struct GlobalOptions {
    int precision_bits = 53;
    unsigned seed = 0;
    std::string out_dir;
    bool machine_json = false;
    bool high_precision() const { return precision_bits > 53; }
};

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecError("cannot open " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[65536];
    while (in.good()) {
        in.read(buf, sizeof buf);
        EVP_DigestUpdate(ctx, buf, in.gcount());
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return os.str();
}

std::string run_header(const std::string& spec_path, const GlobalOptions& g,
                       const std::string& params) {
    std::ostringstream os;
    os << "# selfsim " << kVersion << " | spec=" << std::filesystem::path(spec_path).filename().string()
       << " sha256=" << sha256_file(spec_path) << " | seed=" << g.seed << " | " << params << "\n";
    return os.str();
}

CellSpec load_and_validate(const std::string& path, bool print_report = false) {
    CellSpec spec = load_cell_spec(path);
    auto report = validate_spec(spec);
    if (print_report || !report.ok()) std::cout << report.to_string();
    if (!report.ok()) throw SpecError("spec validation failed: " + path);
    return spec;
}

json ratfun_json(const RationalFunction& r) {
    // Integer-pair arrays: scale both polynomials by the common denominator
    // lcm; coefficients are decimal strings (they can exceed 64 bits).
    auto scaled = [](const Polynomial& p) {
        mpz_class lcm(1);
        for (const auto& c : p.coeffs())
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
        json arr = json::array();
        for (const auto& c : p.coeffs()) {
            mpz_class v = c.get_num() * (lcm / c.get_den());
            arr.push_back(v.get_str());
        }
        return std::pair<json, std::string>(arr, lcm.get_str());
    };
    auto [nc, ns] = scaled(r.num());
    auto [dc, ds] = scaled(r.den());
    return {{"numerator", nc},
            {"numerator_scale", ns},
            {"denominator", dc},
            {"denominator_scale", ds},
            {"display", r.to_string()}};
}

json points_json(const std::vector<ComplexPoint>& pts) {
    json arr = json::array();
    for (const auto& p : pts) {
        if (p.is_inf)
            arr.push_back("inf");
        else
            arr.push_back({{"re", p.re}, {"im", p.im}});
    }
    return arr;
}

std::ofstream open_output(const GlobalOptions& g, const std::string& name) {
    std::filesystem::path dir = g.out_dir.empty() ? "." : g.out_dir;
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw SpecError("cannot write " + (dir / name).string());
    return out;
}

void write_orbit_csv(std::ofstream& out, const std::string& header, const OrbitTree& tree,
                     const char* kind) {
    out << header;
    out << "re,im,depth,kind\n";
    out << std::setprecision(17);
    for (const auto& p : tree.points) {
        if (p.z.is_inf)
            out << "inf,0," << p.depth << "," << kind << "\n";
        else
            out << p.z.re << "," << p.z.im << "," << p.depth << "," << kind << "\n";
    }
}

int cmd_validate(const std::string& path, const GlobalOptions& g) {
    CellSpec spec = load_cell_spec(path);
    auto report = validate_spec(spec);
    std::cout << run_header(path, g, "cmd=validate");
    std::cout << report.to_string();
    if (report.ok()) {
        auto sym = check_symmetry(spec);
        auto bg = check_bounded_geometry(spec);
        std::cout << "cell: " << spec.name << " theta=" << spec.theta << " mu=" << spec.mu()
                  << " vertices=" << spec.vertex_count() << "\n";
        std::cout << "simply symmetric (S2): " << (sym.simply_symmetric ? "pass" : "FAIL") << "\n";
        std::cout << "doubly symmetric (S3): " << (sym.doubly_symmetric ? "pass" : "FAIL") << "\n";
        std::cout << "bounded geometry:      " << (bg.bounded ? "pass" : "FAIL") << "\n";
        if (g.machine_json) {
            json out{{"name", spec.name},
                     {"theta", spec.theta},
                     {"mu", spec.mu()},
                     {"simply_symmetric", sym.simply_symmetric},
                     {"doubly_symmetric", sym.doubly_symmetric},
                     {"bounded_geometry", bg.bounded},
                     {"issues", json::array()}};
            std::cout << out.dump(2) << "\n";
        }
        if (!sym.doubly_symmetric || !bg.bounded) return 1;
        return 0;
    }
    json axioms = json::array();
    for (const auto& issue : report.issues)
        axioms.push_back({{"axiom", issue.axiom}, {"message", issue.message}});
    if (g.machine_json) std::cout << json{{"issues", axioms}}.dump(2) << "\n";
    return 1;
}

int cmd_functions(const std::string& path, const GlobalOptions& g) {
    CellSpec spec = load_and_validate(path);
    TransferSet t = compute_transfer(spec);
    std::cout << run_header(path, g, "cmd=functions");
    auto coeff_list = [](const Polynomial& p) {
        std::string out = "[";
        for (int k = 0; k <= p.degree(); ++k)
            out += (k ? ", " : "") + p.coeff(k).get_str();
        return out + "]";
    };
    auto [dn, dd] = t.d.display_form();
    auto [fn, fd] = t.f.display_form();
    std::cout << "d(z) = " << t.d.to_string() << "\n";
    std::cout << "     num coeffs " << coeff_list(dn) << ", den coeffs " << coeff_list(dd)
              << "\n";
    std::cout << "f(z) = " << t.f.to_string() << "\n";
    std::cout << "     num coeffs " << coeff_list(fn) << ", den coeffs " << coeff_list(fd)
              << "\n";
    std::cout << "ord_0(d) = " << t.d.num().valuation() << ", diam(thetaC) = " << t.diam_boundary
              << ", d'(1) = " << check_fixed_points(t).d_prime_at_one.get_str() << "\n";
    std::cout << "h entries (x interior, y in the closed cell):\n";
    for (size_t i = 0; i < t.interior.size(); ++i) {
        int x = t.interior[i];
        for (int y = 0; y < spec.vertex_count(); ++y) {
            if (t.h[i][y].is_zero()) continue;
            std::cout << "  h(" << spec.vertices[x] << "," << spec.vertices[y]
                      << ") = " << t.h[i][y].to_string() << "\n";
        }
    }
    auto print_points = [](const char* label, const std::vector<ComplexPoint>& pts) {
        std::cout << label << " = {";
        for (size_t i = 0; i < pts.size(); ++i) std::cout << (i ? ", " : "") << pts[i].to_string();
        std::cout << "}\n";
    };
    print_points("poles(f)", t.poles_f);
    print_points("zeroes(f)", t.zeroes_f);
    print_points("poles(C-hat)", t.poles_cell);
    if (g.machine_json) {
        json h = json::array();
        for (size_t i = 0; i < t.interior.size(); ++i)
            for (int y = 0; y < spec.vertex_count(); ++y)
                if (!t.h[i][y].is_zero())
                    h.push_back({{"x", spec.vertices[t.interior[i]]},
                                 {"y", spec.vertices[y]},
                                 {"value", ratfun_json(t.h[i][y])}});
        json out{{"d", ratfun_json(t.d)},
                 {"f", ratfun_json(t.f)},
                 {"h", h},
                 {"poles_f", points_json(t.poles_f)},
                 {"zeroes_f", points_json(t.zeroes_f)},
                 {"poles_cell", points_json(t.poles_cell)}};
        auto out_file = open_output(g, spec.name + "_functions.json");
        out_file << out.dump(2) << "\n";
        std::cout << "machine-readable output written to " << spec.name << "_functions.json\n";
    }
    return 0;
}

int cmd_oracle(const std::string& path, const GlobalOptions& g, int level, int order) {
    CellSpec spec = load_and_validate(path);
    std::cout << run_header(path, g,
                            "cmd=oracle level=" + std::to_string(level) +
                                " order=" + std::to_string(order));
    auto dec = verify_decimation_identities(spec, level);
    bool ok = dec.all_ok;
    for (const auto& lv : dec.levels) {
        std::cout << "level " << lv.level << ": transition "
                  << (lv.transition_identity ? "exact" : "FAIL") << ", return "
                  << (lv.return_identity ? "exact" : "FAIL") << ", inner "
                  << (lv.inner_identity ? "exact" : "FAIL") << "\n";
    }
    if (!dec.details.empty()) std::cout << dec.details << "\n";
    auto series = functional_equation_series_check(spec, order);
    for (const auto& pair : series.pairs) {
        std::cout << "functional equation " << pair.label << ": "
                  << (pair.match ? "coefficients agree" : "MISMATCH") << " to order "
                  << series.order;
        if (!pair.match) {
            std::cout << "; first mismatch at k=" << pair.first_mismatch << ": "
                      << pair.lhs_at_mismatch << " vs " << pair.rhs_at_mismatch;
            ok = false;
        }
        std::cout << "\n";
    }
    std::cout << "approximation level used: " << series.approximation_level << "\n";
    return ok ? 0 : 2;
}

int cmd_dynamics(const std::string& path, const GlobalOptions& g, int depth,
                 std::int64_t budget, double window) {
    CellSpec spec = load_and_validate(path);
    TransferSet t = compute_transfer(spec);
    std::string params = "cmd=dynamics depth=" + std::to_string(depth) +
                         " budget=" + std::to_string(budget) +
                         " precision=" + std::to_string(g.precision_bits);
    std::cout << run_header(path, g, params);
    auto julia = approximate_julia(t, depth, 1e-9, budget, window, g.high_precision());
    auto exc = exceptional_set(t, depth, 1e-9, budget, g.high_precision());
    std::cout << "julia approximation: " << julia.points.size() << " real points"
              << (julia.has_infinity ? " + infinity" : "") << ", depth " << depth << "\n";
    std::cout << "realness violations: " << julia.realness_violations
              << (julia.truncated ? " (budget truncated)" : "") << "\n";
    std::cout << "largest interior gap in [-" << window << "," << window
              << "]: " << julia.gaps.final_gap() << "\n";
    auto cls = classify_julia(julia);
    std::cout << "classification (heuristic): " << to_string(cls.verdict) << "\n  " << cls.evidence
              << "\n";
    std::cout << "exceptional set: " << exc.points.size() << " points, max residual "
              << exc.max_residual << (exc.truncated ? " (budget truncated)" : "") << "\n";

    OrbitTree julia_tree =
        backward_orbit(t.d, {ComplexPoint(1.0, 0.0)}, depth, 1e-9, budget, g.high_precision());
    auto jf = open_output(g, spec.name + "_julia.csv");
    write_orbit_csv(jf, run_header(path, g, params), julia_tree, "julia");
    auto ef = open_output(g, spec.name + "_exceptional.csv");
    write_orbit_csv(ef, run_header(path, g, params), exc, "exceptional");
    std::cout << "points written to " << spec.name << "_julia.csv and " << spec.name
              << "_exceptional.csv\n";
    if (g.machine_json) {
        json out{{"julia_points", julia.points.size()},
                 {"julia_has_infinity", julia.has_infinity},
                 {"realness_violations", julia.realness_violations},
                 {"gap_by_depth", julia.gaps.gap_by_depth},
                 {"classification", to_string(cls.verdict)},
                 {"exceptional_points", exc.points.size()},
                 {"max_residual", exc.max_residual}};
        auto out_file = open_output(g, spec.name + "_dynamics.json");
        out_file << out.dump(2) << "\n";
    }
    return 0;
}

int cmd_spectrum(const std::string& path, const GlobalOptions& g, int depth,
                 std::int64_t budget, double window) {
    CellSpec spec = load_and_validate(path);
    TransferSet t = compute_transfer(spec);
    std::string params =
        "cmd=spectrum depth=" + std::to_string(depth) + " window=" + std::to_string(window);
    std::cout << run_header(path, g, params);
    auto report = spectrum_bounds(t, depth, 1e-9, budget, window, g.high_precision());
    std::cout << "reciprocal spectrum bounds (spec^-1 P):\n";
    std::cout << "  inner (Julia approximation): " << report.reciprocal_inner.size()
              << " points, largest gap in window " << report.inner_gap << "\n";
    std::cout << "  outer (Julia + truncated D): " << report.reciprocal_outer.size()
              << " points, largest gap in window " << report.outer_gap << "\n";
    auto minmax = [](const std::vector<double>& v) {
        return v.empty() ? std::pair<double, double>(0, 0)
                         : std::pair<double, double>(v.front(), v.back());
    };
    auto [lo, hi] = minmax(report.laplacian_outer);
    std::cout << "laplacian form (spec Delta, via 1 - 1/z): " << report.laplacian_outer.size()
              << " points in [" << lo << ", " << hi << "]\n";
    std::cout << "classification (heuristic): " << to_string(report.classification.verdict)
              << "\n  " << report.classification.evidence << "\n";
    if (!report.annotation.empty()) std::cout << "note: " << report.annotation << "\n";

    auto csv = open_output(g, spec.name + "_spectrum.csv");
    csv << run_header(path, g, params);
    csv << "value,form,bound\n" << std::setprecision(17);
    for (double p : report.reciprocal_inner) csv << p << ",reciprocal,inner\n";
    for (double p : report.reciprocal_outer) csv << p << ",reciprocal,outer\n";
    for (double p : report.laplacian_inner) csv << p << ",laplacian,inner\n";
    for (double p : report.laplacian_outer) csv << p << ",laplacian,outer\n";
    std::cout << "points written to " << spec.name << "_spectrum.csv\n";
    if (g.machine_json) {
        json out{{"inner_points", report.reciprocal_inner.size()},
                 {"outer_points", report.reciprocal_outer.size()},
                 {"inner_gap", report.inner_gap},
                 {"outer_gap", report.outer_gap},
                 {"classification", to_string(report.classification.verdict)},
                 {"annotation", report.annotation},
                 {"laplacian_min", lo},
                 {"laplacian_max", hi}};
        auto out_file = open_output(g, spec.name + "_spectrum.json");
        out_file << out.dump(2) << "\n";
    }
    return 0;
}

std::complex<double> parse_complex(const std::string& text) {
    size_t ipos = text.find('i');
    if (ipos == std::string::npos) return {std::stod(text), 0.0};
    size_t split = text.find_last_of("+-");
    while (split != std::string::npos && split > 0 &&
           (text[split - 1] == 'e' || text[split - 1] == 'E'))
        split = text.find_last_of("+-", split - 1);
    if (split == std::string::npos || split == 0)
        return {0.0, std::stod(text.substr(0, ipos).empty() ? "1" : text.substr(0, ipos))};
    double re = std::stod(text.substr(0, split));
    std::string imag = text.substr(split, ipos - split);
    double im = (imag == "+" || imag == "-") ? std::stod(imag + "1") : std::stod(imag);
    return {re, im};
}

int cmd_green(const std::string& path, const GlobalOptions& g, const std::string& xs,
              const std::string& ys, const std::string& zs, double accuracy) {
    CellSpec spec = load_and_validate(path);
    GreenEvaluator ev(spec, compute_transfer(spec));
    VertexRef x = VertexRef::parse(xs);
    VertexRef y = VertexRef::parse(ys);
    std::complex<double> z = parse_complex(zs);
    GreenOptions opts;
    opts.target_accuracy = accuracy;
    std::cout << run_header(path, g, "cmd=green x=" + xs + " y=" + ys + " z=" + zs);
    auto value = ev.evaluate(x, y, ComplexPoint(z), opts);
    std::cout << std::setprecision(15);
    std::cout << "G(" << xs << ", " << ys << " | " << z.real() << (z.imag() >= 0 ? "+" : "")
              << z.imag() << "i) = " << value.value.real() << (value.value.imag() >= 0 ? "+" : "")
              << value.value.imag() << "i\n";
    std::cout << "error bound " << value.error_bound << ", continuation depth "
              << value.continuation_depth << "\n";
    if (g.machine_json)
        std::cout << json{{"re", value.value.real()},
                          {"im", value.value.imag()},
                          {"error_bound", value.error_bound},
                          {"depth", value.continuation_depth}}
                         .dump(2)
                  << "\n";
    return 0;
}

int cmd_probe(const std::string& path, const GlobalOptions& g, int steps, int shells) {
    CellSpec spec = load_and_validate(path);
    GreenEvaluator ev(spec, compute_transfer(spec));
    std::cout << run_header(path, g,
                            "cmd=probe steps=" + std::to_string(steps) +
                                " shells=" + std::to_string(shells));
    VertexRef o = VertexRef::parse("0:e:o");
    auto probe = ev.singularity_probe(o, o, steps);
    std::cout << "G(o,o|r) along r = 1 - 2^-k:\n" << std::setprecision(10);
    for (size_t i = 0; i < probe.radii.size(); ++i)
        std::cout << "  r=" << probe.radii[i] << "  G=" << probe.values[i] << "\n";
    std::cout << "monotone increasing: " << (probe.monotone_increasing ? "yes" : "NO") << "\n";
    std::cout << "log-log exponent estimate: " << probe.fitted_exponent
              << (probe.polar_fit_rejected ? " (not an integer: non-polar consistent)"
                                           : " (close to an integer)")
              << "\n";
    std::cout << "first-return partial sum F(o,o|1^-) ~ " << probe.first_passage_partial << " ("
              << probe.first_passage_terms << " terms, increasing toward 1)\n";
    auto shells_report = shell_conductance_check(spec, shells);
    std::cout << "shell conductances a_n: ";
    for (auto a : shells_report.crossing_edges) std::cout << a << " ";
    std::cout << "\none-dimensional partition: " << (shells_report.one_dimensional ? "yes" : "NO")
              << "; bounded: " << (shells_report.bounded ? "yes" : "NO") << "\n";
    if (g.machine_json)
        std::cout << json{{"exponent", probe.fitted_exponent},
                          {"monotone", probe.monotone_increasing},
                          {"non_polar_consistent", probe.polar_fit_rejected},
                          {"first_passage_partial", probe.first_passage_partial},
                          {"shell_conductances", shells_report.crossing_edges},
                          {"one_dimensional", shells_report.one_dimensional}}
                         .dump(2)
                  << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random-walk transfer functions, Green functions and spectrum bounds "
                 "on symmetrically self-similar graphs"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--precision", global.precision_bits,
                   "working precision in bits; >53 forces high-precision preimages");
    app.add_option("--seed", global.seed, "random seed recorded in output headers");
    app.add_option("--out", global.out_dir, "output directory for CSV/JSON files");
    app.add_flag("--json", global.machine_json, "emit machine-readable reports");

    std::string spec_path, x_ref, y_ref, z_text = "0";
    int depth = 12, level = 3, order = 12, steps = 20, shells = 8;
    std::int64_t budget = 1'000'000;
    double window = 10.0, accuracy = 1e-10;

    auto* validate = app.add_subcommand("validate", "check the cell-spec axioms");
    validate->add_option("spec", spec_path)->required();

    auto* functions =
        app.add_subcommand("functions", "print d, f and the inner transition functions");
    functions->add_option("spec", spec_path)->required();

    auto* oracle = app.add_subcommand("oracle", "exact n-cell Green identities and series checks");
    oracle->add_option("spec", spec_path)->required();
    oracle->add_option("--level", level, "largest n-cell level to verify");
    oracle->add_option("--order", order, "series order for the functional equation");

    auto* dynamics = app.add_subcommand("dynamics", "backward orbits: Julia and exceptional sets");
    dynamics->add_option("spec", spec_path)->required();
    dynamics->add_option("--depth", depth, "backward iteration depth");
    dynamics->add_option("--budget", budget, "point budget");
    dynamics->add_option("--window", window, "gap-statistics window");

    auto* spectrum = app.add_subcommand("spectrum", "inner/outer spectrum bounds");
    spectrum->add_option("spec", spec_path)->required();
    spectrum->add_option("--depth", depth, "backward iteration depth");
    spectrum->add_option("--budget", budget, "point budget");
    spectrum->add_option("--window", window, "gap-statistics window");

    auto* green = app.add_subcommand("green", "evaluate a Green function");
    green->add_option("spec", spec_path)->required();
    green->add_option("--x", x_ref, "vertex ref level:address:local")->required();
    green->add_option("--y", y_ref, "vertex ref level:address:local")->required();
    green->add_option("--z", z_text, "evaluation point, e.g. 0.6 or 2+0.5i")->required();
    green->add_option("--acc", accuracy, "target accuracy");

    auto* probe = app.add_subcommand("probe", "singularity and shell-conductance probes");
    probe->add_option("spec", spec_path)->required();
    probe->add_option("--steps", steps, "number of radii 1 - 2^-k");
    probe->add_option("--shells", shells, "number of shells for the conductance check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(spec_path, global);
        if (functions->parsed()) return cmd_functions(spec_path, global);
        if (oracle->parsed()) return cmd_oracle(spec_path, global, level, order);
        if (dynamics->parsed()) return cmd_dynamics(spec_path, global, depth, budget, window);
        if (spectrum->parsed()) return cmd_spectrum(spec_path, global, depth, budget, window);
        if (green->parsed()) return cmd_green(spec_path, global, x_ref, y_ref, z_text, accuracy);
        if (probe->parsed()) return cmd_probe(spec_path, global, steps, shells);
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ResourceCap& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
