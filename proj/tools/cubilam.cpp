// Command-line front end: lamination checks, gap reports, canonical
// laminations, the cubioidal classifier, SVG rendering, and the numerical
// toolkit for the cubic normal form.

#include <CLI11.hpp>

#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cubilam/cubioid.hpp"
#include "cubilam/dynamics.hpp"
#include "cubilam/gaps.hpp"
#include "cubilam/io.hpp"
#include "cubilam/quad_gap.hpp"
#include "cubilam/render.hpp"
#include "cubilam/series.hpp"

using namespace cubilam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNegative = 2;
constexpr int kExitUndetermined = 3;
constexpr int kExitNumerical = 4;

LeafSystem load_lamination(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open lamination file: " + path);
    return read_lamination(in);
}

Chord parse_chord_arg(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("expected 'a,b' fraction pair, got '" + text + "'");
    return Chord(Angle::parse(text.substr(0, comma)), Angle::parse(text.substr(comma + 1)));
}

Cplx parse_complex_arg(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("expected 'RE,IM', got '" + text + "'");
    return Cplx(std::stold(text.substr(0, comma)), std::stold(text.substr(comma + 1)));
}

std::string cplx_str(Cplx z) {
    std::ostringstream os;
    os << static_cast<double>(z.real()) << (z.imag() < 0 ? "-" : "+")
       << std::abs(static_cast<double>(z.imag())) << "i";
    return os.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

std::string gap_kind_name(const Gap& g) {
    return g.kind == Gap::Kind::finite ? "finite" : "fatou";
}

std::string gap_report_text(const std::vector<Gap>& gaps) {
    std::ostringstream os;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const Gap& g = gaps[i];
        os << "gap " << i << ": " << gap_kind_name(g);
        if (g.whole_disk) os << " (whole disk)";
        if (g.period) os << ", period " << *g.period;
        else os << ", " << (g.note.empty() ? "aperiodic-at-depth" : g.note);
        if (g.return_degree) os << ", degree " << *g.return_degree;
        if (g.rotation_number) os << ", rotation " << g.rotation_number->get_str();
        if (g.siegel_flag) os << ", siegel-type";
        os << "\n  edges:";
        for (const auto& e : g.boundary_edges) os << " " << e.str();
        os << "\n";
    }
    return os.str();
}

std::string gap_report_kv(const std::vector<Gap>& gaps) {
    std::ostringstream os;
    os << "gaps=" << gaps.size() << "\n";
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        const Gap& g = gaps[i];
        os << "gap." << i << ".kind=" << gap_kind_name(g) << "\n";
        os << "gap." << i << ".period="
           << (g.period ? std::to_string(*g.period) : std::string("none")) << "\n";
        os << "gap." << i << ".degree="
           << (g.return_degree ? std::to_string(*g.return_degree) : std::string("none"))
           << "\n";
        os << "gap." << i << ".rotation="
           << (g.rotation_number ? g.rotation_number->get_str() : std::string("none")) << "\n";
        os << "gap." << i << ".siegel=" << (g.siegel_flag ? "yes" : "no") << "\n";
        os << "gap." << i << ".edges=";
        for (std::size_t j = 0; j < g.boundary_edges.size(); ++j)
            os << (j ? ";" : "") << g.boundary_edges[j].a.str() << ","
               << g.boundary_edges[j].b.str();
        os << "\n";
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact laminations and cubic dynamics toolkit"};
    app.require_subcommand(1);

    std::string format = "text";

    // ---------------------------------------------------------------- lam --
    auto* lam = app.add_subcommand("lam", "combinatorial lamination commands");
    lam->require_subcommand(1);

    struct {
        std::string file, out, major, highlight, style = "hyperbolic";
        unsigned depth = 1;
        int size = 800;
        bool flip = false, labels = false, roots = false;
    } opt;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "kv"}));
    };

    auto* c_check = lam->add_subcommand("check", "verify invariance and crossing-freeness");
    c_check->add_option("file", opt.file, "lamination file")->required();
    add_format(c_check);

    auto* c_pullback = lam->add_subcommand("pullback", "enlarge by sibling preimages");
    c_pullback->add_option("file", opt.file)->required();
    c_pullback->add_option("--depth", opt.depth, "absolute pullback depth")->required();
    c_pullback->add_option("-o,--out", opt.out, "output file (default stdout)");

    auto* c_gaps = lam->add_subcommand("gaps", "enumerate and classify complementary gaps");
    c_gaps->add_option("file", opt.file)->required();
    add_format(c_gaps);

    auto* c_quadgap =
        lam->add_subcommand("quadgap", "edge system of the invariant gap of a major");
    c_quadgap->add_option("--major", opt.major, "major leaf as 'a,b'")->required();
    c_quadgap->add_option("--depth", opt.depth)->required();
    c_quadgap->add_flag("--flip-hole", opt.flip, "other hole for diameters");
    add_format(c_quadgap);

    auto* c_canonical = lam->add_subcommand("canonical", "canonical lamination of a major");
    c_canonical->add_option("--major", opt.major)->required();
    c_canonical->add_option("--depth", opt.depth)->required();
    c_canonical->add_flag("--flip-hole", opt.flip);
    c_canonical->add_option("-o,--out", opt.out);

    auto* c_cubioid = lam->add_subcommand("cubioid", "cubioidal predicate");
    c_cubioid->add_option("file", opt.file)->required();
    add_format(c_cubioid);

    auto* c_classify = lam->add_subcommand("classify", "tuning/coexistence classifier");
    c_classify->add_option("file", opt.file)->required();
    c_classify->add_option("--major", opt.major)->required();
    c_classify->add_option("--depth", opt.depth)->required();
    c_classify->add_flag("--flip-hole", opt.flip);
    add_format(c_classify);

    auto* c_render = lam->add_subcommand("render", "render to SVG");
    c_render->add_option("file", opt.file)->required();
    c_render->add_option("-o,--out", opt.out, "output SVG file")->required();
    c_render->add_option("--size", opt.size, "pixel size (>= 64)");
    c_render->add_option("--style", opt.style)
        ->check(CLI::IsMember({"hyperbolic", "straight"}));
    c_render->add_flag("--labels", opt.labels, "label vertices");
    c_render->add_option("--highlight", opt.highlight, "chords 'a,b;c,d' to highlight");

    // ---------------------------------------------------------------- dyn --
    auto* dyn = app.add_subcommand("dyn", "numerical cubic dynamics commands");
    dyn->require_subcommand(1);

    struct {
        long p = 0;
        unsigned q = 1;
        std::string lambda = "0,0", b = "0,0", a = "1,0", theta = "0", csv;
        double r = 10.0, delta = 1e-3;
        int samples = 8, grid = 12, sector = 0;
    } dopt;

    auto* c_tpq = dyn->add_subcommand("tpq", "parabolic displacement coefficient");
    c_tpq->add_option("--p", dopt.p)->required();
    c_tpq->add_option("--q", dopt.q)->required();
    c_tpq->add_flag("--roots", opt.roots, "also print numeric roots");
    add_format(c_tpq);

    auto* c_ray = dyn->add_subcommand("ray", "trace an external ray");
    c_ray->add_option("--lambda", dopt.lambda, "multiplier RE,IM")->required();
    c_ray->add_option("--b", dopt.b, "parameter RE,IM")->required();
    c_ray->add_option("--theta", dopt.theta, "ray argument a/b")->required();
    c_ray->add_option("--samples", dopt.samples, "samples per tripling level");
    c_ray->add_option("--csv", dopt.csv, "export polyline as CSV");
    add_format(c_ray);

    auto* c_petal = dyn->add_subcommand("petal", "certify a repelling petal");
    c_petal->add_option("--q", dopt.q)->required();
    c_petal->add_option("--a", dopt.a, "leading coefficient RE,IM")->required();
    c_petal->add_option("--r", dopt.r, "half-plane offset")->required();
    c_petal->add_option("--sector", dopt.sector, "repelling sector index");
    c_petal->add_option("--grid", dopt.grid, "certification grid side");
    add_format(c_petal);

    auto* c_stab = dyn->add_subcommand("stability", "ray landing stability experiment");
    c_stab->add_option("--p", dopt.p)->required();
    c_stab->add_option("--q", dopt.q)->required();
    c_stab->add_option("--b", dopt.b)->required();
    c_stab->add_option("--theta", dopt.theta)->required();
    c_stab->add_option("--delta", dopt.delta)->required();
    c_stab->add_option("--grid", dopt.grid);
    add_format(c_stab);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        // ------------------------------------------------------------ lam --
        if (c_check->parsed()) {
            auto L = load_lamination(opt.file);
            auto crossing = L.first_crossing();
            auto inv = check_forward_invariant(L);
            bool covering_ok = true;
            std::string covering_note;
            for (const auto& p : L.polygons) {
                auto rep = check_class_covering(p, L.degree);
                if (!rep.ok) {
                    covering_ok = false;
                    covering_note = p.str() + ": " + rep.detail;
                    break;
                }
            }
            bool ok = !crossing && inv.ok && covering_ok;
            if (format == "kv") {
                std::cout << "crossing_free=" << (!crossing ? "yes" : "no") << "\n"
                          << "forward_invariant=" << (inv.ok ? "yes" : "no") << "\n"
                          << "coverings_ok=" << (covering_ok ? "yes" : "no") << "\n"
                          << "verdict=" << (ok ? "pass" : "fail") << "\n";
            } else {
                if (crossing)
                    std::cout << "crossing: " << crossing->first.str() << " x "
                              << crossing->second.str() << "\n";
                if (!inv.ok) std::cout << "not forward invariant: " << inv.detail << "\n";
                if (!covering_ok) std::cout << "covering failure: " << covering_note << "\n";
                std::cout << (ok ? "pass" : "fail") << "\n";
            }
            return ok ? kExitOk : kExitNegative;
        }
        if (c_pullback->parsed()) {
            auto L = pullback(load_lamination(opt.file), opt.depth);
            write_output(opt.out, lamination_to_string(L));
            return kExitOk;
        }
        if (c_gaps->parsed()) {
            auto L = load_lamination(opt.file);
            auto gaps = classified_gaps(L);
            std::cout << (format == "kv" ? gap_report_kv(gaps) : gap_report_text(gaps));
            return kExitOk;
        }
        if (c_quadgap->parsed() || c_canonical->parsed() || c_classify->parsed()) {
            auto res = validate_major(parse_chord_arg(opt.major), opt.flip);
            if (!res.ok) {
                std::cerr << "invalid major: " << res.reason << "\n";
                return kExitNegative;
            }
            if (c_quadgap->parsed()) {
                auto U = build_quadratic_gap(res.major, opt.depth);
                if (format == "kv") {
                    std::cout << "major=" << res.major.leaf.a.str() << ","
                              << res.major.leaf.b.str() << "\n"
                              << "type="
                              << (res.major.critical() ? "regular-critical" : "periodic")
                              << "\n"
                              << "hole=" << res.major.hole_from.str() << ","
                              << res.major.hole_to.str() << "\n"
                              << "hole_length=" << res.major.hole_length.get_str() << "\n"
                              << "edges=" << U.edges.size() << "\n";
                    std::size_t i = 0;
                    for (const auto& e : U.edges)
                        std::cout << "edge." << i++ << "=" << e.a.str() << "," << e.b.str()
                                  << "\n";
                } else {
                    std::cout << "major " << res.major.leaf.str() << " ("
                              << (res.major.critical() ? "regular-critical" : "periodic")
                              << "), hole (" << res.major.hole_from.str() << ", "
                              << res.major.hole_to.str() << ") of length "
                              << res.major.hole_length.get_str() << "\n";
                    for (const auto& e : U.edges) std::cout << "edge " << e.str() << "\n";
                }
                return kExitOk;
            }
            if (c_canonical->parsed()) {
                auto L = canonical_lamination(res.major, opt.depth);
                write_output(opt.out, lamination_to_string(L));
                return kExitOk;
            }
            // classify
            auto L = load_lamination(opt.file);
            if (L.depth < opt.depth) L.depth = opt.depth;  // file holds a full truncation
            auto U = build_quadratic_gap(res.major, opt.depth);
            auto rep = classify_tuning(L, U);
            std::string name = rep.result == ClassificationReport::Case::tunes ? "tunes"
                               : rep.result == ClassificationReport::Case::coexists
                                   ? "coexists-weak-tunes"
                               : rep.result == ClassificationReport::Case::neither
                                   ? "neither"
                                   : "undetermined";
            if (format == "kv") {
                std::cout << "case=" << name << "\n"
                          << "cardioid_member=" << (rep.cardioid_member ? "yes" : "no") << "\n"
                          << "induced_leaves=" << rep.induced_quadratic.closure.size() << "\n";
                if (rep.crossing_witness)
                    std::cout << "witness=" << rep.crossing_witness->first.str() << "x"
                              << rep.crossing_witness->second.str() << "\n";
            } else {
                std::cout << "case: " << name << "\n";
                if (!rep.detail.empty()) std::cout << rep.detail << "\n";
                if (rep.result == ClassificationReport::Case::tunes ||
                    rep.result == ClassificationReport::Case::coexists) {
                    std::cout << "induced quadratic lamination: "
                              << rep.induced_quadratic.closure.size() << " leaves\n"
                              << "cardioid member: " << (rep.cardioid_member ? "yes" : "no")
                              << "\n";
                }
            }
            return rep.exit_code();
        }
        if (c_cubioid->parsed()) {
            auto L = load_lamination(opt.file);
            auto rep = is_cubioidal(L);
            std::string verdict = rep.verdict == CubioidReport::Verdict::cubioidal
                                      ? "cubioidal"
                                  : rep.verdict == CubioidReport::Verdict::not_cubioidal
                                      ? "not-cubioidal"
                                      : "undetermined";
            if (format == "kv") {
                std::cout << "verdict=" << verdict << "\n"
                          << "rotational_sets=" << rep.rotational_sets_found.size() << "\n";
                if (rep.violating_leaf)
                    std::cout << "violating_leaf=" << rep.violating_leaf->a.str() << ","
                              << rep.violating_leaf->b.str() << "\n";
            } else {
                std::cout << verdict << "\n";
                if (!rep.reason.empty()) std::cout << rep.reason << "\n";
            }
            if (rep.verdict == CubioidReport::Verdict::cubioidal) return kExitOk;
            if (rep.verdict == CubioidReport::Verdict::not_cubioidal) return kExitNegative;
            return kExitUndetermined;
        }
        if (c_render->parsed()) {
            auto L = load_lamination(opt.file);
            RenderSpec spec;
            spec.size = opt.size;
            spec.geodesic_style = opt.style == "straight"
                                      ? RenderSpec::Style::straight_chord
                                      : RenderSpec::Style::hyperbolic_arc;
            spec.labels = opt.labels;
            if (!opt.highlight.empty()) {
                std::stringstream ss(opt.highlight);
                std::string item;
                while (std::getline(ss, item, ';'))
                    if (!item.empty()) spec.highlight.insert(parse_chord_arg(item));
            }
            write_output(opt.out, render_svg(L, spec));
            return kExitOk;
        }

        // ------------------------------------------------------------ dyn --
        if (c_tpq->parsed()) {
            CycloField F(dopt.q);
            auto t = tpq(F, dopt.p);
            if (format == "kv") {
                std::cout << "p=" << dopt.p << "\nq=" << dopt.q << "\n"
                          << "degree=" << t.poly.degree() << "\n";
                for (std::size_t i = 0; i < t.poly.coeffs.size(); ++i)
                    std::cout << "coeff." << i << "=" << F.str(t.poly.coeffs[i]) << "\n";
                if (opt.roots)
                    for (std::size_t i = 0; i < t.roots.size(); ++i)
                        std::cout << "root." << i << "=" << t.roots[i].real() << ","
                                  << t.roots[i].imag() << "\n";
            } else {
                std::cout << "T_{" << dopt.p << "/" << dopt.q << "}(b) = " << t.poly.str()
                          << "\n";
                if (F.degree() > 1)
                    std::cout << "  with z = exp(2 pi i " << dopt.p << "/" << dopt.q << ")\n";
                if (opt.roots) {
                    std::cout << "roots:";
                    for (const auto& r : t.roots)
                        std::cout << " " << cplx_str(Cplx(r.real(), r.imag()));
                    std::cout << "\n";
                }
            }
            return kExitOk;
        }
        if (c_ray->parsed()) {
            CubicMap f{parse_complex_arg(dopt.lambda), parse_complex_arg(dopt.b)};
            RayParams params;
            params.samples_per_level = dopt.samples;
            auto ray = trace_ray(f, Angle::parse(dopt.theta), params);
            if (!dopt.csv.empty()) {
                std::ostringstream os;
                os << "green,re,im\n";
                for (std::size_t i = 0; i < ray.points.size(); ++i)
                    os << static_cast<double>(ray.potentials[i]) << ","
                       << static_cast<double>(ray.points[i].real()) << ","
                       << static_cast<double>(ray.points[i].imag()) << "\n";
                write_output(dopt.csv, os.str());
            }
            if (format == "kv") {
                std::cout << "samples=" << ray.points.size() << "\n"
                          << "landed=" << (ray.landed() ? "yes" : "no") << "\n";
                if (ray.landed())
                    std::cout << "landing=" << static_cast<double>(ray.landing_estimate->real())
                              << "," << static_cast<double>(ray.landing_estimate->imag())
                              << "\n";
                else
                    std::cout << "note=" << ray.note << "\n";
            } else {
                std::cout << "samples: " << ray.points.size() << "\n";
                if (ray.landed())
                    std::cout << "landing: " << cplx_str(*ray.landing_estimate) << "\n";
                else
                    std::cout << "inconclusive: " << ray.note << "\n";
            }
            return ray.landed() ? kExitOk : kExitNumerical;
        }
        if (c_petal->parsed()) {
            auto petal =
                repelling_petal({}, dopt.q, parse_complex_arg(dopt.a),
                                static_cast<Real>(dopt.r), dopt.sector, dopt.grid);
            if (format == "kv") {
                std::cout << "q=" << petal.q << "\nr=" << static_cast<double>(petal.r)
                          << "\nsector=" << petal.sector << "\nmax_remainder="
                          << static_cast<double>(petal.max_remainder) << "\nbound="
                          << static_cast<double>(std::abs(petal.a) / 2) << "\ncontainment="
                          << (petal.containment_ok ? "yes" : "no") << "\ncertified="
                          << (petal.certified ? "yes" : "no") << "\n";
            } else {
                std::cout << "q=" << petal.q << " a=" << cplx_str(petal.a)
                          << " r=" << static_cast<double>(petal.r) << " sector=" << petal.sector
                          << "\n"
                          << "max remainder |F(w)-w+qa| = "
                          << static_cast<double>(petal.max_remainder) << " (bound "
                          << static_cast<double>(std::abs(petal.a) / 2) << ")\n"
                          << "containment on samples: " << (petal.containment_ok ? "yes" : "no")
                          << "\n"
                          << (petal.certified ? "certified" : "failed: " + petal.note) << "\n";
            }
            return petal.certified ? kExitOk : kExitNumerical;
        }
        if (c_stab->parsed()) {
            auto rep = ray_stability_experiment(dopt.p, dopt.q, parse_complex_arg(dopt.b),
                                                Angle::parse(dopt.theta),
                                                static_cast<Real>(dopt.delta), dopt.grid);
            if (!rep.precondition_met) {
                if (format == "kv") std::cout << "precondition=unmet\nnote=" << rep.note << "\n";
                else std::cout << rep.note << "\n";
                return kExitUndetermined;
            }
            if (format == "kv") {
                std::cout << "precondition=met\ntested=" << rep.tested << "\nstable="
                          << rep.stable << "\nuntested=" << rep.untested_directions.size()
                          << "\nverdict=" << (rep.all_stable ? "stable" : "unstable") << "\n";
                if (rep.all_stable && rep.untested_directions.empty()) return kExitOk;
                if (!rep.all_stable) return kExitNegative;
                return kExitUndetermined;
            }
            std::cout << "tested " << rep.tested << " directions, " << rep.stable
                      << " stable\n";
            if (!rep.untested_directions.empty()) {
                std::cout << "untested directions:";
                for (int k : rep.untested_directions) std::cout << " " << k;
                std::cout << "\n";
            }
            std::cout << (rep.all_stable ? "stable" : "unstable") << "\n";
            if (rep.all_stable && rep.untested_directions.empty()) return kExitOk;
            if (!rep.all_stable) return kExitNegative;
            return kExitUndetermined;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
