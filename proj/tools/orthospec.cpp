#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "orthospec/error.hpp"
#include "orthospec/harness.hpp"
#include "orthospec/opcalc.hpp"

using namespace orthospec;
using nlohmann::json;

namespace {

struct Globals {
    int quad_n = 0;
    double quad_h = 0.0;
    std::string map = "auto";
    std::uint64_t seed = 0x5EED;
    std::string out_dir = ".";
    std::string format = "json";
    std::optional<double> truncate;
    bool expect_verified = false;
    bool no_mirror = false;
    std::string assembly = "best";
    std::string tol_mode = "certified";
    std::string route = "auto";
    bool no_timings = false;
    int max_n = 100;
    int max_digits = 400;
};

struct FamilyArgs {
    std::string name = "legendre";
    double alpha = 0.0, beta = 0.0, eta = 0.0;
    double a = -1.0, b = 1.0;

    FamilySpec spec() const {
        FamilySpec f = parse_family(name, alpha, beta, eta);
        if (f.kind == FamilyKind::PolySinc) {
            f.a = a;
            f.b = b;
        }
        f.validate();
        return f;
    }
};

void add_family_options(CLI::App* app, FamilyArgs& fa) {
    app->add_option("--family", fa.name, "legendre, chebyshev-t, chebyshev-u, jacobi, gegenbauer, laguerre, hermite, polysinc");
    app->add_option("--alpha", fa.alpha);
    app->add_option("--beta", fa.beta);
    app->add_option("--eta", fa.eta);
    app->add_option("--a", fa.a, "Poly-Sinc interval start");
    app->add_option("--b", fa.b, "Poly-Sinc interval end");
}

std::string out_path(const Globals& g, const std::string& out) {
    if (out.empty()) return {};
    std::filesystem::path p(out);
    if (p.is_relative()) p = std::filesystem::path(g.out_dir) / p;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p.string();
}

void emit(const Globals& g, const std::string& out, const std::string& text) {
    const std::string p = out_path(g, out);
    if (p.empty())
        std::cout << text;
    else
        write_text(p, text);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

AssemblyOptions assembly_options(const Globals& g) {
    AssemblyOptions o;
    o.quad_n = g.quad_n;
    o.quad_h = g.quad_h;
    o.map = parse_map(g.map);
    o.truncation = g.truncate;
    o.route = parse_route(g.assembly);
    return o;
}

TolMode parse_tol_mode(const std::string& s) {
    if (s == "certified") return TolMode::Certified;
    if (s == "absolute") return TolMode::Absolute;
    throw ParameterDomainError("unknown tolerance mode '" + s + "'");
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::function<double(double)> named_function(const std::string& name) {
    if (name == "one") return [](double) { return 1.0; };
    if (name == "x") return [](double x) { return x; };
    if (name == "x2") return [](double x) { return x * x; };
    if (name == "exp") return [](double x) { return std::exp(x); };
    if (name == "exp-neg") return [](double x) { return std::exp(-x); };
    if (name == "sin") return [](double x) { return std::sin(x); };
    if (name == "cos") return [](double x) { return std::cos(x); };
    throw ParameterDomainError("unknown function '" + name + "' (one, x, x2, exp, exp-neg, sin, cos)");
}

std::string samples_csv(const std::vector<double>& x, const std::vector<double>& v) {
    std::ostringstream os;
    os << "x,value\n";
    for (std::size_t i = 0; i < x.size(); ++i) os << fmt17(x[i]) << ',' << fmt17(v[i]) << '\n';
    return os.str();
}

Side parse_side(const std::string& s) {
    if (s == "plus") return Side::Plus;
    if (s == "minus") return Side::Minus;
    throw ParameterDomainError("side must be plus or minus");
}

SideSelection parse_sides(const std::string& s) {
    if (s == "both") return SideSelection::Both;
    return parse_side(s) == Side::Plus ? SideSelection::Plus : SideSelection::Minus;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted Lagrange interpolation, Sinc quadrature and integration-matrix spectra"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--quad-n", g.quad_n, "Sinc points per side (0 = chosen from n)");
    app.add_option("--quad-h", g.quad_h, "Sinc step (0 = pi/sqrt(N))");
    app.add_option("--map", g.map, "auto, log or sinh-log");
    app.add_option("--seed", g.seed, "seed for inverse iteration starts");
    app.add_option("--out-dir", g.out_dir);
    app.add_option("--format", g.format, "json or csv");
    app.add_option("--truncate", g.truncate, "cut unbounded intervals at c (or -c, c)");
    app.add_flag("--expect-verified", g.expect_verified, "exit 3 if any entry is falsified");
    app.add_flag("--no-mirror", g.no_mirror, "compute B- spectra even when mirroring applies");
    app.add_option("--assembly", g.assembly, "best, complement or direct");
    app.add_option("--tol-mode", g.tol_mode, "certified or absolute");
    app.add_option("--route", g.route, "auto, nodal, coefficient or reassembled");
    app.add_flag("--no-timings", g.no_timings, "write zero wall times (byte-identical reports)");
    app.add_option("--max-n", g.max_n, "largest degree allowed in a campaign");
    app.add_option("--max-digits", g.max_digits, "top of the precision ladder");

    // roots
    auto* c_roots = app.add_subcommand("roots", "nodes and Gauss weights");
    FamilyArgs roots_fa;
    int roots_n = 10;
    std::string roots_out;
    add_family_options(c_roots, roots_fa);
    c_roots->add_option("--n", roots_n)->required();
    c_roots->add_option("--out", roots_out);

    // moments
    auto* c_mom = app.add_subcommand("moments", "weight moments M_k");
    FamilyArgs mom_fa;
    std::string mom_k = "0:1:10", mom_xi = "family", mom_out;
    add_family_options(c_mom, mom_fa);
    c_mom->add_option("--k", mom_k, "list or start:step:end");
    c_mom->add_option("--xi", mom_xi, "family or unit");
    c_mom->add_option("--out", mom_out);

    // bmatrix
    auto* c_bm = app.add_subcommand("bmatrix", "assemble the B+ / B- pair");
    FamilyArgs bm_fa;
    int bm_n = 10;
    std::string bm_xi = "cpc", bm_out;
    add_family_options(c_bm, bm_fa);
    c_bm->add_option("--n", bm_n)->required();
    c_bm->add_option("--xi", bm_xi, "cpc or unit");
    c_bm->add_option("--out", bm_out);

    // eig
    auto* c_eig = app.add_subcommand("eig", "eigenvalues of B+ or B-");
    FamilyArgs eig_fa;
    int eig_n = 0;
    std::string eig_pair, eig_xi = "cpc", eig_side = "plus", eig_out;
    bool eig_certify = false, eig_vectors = false;
    int eig_digits = 16;
    add_family_options(c_eig, eig_fa);
    c_eig->add_option("--pair", eig_pair, "pair JSON from bmatrix");
    c_eig->add_option("--n", eig_n);
    c_eig->add_option("--xi", eig_xi);
    c_eig->add_option("--side", eig_side);
    c_eig->add_option("--digits", eig_digits, "16, 50, 100, 200 or 400");
    c_eig->add_flag("--certify", eig_certify, "climb the precision ladder and report a verdict");
    c_eig->add_flag("--vectors", eig_vectors, "include eigenvector residuals");
    c_eig->add_option("--out", eig_out);

    // verify-cpc / verify-npc
    auto add_campaign = [&](CLI::App* c, std::vector<std::string>& fams, std::string& nlist, FamilyArgs& fa,
                            std::string& sides, std::string& out) {
        c->add_option("--family", fams, "one or more families")->delimiter(',');
        c->add_option("--alpha", fa.alpha);
        c->add_option("--beta", fa.beta);
        c->add_option("--eta", fa.eta);
        c->add_option("--a", fa.a);
        c->add_option("--b", fa.b);
        c->add_option("--n-list", nlist, "list or start:step:end")->required();
        c->add_option("--sides", sides, "plus, minus or both");
        c->add_option("--out", out);
    };
    auto* c_cpc = app.add_subcommand("verify-cpc", "campaign with xi equal to the family weight");
    std::vector<std::string> cpc_fams{"legendre"};
    std::string cpc_n, cpc_sides = "both", cpc_out;
    FamilyArgs cpc_fa;
    add_campaign(c_cpc, cpc_fams, cpc_n, cpc_fa, cpc_sides, cpc_out);
    auto* c_npc = app.add_subcommand("verify-npc", "campaign with xi = 1");
    std::vector<std::string> npc_fams{"chebyshev-t"};
    std::string npc_n, npc_sides = "both", npc_out;
    FamilyArgs npc_fa;
    add_campaign(c_npc, npc_fams, npc_n, npc_fa, npc_sides, npc_out);

    // convergence
    auto* c_conv = app.add_subcommand("convergence", "weighted interpolation error versus n");
    int conv_ex = 1;
    std::string conv_n = "4:4:40", conv_out, conv_json, conv_family;
    FamilyArgs conv_fa;
    c_conv->add_option("--example", conv_ex, "1, 2 or 3")->required();
    c_conv->add_option("--family", conv_family, "defaults to the example's family");
    c_conv->add_option("--alpha", conv_fa.alpha);
    c_conv->add_option("--beta", conv_fa.beta);
    c_conv->add_option("--eta", conv_fa.eta);
    c_conv->add_option("--n-list", conv_n);
    c_conv->add_option("--out", conv_out, "CSV table");
    c_conv->add_option("--fit-out", conv_json, "fit JSON");

    // resolvent
    auto* c_res = app.add_subcommand("resolvent", "1/sigma_min(B - z) on a grid");
    FamilyArgs res_fa;
    int res_n = 10, res_nre = 60, res_nim = 60;
    std::string res_pair, res_xi = "cpc", res_side = "plus", res_out = "resolvent.csv";
    std::vector<double> res_box;
    add_family_options(c_res, res_fa);
    c_res->add_option("--pair", res_pair);
    c_res->add_option("--n", res_n);
    c_res->add_option("--xi", res_xi);
    c_res->add_option("--side", res_side);
    c_res->add_option("--grid", res_box, "re_min re_max im_min im_max")->expected(4);
    c_res->add_option("--n-re", res_nre);
    c_res->add_option("--n-im", res_nim);
    c_res->add_option("--out", res_out);

    // convolve / invlaplace / derivative
    auto* c_cv = app.add_subcommand("convolve", "F(B) V(g)");
    std::string cv_pair, cv_tr = "s", cv_side = "plus", cv_g = "one", cv_out;
    c_cv->add_option("--pair", cv_pair)->required();
    c_cv->add_option("--transform", cv_tr, "s, s2 or exp-decay");
    c_cv->add_option("--side", cv_side);
    c_cv->add_option("--function", cv_g, "g: one, x, x2, exp, exp-neg, sin, cos");
    c_cv->add_option("--out", cv_out);

    auto* c_il = app.add_subcommand("invlaplace", "(B+)^-1 F(B+) V(1)");
    std::string il_pair, il_tr = "exp-decay", il_out;
    c_il->add_option("--pair", il_pair)->required();
    c_il->add_option("--transform", il_tr, "s, s2 or exp-decay");
    c_il->add_option("--out", il_out);

    auto* c_der = app.add_subcommand("derivative", "+-(B+-)^-1 V(f)");
    std::string der_pair, der_side = "plus", der_f = "sin", der_out;
    c_der->add_option("--pair", der_pair)->required();
    c_der->add_option("--side", der_side);
    c_der->add_option("--function", der_f, "one, x, x2, exp, exp-neg, sin, cos");
    c_der->add_option("--out", der_out);

    CLI11_PARSE(app, argc, argv);

    try {
        const bool csv = parse_format(g.format) == ReportFormat::Csv;
        auto pair_for = [&](const std::string& path, const FamilyArgs& fa, int n, const std::string& xi) {
            if (!path.empty()) return pair_from_json(read_text(path));
            if (n <= 0) throw ParameterDomainError("give --pair or --n");
            return build_pair(fa.spec(), n, parse_xi(xi), assembly_options(g));
        };

        if (*c_roots) {
            const NodeSet ns = gauss_weights(roots_fa.spec(), roots_n);
            if (csv) {
                std::ostringstream os;
                os << "k,node,weight\n";
                for (std::size_t k = 0; k < ns.nodes.size(); ++k)
                    os << k << ',' << fmt17(ns.nodes[k]) << ','
                       << (ns.gauss_weights.empty() ? std::string() : fmt17(ns.gauss_weights[k])) << '\n';
                emit(g, roots_out, os.str());
            } else {
                json j{{"family", ns.family.name()}, {"params", ns.family.params()}, {"n", ns.n},
                       {"nodes", ns.nodes}, {"weights", ns.gauss_weights}};
                if (ns.family.kind == FamilyKind::PolySinc) j["h"] = ns.h;
                emit(g, roots_out, j.dump(2) + "\n");
            }
        } else if (*c_mom) {
            const FamilySpec f = mom_fa.spec();
            WeightSpec w = mom_xi == "unit" ? WeightSpec::unit() : WeightSpec::of_family(f);
            if (mom_xi != "unit" && mom_xi != "family") throw ParameterDomainError("--xi must be family or unit");
            std::vector<std::pair<int, double>> m;
            for (int k : parse_int_list(mom_k)) m.emplace_back(k, moment(w, f.interval(), k));
            if (csv) {
                std::ostringstream os;
                os << "k,moment\n";
                for (auto [k, v] : m) os << k << ',' << fmt17(v) << '\n';
                emit(g, mom_out, os.str());
            } else {
                json j{{"family", f.name()}, {"params", f.params()}, {"xi", mom_xi}};
                json arr = json::array();
                for (auto [k, v] : m) arr.push_back({{"k", k}, {"moment", v}});
                j["moments"] = arr;
                emit(g, mom_out, j.dump(2) + "\n");
            }
        } else if (*c_bm) {
            const IntegralMatrixPair p = build_pair(bm_fa.spec(), bm_n, parse_xi(bm_xi), assembly_options(g));
            if (p.truncation) std::cerr << "note: interval truncated at " << *p.truncation << "\n";
            emit(g, bm_out, pair_to_json(p));
        } else if (*c_eig) {
            const IntegralMatrixPair p = pair_for(eig_pair, eig_fa, eig_n, eig_xi);
            const Side side = parse_side(eig_side);
            json j{{"family", p.family.name()}, {"params", p.family.params()}, {"side", to_string(side)},
                   {"n", p.nodes.nodes.size()}};
            if (eig_certify) {
                const CertifiedSpectrum c = certify_pair_side(p, side, parse_spectral_route(g.route),
                                                              parse_tol_mode(g.tol_mode), g.max_digits);
                j["spectrum"] = json::parse(spectrum_to_json(c.spectrum));
                j["verdict"] = to_string(c.verdict);
                j["tolerance"] = c.tolerance;
                j["note"] = c.note;
            } else {
                const Mat& b = side_matrix(p, side);
                const Spectrum s = eigvals_digits(b, eig_digits);
                j["spectrum"] = json::parse(spectrum_to_json(s));
                if (eig_vectors) {
                    const CMat v = eigenvectors(b, s.eigenvalues, g.seed);
                    std::vector<double> res;
                    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
                        double r = 0.0;
                        for (std::size_t i = 0; i < b.rows(); ++i) {
                            Complex acc = -s.eigenvalues[k] * v(i, k);
                            for (std::size_t l = 0; l < b.cols(); ++l) acc += b(i, l) * v(l, k);
                            r = std::max(r, std::abs(acc));
                        }
                        res.push_back(r);
                    }
                    j["vector_residuals"] = res;
                }
            }
            emit(g, eig_out, j.dump(2) + "\n");
        } else if (*c_cpc || *c_npc) {
            const bool cpc = c_cpc->parsed();
            CampaignSpec spec;
            const FamilyArgs& fa = cpc ? cpc_fa : npc_fa;
            for (const auto& name : cpc ? cpc_fams : npc_fams) {
                FamilyArgs one = fa;
                one.name = name;
                spec.families.push_back(one.spec());
            }
            spec.n_list = parse_int_list(cpc ? cpc_n : npc_n);
            spec.xi = cpc ? XiKind::Cpc : XiKind::NpcUnit;
            spec.sides = parse_sides(cpc ? cpc_sides : npc_sides);
            spec.assembly = assembly_options(g);
            spec.out_dir = g.out_dir;
            spec.mirror = !g.no_mirror;
            spec.tol_mode = parse_tol_mode(g.tol_mode);
            spec.route = parse_spectral_route(g.route);
            spec.max_digits = g.max_digits;
            spec.timings = !g.no_timings;
            spec.max_n = g.max_n;
            const VerificationReport r = cpc ? run_cpc(spec) : run_npc(spec);
            const std::string out = cpc ? cpc_out : npc_out;
            emit(g, out, csv ? report_to_csv(r) : report_to_json(r));
            std::cerr << "verified " << r.verified << ", falsified " << r.falsified << ", inconclusive "
                      << r.inconclusive << "\n";
            if (g.expect_verified && r.falsified > 0) return 3;
        } else if (*c_conv) {
            std::optional<FamilySpec> fam;
            if (!conv_family.empty()) {
                conv_fa.name = conv_family;
                fam = conv_fa.spec();
            }
            const FitResult fr = run_convergence(conv_ex, parse_int_list(conv_n), fam, out_path(g, conv_out),
                                                 out_path(g, conv_json));
            if (conv_out.empty()) std::cout << convergence_csv(fr);
            std::cerr << "slope " << fr.slope << (fr.note.empty() ? "" : " (" + fr.note + ")") << "\n";
        } else if (*c_res) {
            const IntegralMatrixPair p = pair_for(res_pair, res_fa, res_n, res_xi);
            std::optional<GridSpec> grid;
            if (!res_box.empty()) grid = GridSpec{res_box[0], res_box[1], res_box[2], res_box[3], res_nre, res_nim};
            else {
                GridSpec gs = auto_grid(eigvals(side_matrix(p, parse_side(res_side))).eigenvalues, res_nre, res_nim);
                grid = gs;
            }
            run_resolvent(p, parse_side(res_side), grid, out_path(g, res_out));
        } else if (*c_cv) {
            const IntegralMatrixPair p = pair_from_json(read_text(cv_pair));
            const auto gf = named_function(cv_g);
            std::vector<double> gv;
            for (double x : p.nodes.nodes) gv.push_back(gf(x));
            const auto q = convolve(p, parse_transform(cv_tr), gv, parse_side(cv_side));
            emit(g, cv_out, samples_csv(p.nodes.nodes, q));
        } else if (*c_il) {
            const IntegralMatrixPair p = pair_from_json(read_text(il_pair));
            emit(g, il_out, samples_csv(p.nodes.nodes, inverse_laplace(p, parse_transform(il_tr))));
        } else if (*c_der) {
            const IntegralMatrixPair p = pair_from_json(read_text(der_pair));
            const auto f = named_function(der_f);
            std::vector<double> fv;
            for (double x : p.nodes.nodes) fv.push_back(f(x));
            emit(g, der_out, samples_csv(p.nodes.nodes, derivative_samples(p, fv, parse_side(der_side))));
        }
    } catch (const ParameterDomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DivergentIntegralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
