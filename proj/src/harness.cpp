#include "orthospec/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "orthospec/detail/parallel.hpp"
#include "orthospec/error.hpp"

namespace orthospec {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

double number_or_nan(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

bool interval_symmetric(const IntegralMatrixPair& pair) {
    if (std::isfinite(pair.a) && std::isfinite(pair.b)) return pair.a == -pair.b;
    return !std::isfinite(pair.a) && !std::isfinite(pair.b);
}

bool mirror_allowed(const IntegralMatrixPair& pair) {
    // even xi on a symmetric interval with a symmetric node set
    if (!pair.family.symmetric() || pair.family.kind == FamilyKind::Laguerre) return false;
    if (pair.xi == XiKind::Custom) return false;
    return interval_symmetric(pair);
}

ReportEntry failed_entry(const FamilySpec& f, int n, Side side, XiKind xi, const std::string& what) {
    ReportEntry e;
    e.family = f.name();
    e.params = f.params();
    e.n = n;
    e.side = to_string(side);
    e.xi = to_string(xi);
    e.verdict = Verdict::Inconclusive;
    e.min_real_part = std::numeric_limits<double>::quiet_NaN();
    e.note = what;
    return e;
}

VerificationReport run_campaign(const CampaignSpec& spec) {
    if (spec.families.empty()) throw ParameterDomainError("campaign: no families given");
    if (!std::is_sorted(spec.n_list.begin(), spec.n_list.end()))
        throw ParameterDomainError("campaign: degree list must be ascending");
    struct Job {
        FamilySpec family;
        int n;
    };
    std::vector<Job> jobs;
    for (const auto& f : spec.families)
        for (int n : spec.n_list) {
            const int cap = f.interval().bounded() ? spec.max_n : std::min(spec.max_n, 60);
            if (n > cap)
                throw ParameterDomainError("campaign: n = " + std::to_string(n) + " exceeds the cap " +
                                           std::to_string(cap) + " for " + f.name() + " (raise with --max-n)");
            jobs.push_back({f, n});
        }
    std::vector<std::vector<ReportEntry>> results(jobs.size());
    std::vector<Side> sides;
    if (spec.sides != SideSelection::Minus) sides.push_back(Side::Plus);
    if (spec.sides != SideSelection::Plus) sides.push_back(Side::Minus);

    detail::parallel_for(
        jobs.size(),
        [&](std::size_t i) {
            const auto& job = jobs[i];
            auto t0 = std::chrono::steady_clock::now();
            IntegralMatrixPair pair;
            AssemblyOptions aopt = spec.assembly;
            aopt.threads = 1;
            try {
                pair = build_pair(job.family, job.n, spec.xi, aopt);
            } catch (const Error& e) {
                for (Side s : sides) results[i].push_back(failed_entry(job.family, job.n, s, spec.xi, e.what()));
                return;
            }
            const double build_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            const bool mirror = spec.mirror && mirror_allowed(pair);
            std::optional<ReportEntry> plus_entry;
            for (Side s : sides) {
                auto t1 = std::chrono::steady_clock::now();
                ReportEntry e;
                e.family = job.family.name();
                e.params = job.family.params();
                e.n = job.n;
                e.side = to_string(s);
                e.xi = to_string(spec.xi);
                e.truncation = pair.truncation;
                e.quad_n = pair.quad.N;
                e.quad_n_tail = pair.quad.N_tail;
                e.quad_h = pair.quad.h;
                e.quad_map = pair.quad.map;
                e.assembly = to_string(pair.route);
                e.row_sum_defect = pair.direct_defect;
                if (mirror && s == Side::Minus && plus_entry) {
                    ReportEntry m = *plus_entry;
                    m.side = to_string(Side::Minus);
                    m.mirrored = true;
                    m.wall_ms = 0.0;
                    results[i].push_back(m);
                    continue;
                }
                try {
                    const CertifiedSpectrum c = certify_pair_side(pair, s, spec.route, spec.tol_mode, spec.max_digits);
                    e.min_real_part = c.spectrum.min_real_part;
                    e.verdict = c.verdict;
                    if (spec.keep_eigenvalues) e.eigenvalues = c.spectrum.eigenvalues;
                    e.digits = c.digits;
                    e.tol_abs = c.tol_abs;
                    e.spectral_route = c.spectrum.source;
                    std::size_t imin = 0;
                    for (std::size_t k = 0; k < c.spectrum.eigenvalues.size(); ++k)
                        if (c.spectrum.eigenvalues[k].real() < c.spectrum.eigenvalues[imin].real()) imin = k;
                    e.tolerance = c.tolerance.empty() ? 0.0 : c.tolerance[imin];
                    e.note = c.note;
                } catch (const Error& err) {
                    e.verdict = Verdict::Inconclusive;
                    e.min_real_part = std::numeric_limits<double>::quiet_NaN();
                    e.note = err.what();
                }
                const double eig_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t1).count();
                e.wall_ms = spec.timings ? build_ms / sides.size() + eig_ms : 0.0;
                if (s == Side::Plus) plus_entry = e;
                results[i].push_back(e);
            }
        },
        spec.threads);

    VerificationReport r;
    for (auto& v : results)
        for (auto& e : v) r.entries.push_back(std::move(e));
    std::stable_sort(r.entries.begin(), r.entries.end(), [](const ReportEntry& a, const ReportEntry& b) {
        if (a.family != b.family) return a.family < b.family;
        if (a.params != b.params) return a.params < b.params;
        if (a.n != b.n) return a.n < b.n;
        return a.side > b.side;  // plus before minus
    });
    r.tally();
    return r;
}

}  // namespace

std::string to_string(SpectralRoute r) {
    switch (r) {
        case SpectralRoute::Nodal:
            return "nodal";
        case SpectralRoute::Coefficient:
            return "coefficient";
        case SpectralRoute::Reassembled:
            return "reassembled";
        default:
            return "auto";
    }
}

SpectralRoute parse_spectral_route(const std::string& s) {
    if (s == "auto") return SpectralRoute::Auto;
    if (s == "nodal") return SpectralRoute::Nodal;
    if (s == "coefficient") return SpectralRoute::Coefficient;
    if (s == "reassembled") return SpectralRoute::Reassembled;
    throw ParameterDomainError("unknown spectral route '" + s + "'");
}

void VerificationReport::tally() {
    verified = falsified = inconclusive = 0;
    for (const auto& e : entries) {
        if (e.verdict == Verdict::Verified)
            ++verified;
        else if (e.verdict == Verdict::Falsified)
            ++falsified;
        else
            ++inconclusive;
    }
}

CertifiedSpectrum certify_pair_side(const IntegralMatrixPair& pair, Side side, SpectralRoute route, TolMode mode,
                                    int max_digits) {
    const Mat& b = side == Side::Plus ? pair.b_plus : pair.b_minus;
    bool coefficient = route == SpectralRoute::Coefficient ||
                       (route == SpectralRoute::Auto && pair.family.kind == FamilyKind::PolySinc);
    if (coefficient && (pair.xi != XiKind::NpcUnit || !std::isfinite(pair.a) || !std::isfinite(pair.b)))
        throw ParameterDomainError("coefficient route needs xi = 1 on a finite interval");
    CertifyOptions opt;
    opt.mode = mode;
    opt.matrix_norm_inf = norm_inf(b);
    opt.max_digits = max_digits;
    SpectrumSource source;
    if (coefficient) {
        source = [&](int d) { return coefficient_spectrum(pair.nodes.nodes, pair.a, pair.b, side, d); };
    } else if (route == SpectralRoute::Reassembled) {
        source = [&](int d) { return reassembled_spectrum(pair, side, d); };
    } else {
        source = [&](int d) {
            Spectrum s = eigvals_digits(b, d);
            s.source = "nodal " + to_string(side);
            return s;
        };
    }
    return certify_right_half_plane(source, opt);
}

VerificationReport run_cpc(const CampaignSpec& spec) {
    CampaignSpec s = spec;
    s.xi = XiKind::Cpc;
    return run_campaign(s);
}

VerificationReport run_npc(const CampaignSpec& spec) {
    if (spec.xi == XiKind::Cpc) throw ParameterDomainError("run_npc: xi must differ from the family weight");
    return run_campaign(spec);
}

ReportFormat parse_format(const std::string& s) {
    if (s == "json") return ReportFormat::Json;
    if (s == "csv") return ReportFormat::Csv;
    throw ParameterDomainError("unknown format '" + s + "'");
}

std::string report_to_json(const VerificationReport& r) {
    json j;
    j["entries"] = json::array();
    for (const auto& e : r.entries) {
        json je;
        je["family"] = e.family;
        je["params"] = e.params;
        je["n"] = e.n;
        je["side"] = e.side;
        je["xi"] = e.xi;
        je["truncation"] = e.truncation ? json(*e.truncation) : json(nullptr);
        je["min_real_part"] = number_or_null(e.min_real_part);
        je["verdict"] = to_string(e.verdict);
        json ev = json::array();
        for (const auto& z : e.eigenvalues) ev.push_back({{"re", z.real()}, {"im", z.imag()}});
        je["eigenvalues"] = ev;
        je["quad"] = {{"N", e.quad_n}, {"N_tail", e.quad_n_tail}, {"h", e.quad_h}, {"map", e.quad_map}};
        je["assembly"] = e.assembly;
        je["spectral_route"] = e.spectral_route;
        je["digits"] = e.digits;
        je["tolerance"] = number_or_null(e.tolerance);
        je["tol_abs"] = number_or_null(e.tol_abs);
        je["row_sum_defect"] = number_or_null(e.row_sum_defect);
        je["mirrored"] = e.mirrored;
        je["wall_ms"] = e.wall_ms;
        je["note"] = e.note;
        j["entries"].push_back(je);
    }
    j["summary"] = {{"verified", r.verified}, {"falsified", r.falsified}, {"inconclusive", r.inconclusive}};
    return j.dump(2) + "\n";
}

VerificationReport report_from_json(const std::string& text) {
    VerificationReport r;
    const json j = json::parse(text);
    for (const auto& je : j.at("entries")) {
        ReportEntry e;
        e.family = je.at("family");
        e.params = je.at("params");
        e.n = je.at("n");
        e.side = je.at("side");
        e.xi = je.at("xi");
        if (!je.at("truncation").is_null()) e.truncation = je.at("truncation").get<double>();
        e.min_real_part = number_or_nan(je.at("min_real_part"));
        const std::string v = je.at("verdict");
        e.verdict = v == "verified" ? Verdict::Verified : v == "falsified" ? Verdict::Falsified : Verdict::Inconclusive;
        for (const auto& z : je.at("eigenvalues")) e.eigenvalues.emplace_back(z.at("re").get<double>(), z.at("im").get<double>());
        e.quad_n = je.at("quad").at("N");
        e.quad_n_tail = je.at("quad").at("N_tail");
        e.quad_h = je.at("quad").at("h");
        e.quad_map = je.at("quad").at("map");
        e.assembly = je.at("assembly");
        e.spectral_route = je.at("spectral_route");
        e.digits = je.at("digits");
        e.tolerance = number_or_nan(je.at("tolerance"));
        e.tol_abs = number_or_nan(je.at("tol_abs"));
        e.row_sum_defect = number_or_nan(je.at("row_sum_defect"));
        e.mirrored = je.at("mirrored");
        e.wall_ms = je.at("wall_ms");
        e.note = je.at("note");
        r.entries.push_back(e);
    }
    r.verified = j.at("summary").at("verified");
    r.falsified = j.at("summary").at("falsified");
    r.inconclusive = j.at("summary").at("inconclusive");
    return r;
}

std::string report_to_csv(const VerificationReport& r) {
    std::ostringstream os;
    os << "family,params,n,side,xi,truncation,min_real_part,verdict,wall_ms\n";
    for (const auto& e : r.entries) {
        os << e.family << ",\"" << e.params << "\"," << e.n << ',' << e.side << ',' << e.xi << ','
           << (e.truncation ? fmt17(*e.truncation) : "") << ',' << fmt17(e.min_real_part) << ','
           << to_string(e.verdict) << ',' << fmt17(e.wall_ms) << '\n';
    }
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

void emit_report(const VerificationReport& r, ReportFormat format, const std::string& path) {
    write_text(path, format == ReportFormat::Json ? report_to_json(r) : report_to_csv(r));
}

ConvergenceExample convergence_example(int id) {
    switch (id) {
        case 1:
            return {1, [](double x) { return std::cbrt(1.0 + x) * std::sqrt(1.0 - x); }, FamilySpec::legendre(),
                    "(1+x)^(1/3) (1-x)^(1/2) on [-1,1]"};
        case 2:
            return {2, [](double x) { return std::pow(x, 0.75) * std::sqrt(2.0 + x) * std::exp(-2.0 * x); },
                    FamilySpec::laguerre(), "x^(3/4) (2+x)^(1/2) e^(-2x) on [0,inf)"};
        case 3:
            return {3,
                    [](double x) {
                        return std::pow(x * x + 2.0, -1.0 / 3.0) * std::pow((x + 2.0) * (x + 2.0) + 4.0, -0.25);
                    },
                    FamilySpec::hermite(), "(x^2+2)^(-1/3) ((x+2)^2+4)^(-1/4) on R"};
        default:
            throw ParameterDomainError("convergence example must be 1, 2 or 3");
    }
}

std::string convergence_csv(const FitResult& fr) {
    std::ostringstream os;
    os << "n,sup_error,l2_error,log_error\n";
    for (const auto& r : fr.rows)
        os << r.n << ',' << fmt17(r.sup_error) << ',' << fmt17(r.l2_error) << ',' << fmt17(r.log_error) << '\n';
    return os.str();
}

FitResult run_convergence(int example, const std::vector<int>& n_list, const std::optional<FamilySpec>& family,
                          const std::string& csv_path, const std::string& json_path) {
    const ConvergenceExample ex = convergence_example(example);
    const FamilySpec fam = family ? *family : ex.family;
    const FitResult fr = convergence_table(fam, ex.f, WeightSpec::of_family(fam), n_list);
    if (!csv_path.empty()) write_text(csv_path, convergence_csv(fr));
    if (!json_path.empty()) {
        json j;
        j["example"] = example;
        j["family"] = fam.name();
        j["params"] = fam.params();
        j["function"] = ex.description;
        j["slope"] = fr.slope;
        j["intercept"] = fr.intercept;
        j["r_estimate"] = fr.r_estimate;
        j["note"] = fr.note;
        j["l2_norm"] = fam.interval().bounded() ? "L2" : "weighted L2";
        json pts = json::array();
        for (const auto& [n, le] : fr.log_errors) pts.push_back({{"n", n}, {"log_error", le}});
        j["log_errors"] = pts;
        write_text(json_path, j.dump(2) + "\n");
    }
    return fr;
}

GridSpec auto_grid(const std::vector<Complex>& ev, int n_re, int n_im) {
    double rmin = 0, rmax = 0, imin = 0, imax = 0;
    if (!ev.empty()) {
        rmin = rmax = ev[0].real();
        imin = imax = ev[0].imag();
        for (const auto& z : ev) {
            rmin = std::min(rmin, z.real());
            rmax = std::max(rmax, z.real());
            imin = std::min(imin, z.imag());
            imax = std::max(imax, z.imag());
        }
    }
    const double scale = std::max({rmax - rmin, imax - imin, std::abs(rmax), std::abs(imax), 1e-12});
    double wr = std::max(rmax - rmin, 0.1 * scale), wi = std::max(imax - imin, 0.1 * scale);
    const double cr = 0.5 * (rmin + rmax), ci = 0.5 * (imin + imax);
    GridSpec g;
    g.re_min = cr - 0.75 * wr;
    g.re_max = cr + 0.75 * wr;
    g.im_min = ci - 0.75 * wi;
    g.im_max = ci + 0.75 * wi;
    g.n_re = n_re;
    g.n_im = n_im;
    return g;
}

std::string resolvent_csv(const ResolventField& f) {
    std::ostringstream os;
    os << "re,im,value,dist_value,on_spectrum\n";
    const auto& g = f.grid;
    for (int iy = 0; iy < g.n_im; ++iy) {
        const double im = g.n_im == 1 ? g.im_min : g.im_min + (g.im_max - g.im_min) * iy / (g.n_im - 1);
        for (int ix = 0; ix < g.n_re; ++ix) {
            const double re = g.n_re == 1 ? g.re_min : g.re_min + (g.re_max - g.re_min) * ix / (g.n_re - 1);
            os << fmt17(re) << ',' << fmt17(im) << ',' << fmt17(f.values(iy, ix)) << ',' << fmt17(f.dist_values(iy, ix))
               << ',' << f.on_spectrum(iy, ix) << '\n';
        }
    }
    return os.str();
}

ResolventField run_resolvent(const IntegralMatrixPair& pair, Side side, const std::optional<GridSpec>& grid,
                             const std::string& csv_path) {
    const Mat& b = side == Side::Plus ? pair.b_plus : pair.b_minus;
    const GridSpec g = grid ? *grid : auto_grid(eigvals(b).eigenvalues, 60, 60);
    ResolventField f = resolvent_field(b, g);
    if (!csv_path.empty()) write_text(csv_path, resolvent_csv(f));
    return f;
}

std::string pair_to_json(const IntegralMatrixPair& p) {
    json j;
    j["family"] = p.family.name();
    j["params"] = p.family.params();
    j["alpha"] = p.family.alpha;
    j["beta"] = p.family.beta;
    j["eta"] = p.family.eta;
    j["n"] = p.nodes.nodes.size();
    j["xi"] = to_string(p.xi);
    j["quad"] = {{"N", p.quad.N}, {"N_tail", p.quad.N_tail}, {"h", p.quad.h}, {"map", p.quad.map}};
    j["truncation"] = p.truncation ? json(*p.truncation) : json(nullptr);
    j["interval"] = {number_or_null(p.a), number_or_null(p.b)};
    j["nodes"] = p.nodes.nodes;
    j["weights"] = p.weights;
    j["assembly"] = to_string(p.route);
    j["row_sum_defect"] = number_or_null(p.direct_defect);
    auto rows = [](const Mat& m) {
        json a = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(std::vector<double>(m.row(i), m.row(i) + m.cols()));
        return a;
    };
    j["b_plus"] = rows(p.b_plus);
    j["b_minus"] = rows(p.b_minus);
    return j.dump(1) + "\n";
}

IntegralMatrixPair pair_from_json(const std::string& text) {
    const json j = json::parse(text);
    IntegralMatrixPair p;
    p.family = parse_family(j.at("family"), j.value("alpha", 0.0), j.value("beta", 0.0), j.value("eta", 0.0));
    const std::string xi = j.at("xi");
    p.xi = xi == "cpc" ? XiKind::Cpc : xi == "unit" ? XiKind::NpcUnit : XiKind::Custom;
    if (!j.at("truncation").is_null()) p.truncation = j.at("truncation").get<double>();
    const auto& iv = j.at("interval");
    const double inf = std::numeric_limits<double>::infinity();
    p.a = iv[0].is_null() ? -inf : iv[0].get<double>();
    p.b = iv[1].is_null() ? inf : iv[1].get<double>();
    if (p.family.kind == FamilyKind::PolySinc) {
        p.family.a = p.a;
        p.family.b = p.b;
    }
    p.nodes.family = p.family;
    p.nodes.nodes = j.at("nodes").get<std::vector<double>>();
    p.nodes.n = static_cast<int>(p.nodes.nodes.size());
    p.weights = j.at("weights").get<std::vector<double>>();
    p.quad.N = j.at("quad").at("N");
    p.quad.N_tail = j.at("quad").at("N_tail");
    p.quad.h = j.at("quad").at("h");
    p.quad.map = j.at("quad").at("map");
    p.direct_defect = number_or_nan(j.at("row_sum_defect"));
    auto mat = [](const json& a) {
        const std::size_t m = a.size();
        Mat out(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            if (a[i].size() != m) throw IoError("pair JSON: matrix is not square");
            for (std::size_t k = 0; k < m; ++k) out(i, k) = a[i][k].get<double>();
        }
        return out;
    };
    p.b_plus = mat(j.at("b_plus"));
    p.b_minus = mat(j.at("b_minus"));
    if (p.b_plus.rows() != p.nodes.nodes.size()) throw IoError("pair JSON: node count does not match matrices");
    return p;
}

std::string spectrum_to_json(const Spectrum& s) {
    json j;
    j["m"] = s.eigenvalues.size();
    json ev = json::array();
    for (const auto& z : s.eigenvalues) ev.push_back({{"re", z.real()}, {"im", z.imag()}});
    j["eigenvalues"] = ev;
    j["min_real_part"] = number_or_null(s.min_real_part);
    j["iterations"] = s.iterations;
    j["converged"] = s.converged;
    j["digits"] = s.digits;
    return j.dump(2) + "\n";
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    if (s.find(':') != std::string::npos) {
        int a = 0, step = 0, b = 0;
        if (std::sscanf(s.c_str(), "%d:%d:%d", &a, &step, &b) != 3 || step <= 0)
            throw ParameterDomainError("bad range '" + s + "' (expected start:step:end)");
        for (int v = a; v <= b; v += step) out.push_back(v);
        return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ParameterDomainError("bad integer '" + item + "' in list");
        }
    }
    return out;
}

}  // namespace orthospec
