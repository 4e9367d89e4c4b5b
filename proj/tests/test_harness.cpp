#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "orthospec/error.hpp"
#include "orthospec/harness.hpp"

using namespace orthospec;

namespace {

CampaignSpec small_npc() {
    CampaignSpec s;
    s.families = {FamilySpec::chebyshev_t(), FamilySpec::jacobi(2, 2), FamilySpec::jacobi(1, 0)};
    s.n_list = {8, 12};
    s.xi = XiKind::NpcUnit;
    s.timings = false;
    return s;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST(Campaign, OrderingAndTallies) {
    const auto r = run_npc(small_npc());
    ASSERT_EQ(r.entries.size(), 12u);
    int v = 0, f = 0, i = 0;
    for (const auto& e : r.entries) {
        v += e.verdict == Verdict::Verified;
        f += e.verdict == Verdict::Falsified;
        i += e.verdict == Verdict::Inconclusive;
    }
    EXPECT_EQ(r.verified, v);
    EXPECT_EQ(r.falsified, f);
    EXPECT_EQ(r.inconclusive, i);
    EXPECT_EQ(r.entries[0].family, "chebyshev-t");
    EXPECT_EQ(r.entries[0].side, "plus");
    EXPECT_EQ(r.entries[1].side, "minus");
    EXPECT_EQ(r.entries[2].n, 12);
}

TEST(Campaign, Deterministic) {
    const auto a = report_to_json(run_npc(small_npc()));
    CampaignSpec s = small_npc();
    s.threads = 1;
    const auto b = report_to_json(run_npc(s));
    EXPECT_EQ(a, b);
}

TEST(Campaign, MirrorMatchesDirect) {
    CampaignSpec s;
    s.families = {FamilySpec::legendre(), FamilySpec::gegenbauer(2), FamilySpec::hermite()};
    s.n_list = {10, 20};
    s.timings = false;
    const auto m = run_cpc(s);
    s.mirror = false;
    const auto d = run_cpc(s);
    ASSERT_EQ(m.entries.size(), d.entries.size());
    for (std::size_t k = 0; k < m.entries.size(); ++k) {
        if (m.entries[k].side != "minus") continue;
        EXPECT_TRUE(m.entries[k].mirrored);
        EXPECT_FALSE(d.entries[k].mirrored);
        EXPECT_LE(spectrum_distance(m.entries[k].eigenvalues, d.entries[k].eigenvalues), 1e-7);
        EXPECT_EQ(m.entries[k].verdict, d.entries[k].verdict);
    }
}

TEST(Campaign, NoMirrorForAsymmetricWeights) {
    CampaignSpec s;
    s.families = {FamilySpec::jacobi(1, 0), FamilySpec::laguerre()};
    s.n_list = {6};
    for (const auto& e : run_cpc(s).entries) EXPECT_FALSE(e.mirrored);
}

TEST(Campaign, DivergentEntriesAreInconclusive) {
    CampaignSpec s;
    s.families = {FamilySpec::laguerre()};
    s.n_list = {6};
    s.xi = XiKind::NpcUnit;
    const auto r = run_npc(s);
    ASSERT_EQ(r.entries.size(), 2u);
    for (const auto& e : r.entries) {
        EXPECT_EQ(e.verdict, Verdict::Inconclusive);
        EXPECT_NE(e.note.find("truncation"), std::string::npos);
    }
}

TEST(Campaign, InvalidSpecs) {
    CampaignSpec s;
    s.n_list = {5};
    EXPECT_THROW(run_cpc(s), ParameterDomainError);
    s.families = {FamilySpec::legendre()};
    s.n_list = {10, 5};
    EXPECT_THROW(run_cpc(s), ParameterDomainError);
    s.n_list = {70};
    s.families = {FamilySpec::hermite()};
    EXPECT_THROW(run_cpc(s), ParameterDomainError);
    s.xi = XiKind::Cpc;
    EXPECT_THROW(run_npc(s), ParameterDomainError);
}

TEST(Report, JsonRoundTrip) {
    auto r = run_npc(small_npc());
    r.entries[0].truncation = 12.5;
    r.entries[1].wall_ms = 3.25;
    EXPECT_EQ(report_from_json(report_to_json(r)), r);
}

TEST(Report, EmptyCampaign) {
    VerificationReport r;
    const auto back = report_from_json(report_to_json(r));
    EXPECT_TRUE(back.entries.empty());
    EXPECT_EQ(back.verified + back.falsified + back.inconclusive, 0);
    const auto csv = report_to_csv(r);
    EXPECT_EQ(csv, "family,params,n,side,xi,truncation,min_real_part,verdict,wall_ms\n");
}

TEST(Report, CsvColumns) {
    const auto r = run_npc(small_npc());
    std::istringstream in(report_to_csv(r));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "family,params,n,side,xi,truncation,min_real_part,verdict,wall_ms");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 12);
}

TEST(Report, EmitReportsPathOnFailure) {
    try {
        emit_report(VerificationReport{}, ReportFormat::Json, "/nonexistent-dir/x/report.json");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x/report.json"), std::string::npos);
    }
}

TEST(Pair, JsonRoundTrip) {
    AssemblyOptions t;
    t.truncation = 80.0;
    for (const auto& p : {build_pair(FamilySpec::jacobi(1, 0), 7, XiKind::Cpc), build_pair(FamilySpec::polysinc(0, 2), 9, XiKind::NpcUnit),
                          build_pair(FamilySpec::laguerre(), 5, XiKind::NpcUnit, t), build_pair(FamilySpec::hermite(), 5, XiKind::Cpc)}) {
        const auto q = pair_from_json(pair_to_json(p));
        EXPECT_EQ(q.b_plus.data(), p.b_plus.data());
        EXPECT_EQ(q.b_minus.data(), p.b_minus.data());
        EXPECT_EQ(q.nodes.nodes, p.nodes.nodes);
        EXPECT_EQ(q.a, p.a);
        EXPECT_EQ(q.b, p.b);
        EXPECT_EQ(q.truncation, p.truncation);
        EXPECT_EQ(q.family.name(), p.family.name());
        EXPECT_EQ(q.family.params(), p.family.params());
        EXPECT_EQ(q.xi, p.xi);
    }
}

TEST(Certify, CoefficientRouteNeedsUnitXi) {
    const auto p = build_pair(FamilySpec::legendre(), 5, XiKind::Cpc);
    EXPECT_THROW(certify_pair_side(p, Side::Plus, SpectralRoute::Coefficient, TolMode::Certified), ParameterDomainError);
    const auto q = build_pair(FamilySpec::legendre(), 5, XiKind::NpcUnit);
    const auto c = certify_pair_side(q, Side::Plus, SpectralRoute::Coefficient, TolMode::Certified);
    const auto d = certify_pair_side(q, Side::Plus, SpectralRoute::Nodal, TolMode::Certified);
    EXPECT_EQ(c.verdict, Verdict::Verified);
    EXPECT_LE(spectrum_distance(c.spectrum.eigenvalues, d.spectrum.eigenvalues), 1e-10);
}

TEST(Convergence, ExamplesAndCsv) {
    EXPECT_THROW(convergence_example(4), ParameterDomainError);
    const auto dir = std::filesystem::temp_directory_path() / "orthospec_conv_test";
    std::filesystem::create_directories(dir);
    const auto csv = (dir / "t.csv").string(), js = (dir / "t.json").string();
    const auto fr = run_convergence(1, {4, 8, 12, 16}, std::nullopt, csv, js);
    EXPECT_LT(fr.slope, 0.0);
    const auto text = slurp(csv);
    EXPECT_EQ(text.substr(0, text.find('\n')), "n,sup_error,l2_error,log_error");
    EXPECT_NE(slurp(js).find("\"slope\""), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Resolvent, AutoGridCoversSpectrum) {
    const auto p = build_pair(FamilySpec::legendre(), 8, XiKind::Cpc);
    const auto ev = eigvals(p.b_plus).eigenvalues;
    const auto g = auto_grid(ev, 20, 20);
    for (const auto& z : ev) {
        EXPECT_GT(z.real(), g.re_min);
        EXPECT_LT(z.real(), g.re_max);
        EXPECT_GT(z.imag(), g.im_min);
        EXPECT_LT(z.imag(), g.im_max);
    }
    const auto f = run_resolvent(p, Side::Plus, g, "");
    EXPECT_EQ(f.values.rows(), 20u);
    std::istringstream in(resolvent_csv(f));
    std::string head;
    std::getline(in, head);
    EXPECT_EQ(head.rfind("re,im,value,dist_value", 0), 0u);
}

TEST(IntList, Parse) {
    EXPECT_EQ(parse_int_list("4:4:16"), (std::vector<int>{4, 8, 12, 16}));
    EXPECT_EQ(parse_int_list("10,20,30"), (std::vector<int>{10, 20, 30}));
    EXPECT_THROW(parse_int_list("4:0:16"), ParameterDomainError);
    EXPECT_THROW(parse_int_list("a,b"), ParameterDomainError);
}
