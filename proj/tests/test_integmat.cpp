#include <gtest/gtest.h>

#include <cmath>

#include "orthospec/error.hpp"
#include "orthospec/integmat.hpp"
#include "orthospec/spectra.hpp"
#include "oracles.hpp"

using namespace orthospec;

namespace {

template <class W>
void expect_matches_antiderivative(const IntegralMatrixPair& p, W wt, double tol) {
    const auto& x = p.nodes.nodes;
    const int m = static_cast<int>(x.size());
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            const double plus = static_cast<double>(oracle::basis_integral(x, k, p.a, x[j], wt));
            const double minus = static_cast<double>(oracle::basis_integral(x, k, x[j], p.b, wt));
            ASSERT_NEAR(p.b_plus(j, k), plus, tol) << p.family.name() << " j=" << j << " k=" << k;
            ASSERT_NEAR(p.b_minus(j, k), minus, tol) << p.family.name() << " j=" << j << " k=" << k;
        }
}

std::vector<Complex> spectrum(const Mat& a) { return eigvals(a).eigenvalues; }

}  // namespace

TEST(BuildPair, LegendreOne) {
    const auto p = build_pair(FamilySpec::legendre(), 1, XiKind::Cpc);
    EXPECT_NEAR(p.b_plus(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(p.b_minus(0, 0), 1.0, 1e-12);
}

TEST(BuildPair, LegendreTwoClosedForm) {
    const auto p = build_pair(FamilySpec::legendre(), 2, XiKind::Cpc);
    const double r = 1 / std::sqrt(3.0);
    EXPECT_NEAR(p.b_plus(0, 0), 0.5, 1e-9);
    EXPECT_NEAR(p.b_plus(0, 1), 0.5 - r, 1e-9);
    EXPECT_NEAR(p.b_plus(1, 0), 0.5 + r, 1e-9);
    EXPECT_NEAR(p.b_plus(1, 1), 0.5, 1e-9);
    EXPECT_LE(row_sum_defect(p), 1e-10);
    EXPECT_LE(p.direct_defect, 1e-10);
}

TEST(BuildPair, ExactAntiderivativeLegendreCpc) {
    for (int n : {3, 8, 15, 20}) {
        const auto p = build_pair(FamilySpec::legendre(), n, XiKind::Cpc);
        expect_matches_antiderivative(p, [](oracle::ld) { return 1.0L; }, 1e-9);
    }
}

TEST(BuildPair, ExactAntiderivativePolynomialWeight) {
    // (1-t)^2 (1+t)^2 is a polynomial, so Gauss-Legendre is exact
    for (const auto& f : {FamilySpec::jacobi(2, 2), FamilySpec::gegenbauer(2.5)}) {
        const auto p = build_pair(f, 12, XiKind::Cpc);
        expect_matches_antiderivative(p, [](oracle::ld t) { return (1 - t * t) * (1 - t * t); }, 1e-9);
    }
    const auto p = build_pair(FamilySpec::jacobi(1, 0), 10, XiKind::Cpc);
    expect_matches_antiderivative(p, [](oracle::ld t) { return 1 - t; }, 1e-9);
}

TEST(BuildPair, ExactAntiderivativeUnitXi) {
    for (const auto& f : {FamilySpec::chebyshev_t(), FamilySpec::jacobi(2, 2), FamilySpec::gegenbauer(10),
                          FamilySpec::polysinc()}) {
        for (int n : {5, 9, 13, 20}) {
            if (f.kind == FamilyKind::PolySinc && n > 9) continue;
            const auto p = build_pair(f, n, XiKind::NpcUnit);
            expect_matches_antiderivative(p, [](oracle::ld) { return 1.0L; }, 1e-9);
        }
    }
}

TEST(BuildPair, RowSumIdentityCpc) {
    for (const auto& f : {FamilySpec::legendre(), FamilySpec::chebyshev_t(), FamilySpec::chebyshev_u(), FamilySpec::jacobi(2, 2),
                          FamilySpec::jacobi(1, 0), FamilySpec::gegenbauer(2), FamilySpec::gegenbauer(10),
                          FamilySpec::laguerre(), FamilySpec::hermite()}) {
        for (int n : {10, 20}) {
            const auto p = build_pair(f, n, XiKind::Cpc);
            const auto w = gauss_weights(f, n).gauss_weights;
            EXPECT_LE(row_sum_defect(p, w), 1e-8) << f.name() << " n=" << n;
            EXPECT_LE(p.direct_defect, 1e-8) << f.name() << " " << f.params() << " n=" << n;
        }
    }
}

TEST(BuildPair, ChebyshevTDefaultQuadrature) {
    const auto p = build_pair(FamilySpec::chebyshev_t(), 10, XiKind::Cpc);
    for (double w : p.weights) EXPECT_NEAR(w, std::numbers::pi / 10, 1e-14);
    EXPECT_LE(p.direct_defect, 1e-8);
}

TEST(BuildPair, DefectFallsWithQuadN) {
    AssemblyOptions lo, hi;
    lo.quad_n = 64;
    hi.quad_n = 256;
    const auto a = build_pair(FamilySpec::chebyshev_t(), 10, XiKind::Cpc, lo);
    const auto b = build_pair(FamilySpec::chebyshev_t(), 10, XiKind::Cpc, hi);
    EXPECT_EQ(a.quad.N, 64);
    EXPECT_EQ(b.quad.N, 256);
    EXPECT_LT(b.direct_defect, a.direct_defect);
}

TEST(BuildPair, RoutesAgree) {
    AssemblyOptions c, d;
    c.route = AssemblyRoute::Complement;
    d.route = AssemblyRoute::Direct;
    const auto best = build_pair(FamilySpec::laguerre(), 12, XiKind::Cpc);
    const auto comp = build_pair(FamilySpec::laguerre(), 12, XiKind::Cpc, c);
    const auto dir = build_pair(FamilySpec::laguerre(), 12, XiKind::Cpc, d);
    EXPECT_LE(row_sum_defect(comp), 1e-15);
    EXPECT_TRUE(std::isnan(comp.direct_defect));
    for (int j = 0; j < 12; ++j)
        for (int k = 0; k < 12; ++k) {
            EXPECT_NEAR(best.b_plus(j, k), comp.b_plus(j, k), 1e-9);
            EXPECT_NEAR(best.b_minus(j, k), dir.b_minus(j, k), 1e-9);
        }
}

TEST(BuildPair, Refusals) {
    EXPECT_THROW(build_pair(FamilySpec::laguerre(), 10, XiKind::NpcUnit), DivergentIntegralError);
    EXPECT_THROW(build_pair(FamilySpec::hermite(), 10, XiKind::NpcUnit), DivergentIntegralError);
    EXPECT_THROW(build_pair(FamilySpec::polysinc(), 9, XiKind::Cpc), ParameterDomainError);
    AssemblyOptions t;
    t.truncation = 5.0;  // largest Laguerre node for n=10 is ~29.9
    EXPECT_THROW(build_pair(FamilySpec::laguerre(), 10, XiKind::NpcUnit, t), ParameterDomainError);
    EXPECT_THROW(build_pair(FamilySpec::legendre(), 0, XiKind::Cpc), ParameterDomainError);
}

TEST(BuildPair, TruncationIsRecorded) {
    AssemblyOptions t;
    t.truncation = 60.0;
    const auto p = build_pair(FamilySpec::laguerre(), 10, XiKind::NpcUnit, t);
    ASSERT_TRUE(p.truncation.has_value());
    EXPECT_EQ(*p.truncation, 60.0);
    EXPECT_EQ(p.b, 60.0);
    const auto h = build_pair(FamilySpec::hermite(), 8, XiKind::NpcUnit, t);
    EXPECT_EQ(h.a, -60.0);
    EXPECT_EQ(h.b, 60.0);
}

TEST(BuildPair, ThreadCountDoesNotChangeEntries) {
    AssemblyOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const auto a = build_pair(FamilySpec::jacobi(1, 0), 17, XiKind::Cpc, one);
    const auto b = build_pair(FamilySpec::jacobi(1, 0), 17, XiKind::Cpc, many);
    EXPECT_EQ(a.b_plus.data(), b.b_plus.data());
    EXPECT_EQ(a.b_minus.data(), b.b_minus.data());
}

TEST(Rescale, Entries) {
    const auto p = build_pair(FamilySpec::legendre(), 2, XiKind::Cpc);
    const auto same = rescale(p, 0, 2);
    const auto half = rescale(p, 0, 1);
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            EXPECT_NEAR(same.b_plus(j, k), p.b_plus(j, k), 1e-15);
            EXPECT_NEAR(half.b_plus(j, k), 0.5 * p.b_plus(j, k), 1e-15);
            EXPECT_NEAR(half.b_minus(j, k), 0.5 * p.b_minus(j, k), 1e-15);
        }
    EXPECT_NEAR(half.nodes.nodes[0], 0.5 - 0.5 / std::sqrt(3.0), 1e-15);
    EXPECT_THROW(rescale(build_pair(FamilySpec::laguerre(), 3, XiKind::Cpc), 0, 1), ParameterDomainError);
}

TEST(Rescale, MatchesDirectAssemblyOnNewInterval) {
    // PolySinc nodes on (0, 3) assembled directly versus the (-1,1) pair rescaled
    const auto p = build_pair(FamilySpec::polysinc(), 9, XiKind::NpcUnit);
    const auto q = build_pair(FamilySpec::polysinc(0, 3), 9, XiKind::NpcUnit);
    const auto r = rescale(p, 0, 3);
    for (int j = 0; j < 9; ++j)
        for (int k = 0; k < 9; ++k) EXPECT_NEAR(r.b_plus(j, k), q.b_plus(j, k), 1e-10);
}

TEST(Rescale, EigenvaluesScale) {
    for (const auto& f : {FamilySpec::legendre(), FamilySpec::chebyshev_t()})
        for (int n : {5, 20, 40}) {
            const auto p = build_pair(f, n, XiKind::Cpc);
            const auto r = rescale(p, 2.0, 2.5);
            auto ev = spectrum(p.b_plus);
            for (auto& z : ev) z *= 0.25;
            EXPECT_LE(spectrum_distance(spectrum(r.b_plus), ev), 1e-8) << f.name() << " n=" << n;
        }
}

TEST(Symmetry, PlusAndMinusSpectraAgree) {
    AssemblyOptions d;
    d.route = AssemblyRoute::Direct;
    for (const auto& f : {FamilySpec::legendre(), FamilySpec::chebyshev_t(), FamilySpec::chebyshev_u(),
                          FamilySpec::jacobi(2, 2), FamilySpec::gegenbauer(2)})
        for (int n : {5, 10, 20, 40}) {
            const auto p = build_pair(f, n, XiKind::Cpc, d);
            EXPECT_LE(spectrum_distance(reassembled_spectrum(p, Side::Plus, 50).eigenvalues,
                                        reassembled_spectrum(p, Side::Minus, 50).eigenvalues),
                      1e-7)
                << f.name() << " n=" << n;
        }
    for (int n : {5, 10, 20, 40}) {
        const auto p = build_pair(FamilySpec::hermite(), n, XiKind::Cpc, d);
        EXPECT_LE(spectrum_distance(spectrum(p.b_plus), spectrum(p.b_minus)), 1e-7) << "hermite n=" << n;
    }
}

TEST(Symmetry, DoubleSpectraAgreeAtSmallN) {
    for (const auto& f : {FamilySpec::legendre(), FamilySpec::jacobi(2, 2), FamilySpec::gegenbauer(2)})
        for (int n : {5, 10, 20}) {
            const auto p = build_pair(f, n, XiKind::Cpc);
            EXPECT_LE(spectrum_distance(spectrum(p.b_plus), spectrum(p.b_minus)), 1e-7) << f.name() << " n=" << n;
        }
}

TEST(Symmetry, AsymmetricWeightSpectraDiffer) {
    const auto p = build_pair(FamilySpec::jacobi(-0.5, 0.3), 10, XiKind::Cpc);
    EXPECT_GE(spectrum_distance(reassembled_spectrum(p, Side::Plus, 50).eigenvalues,
                                reassembled_spectrum(p, Side::Minus, 50).eigenvalues),
              1e-3);
}

TEST(Reassembled, MatchesDoubleMatrixAtSmallN) {
    for (const auto& f : {FamilySpec::chebyshev_t(), FamilySpec::jacobi(1, 0), FamilySpec::gegenbauer(10)}) {
        const auto p = build_pair(f, 8, XiKind::Cpc);
        for (Side s : {Side::Plus, Side::Minus})
            EXPECT_LE(spectrum_distance(reassembled_spectrum(p, s, 50).eigenvalues,
                                        spectrum(s == Side::Plus ? p.b_plus : p.b_minus)),
                      1e-10)
                << f.name();
    }
}

TEST(Reassembled, Errors) {
    const auto p = build_pair(FamilySpec::hermite(), 6, XiKind::Cpc);
    EXPECT_THROW(reassembled_spectrum(p, Side::Plus, 50), ParameterDomainError);
}

TEST(Symmetry, ReflectionStructure) {
    // x -> -x maps B+ to B- with reversed index order
    const auto p = build_pair(FamilySpec::chebyshev_u(), 9, XiKind::Cpc);
    for (int j = 0; j < 9; ++j)
        for (int k = 0; k < 9; ++k) EXPECT_NEAR(p.b_plus(j, k), p.b_minus(8 - j, 8 - k), 1e-10);
}

TEST(UnitWeights, IntegrateBasis) {
    const NodeSet ns = roots(FamilySpec::chebyshev_u(), 7);
    const auto w = unit_weights(ns, -1, 1);
    for (int k = 0; k < 7; ++k)
        EXPECT_NEAR(w[k], static_cast<double>(oracle::basis_integral(ns.nodes, k, -1, 1, [](oracle::ld) { return 1.0L; })), 1e-14);
}

TEST(CoefficientSpectrum, AgreesWithNodal) {
    for (const auto& f : {FamilySpec::chebyshev_t(), FamilySpec::polysinc()}) {
        const auto p = build_pair(f, 7, XiKind::NpcUnit);
        for (Side s : {Side::Plus, Side::Minus}) {
            const auto c = coefficient_spectrum(p.nodes.nodes, -1, 1, s, 50);
            EXPECT_LE(spectrum_distance(c.eigenvalues, spectrum(s == Side::Plus ? p.b_plus : p.b_minus)), 1e-9);
        }
    }
}

TEST(CoefficientSpectrum, AgreesWithReassembled) {
    for (const auto& f : {FamilySpec::chebyshev_t(), FamilySpec::polysinc()})
        for (int n : {13, 25}) {
            const auto p = build_pair(f, n, XiKind::NpcUnit);
            for (Side s : {Side::Plus, Side::Minus})
                EXPECT_LE(spectrum_distance(coefficient_spectrum(p.nodes.nodes, -1, 1, s, 50).eigenvalues,
                                            reassembled_spectrum(p, s, 100).eigenvalues),
                          1e-12)
                    << f.name() << " n=" << n;
        }
}
