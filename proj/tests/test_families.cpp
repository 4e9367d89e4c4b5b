#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "orthospec/error.hpp"
#include "orthospec/families.hpp"
#include "oracles.hpp"

using namespace orthospec;

namespace {

std::vector<FamilySpec> all_families() {
    return {FamilySpec::legendre(),       FamilySpec::chebyshev_t(),       FamilySpec::chebyshev_u(),
            FamilySpec::jacobi(2, 2),     FamilySpec::jacobi(1, 0),        FamilySpec::jacobi(-0.5, 0.3),
            FamilySpec::gegenbauer(2),    FamilySpec::gegenbauer(10),      FamilySpec::laguerre(),
            FamilySpec::hermite()};
}

// int w x^k by closed forms, long double
long double exact_moment(const FamilySpec& f, int k) {
    using std::lgamma;
    switch (f.kind) {
        case FamilyKind::Laguerre:
            return std::tgamma(static_cast<long double>(k + 1));
        case FamilyKind::Hermite:
            return k % 2 ? 0.0L : std::tgamma((k + 1) / 2.0L);
        default: {
            // int_{-1}^1 (1-x)^a (1+x)^b x^k dx via x = 2t - 1 and the binomial sum, 100 digits
            using big = boost::multiprecision::cpp_bin_float_100;
            const auto [a, b] = f.jacobi_exponents();
            big s = 0;
            for (int j = 0; j <= k; ++j) {
                const big binom = boost::math::binomial_coefficient<double>(k, j);
                const big beta = boost::math::beta(big(a) + 1, big(b) + j + 1);
                s += binom * ((k - j) % 2 ? -1 : 1) * pow(big(2), j) * beta;
            }
            return static_cast<long double>(s * pow(big(2), big(a + b + 1)));
        }
    }
}

}  // namespace

TEST(Recurrence, LegendreTwo) {
    const auto t = recurrence_coeffs(FamilySpec::legendre(), 2);
    EXPECT_NEAR(t.diag[0], 0.0, 1e-15);
    EXPECT_NEAR(t.diag[1], 0.0, 1e-15);
    EXPECT_NEAR(t.offdiag[0], 1 / std::sqrt(3.0), 1e-15);
}

TEST(Recurrence, ChebyshevTThree) {
    const auto t = recurrence_coeffs(FamilySpec::chebyshev_t(), 3);
    for (double d : t.diag) EXPECT_NEAR(d, 0.0, 1e-15);
    EXPECT_NEAR(t.offdiag[0], 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(t.offdiag[1], 0.5, 1e-15);
}

TEST(Recurrence, LaguerreTwo) {
    const auto t = recurrence_coeffs(FamilySpec::laguerre(), 2);
    EXPECT_DOUBLE_EQ(t.diag[0], 1.0);
    EXPECT_DOUBLE_EQ(t.diag[1], 3.0);
    EXPECT_DOUBLE_EQ(t.offdiag[0], 1.0);
}

TEST(Recurrence, RejectsBadParameters) {
    EXPECT_THROW(recurrence_coeffs(FamilySpec::jacobi(-1.0, 0.0), 3), ParameterDomainError);
    EXPECT_THROW(recurrence_coeffs(FamilySpec::gegenbauer(-0.5), 3), ParameterDomainError);
    EXPECT_THROW(parse_family("bessel"), ParameterDomainError);
}

TEST(EvalWithDerivative, Examples) {
    auto p = eval_with_derivative(FamilySpec::legendre(), 2, 0.0);
    EXPECT_DOUBLE_EQ(p.p, -0.5);
    EXPECT_DOUBLE_EQ(p.dp, 0.0);
    p = eval_with_derivative(FamilySpec::chebyshev_t(), 3, 1.0);
    EXPECT_DOUBLE_EQ(p.p, 1.0);
    EXPECT_DOUBLE_EQ(p.dp, 9.0);
    p = eval_with_derivative(FamilySpec::hermite(), 2, 0.0);
    EXPECT_DOUBLE_EQ(p.p, -2.0);
    EXPECT_DOUBLE_EQ(p.dp, 0.0);
    EXPECT_FALSE(p.normalization.empty());
}

TEST(EvalWithDerivative, ScaledMatchesPlainForLargeHermite) {
    const FamilySpec h = FamilySpec::hermite();
    const ScaledPoly s = eval_scaled(h, 90, 3.3);
    const PolyEval e = eval_with_derivative(h, 90, 3.3);
    EXPECT_TRUE(std::isfinite(s.p));
    if (std::isfinite(e.p) && e.p != 0.0) EXPECT_NEAR(std::ldexp(s.p, s.exponent) / e.p, 1.0, 1e-10);
}

TEST(Roots, ClosedForms) {
    auto r = roots(FamilySpec::legendre(), 2);
    EXPECT_NEAR(r.nodes[0], -1 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r.nodes[1], 1 / std::sqrt(3.0), 1e-15);
    r = roots(FamilySpec::chebyshev_t(), 3);
    EXPECT_NEAR(r.nodes[0], -std::sqrt(3.0) / 2, 1e-15);
    EXPECT_NEAR(r.nodes[1], 0.0, 1e-15);
    EXPECT_NEAR(r.nodes[2], std::sqrt(3.0) / 2, 1e-15);
    r = roots(FamilySpec::laguerre(), 2);
    EXPECT_NEAR(r.nodes[0], 2 - std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(r.nodes[1], 2 + std::sqrt(2.0), 1e-14);
}

TEST(Roots, InterlacingAllFamilies) {
    for (const auto& f : all_families()) {
        const int top = f.interval().bounded() ? 100 : 60;
        for (int n = 1; n < top; n += (n < 10 ? 1 : 7)) {
            const auto a = roots(f, n).nodes;
            const auto b = roots(f, n + 1).nodes;
            for (int k = 0; k < n; ++k) {
                EXPECT_LT(b[k], a[k]) << f.name() << " " << f.params() << " n=" << n;
                EXPECT_LT(a[k], b[k + 1]) << f.name() << " " << f.params() << " n=" << n;
            }
        }
    }
}

TEST(Roots, ResidualFiniteIntervals) {
    for (const auto& f : all_families()) {
        if (!f.interval().bounded()) continue;
        for (int n : {5, 20, 50, 100}) {
            for (double x : roots(f, n).nodes) {
                const PolyEval e = eval_with_derivative(f, n, x);
                EXPECT_LE(std::abs(e.p) / std::max(1.0, std::abs(e.dp)), 1e-12) << f.name() << " n=" << n;
            }
        }
    }
}

TEST(Roots, StrictlyInside) {
    for (const auto& f : all_families()) {
        const auto r = roots(f, 40);
        for (std::size_t k = 0; k < r.nodes.size(); ++k) {
            EXPECT_TRUE(f.interval().contains_open(r.nodes[k]));
            if (k) EXPECT_GT(r.nodes[k], r.nodes[k - 1]);
        }
    }
}

TEST(GaussWeights, Examples) {
    auto g = gauss_weights(FamilySpec::legendre(), 2);
    EXPECT_NEAR(g.gauss_weights[0], 1.0, 1e-15);
    EXPECT_NEAR(g.gauss_weights[1], 1.0, 1e-15);
    for (int n : {3, 10, 37}) {
        g = gauss_weights(FamilySpec::chebyshev_t(), n);
        for (double w : g.gauss_weights) EXPECT_NEAR(w, std::numbers::pi / n, 1e-14);
    }
    g = gauss_weights(FamilySpec::laguerre(), 1);
    EXPECT_NEAR(g.nodes[0], 1.0, 1e-15);
    EXPECT_NEAR(g.gauss_weights[0], 1.0, 1e-15);
}

TEST(GaussWeights, AgreeWithGolubWelsch) {
    for (const auto& f : all_families()) {
        const auto g = gauss_weights(f, 12);
        const auto gw = golub_welsch_weights(f, 12);
        for (int k = 0; k < 12; ++k) EXPECT_NEAR(g.gauss_weights[k] / gw[k], 1.0, 1e-10) << f.name();
    }
}

TEST(GaussWeights, ExactnessAgainstClosedFormMoments) {
    for (const auto& f : all_families()) {
        for (int n : {4, 10, 20}) {
            const auto g = gauss_weights(f, n);
            for (int k = 0; k <= 2 * n - 1; ++k) {
                long double s = 0;
                for (int i = 0; i < n; ++i) s += g.gauss_weights[i] * std::pow(static_cast<long double>(g.nodes[i]), k);
                const long double ex = exact_moment(f, k);
                long double scale = std::fabs(ex);
                if (k % 2 && f.symmetric()) scale = exact_moment(f, k - 1);
                // x^k sums cancel for large k on unbounded intervals; compare against the size of the terms
                long double terms = 0;
                for (int i = 0; i < n; ++i) terms += g.gauss_weights[i] * std::pow(std::fabs(static_cast<long double>(g.nodes[i])), k);
                EXPECT_LE(static_cast<double>(std::fabs(s - ex) / std::max(scale, terms)), 1e-10)
                    << f.name() << " " << f.params() << " n=" << n << " k=" << k;
            }
        }
    }
}

TEST(Weights, Values) {
    EXPECT_DOUBLE_EQ(weight_value(WeightSpec::of_family(FamilySpec::chebyshev_t()), 0.0), 1.0);
    EXPECT_DOUBLE_EQ(weight_value(WeightSpec::unit(), 0.37), 1.0);
    EXPECT_NEAR(weight_value(WeightSpec::of_family(FamilySpec::hermite()), 1.0), std::exp(-1.0), 1e-16);
    EXPECT_THROW(weight_value(WeightSpec::of_family(FamilySpec::chebyshev_t()), 1.0), DomainError);
}

TEST(Moments, Examples) {
    const Interval I = Interval::finite(-1, 1);
    EXPECT_NEAR(moment(WeightSpec::unit(), I, 2), 2.0 / 3.0, 1e-15);
    EXPECT_EQ(moment(WeightSpec::unit(), I, 3), 0.0);
    EXPECT_NEAR(moment(WeightSpec::of_family(FamilySpec::laguerre()), Interval::semi_infinite(0), 5), 120.0, 1e-10);
    EXPECT_THROW(moment(WeightSpec::unit(), Interval::semi_infinite(0), 1), DivergentIntegralError);
    EXPECT_THROW(moment(WeightSpec::unit(), Interval::real_line(), 0), DivergentIntegralError);
}

TEST(Moments, ClosedFormsAndSigns) {
    for (const auto& f : all_families()) {
        const WeightSpec w = WeightSpec::of_family(f);
        for (int k = 0; k <= 12; ++k) {
            const double m = moment(w, f.interval(), k);
            const double ex = static_cast<double>(exact_moment(f, k));
            if (ex == 0.0 || (f.symmetric() && k % 2))
                EXPECT_EQ(m, 0.0) << f.name() << " k=" << k;
            else
                EXPECT_NEAR(m / ex, 1.0, 1e-10) << f.name() << " " << f.params() << " k=" << k;
            if (f.symmetric()) EXPECT_GE(m, 0.0);
        }
    }
}

TEST(Moments, CustomWeightFallsBackToQuadrature) {
    const WeightSpec w = WeightSpec::from_function([](double x) { return std::exp(x); });
    const double m = moment(w, Interval::finite(-1, 1), 1);
    EXPECT_NEAR(m, 2.0 / std::exp(1.0), 1e-10);  // int x e^x = [x e^x - e^x]
}

TEST(Envelope, Examples) {
    EXPECT_EQ(legendre_envelope(7, 1.0), 1.0);
    EXPECT_EQ(legendre_envelope(7, -1.0), 1.0);
    EXPECT_NEAR(legendre_envelope(10, 0.0), 2 / std::sqrt(21 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(legendre_envelope(2, 0.0), 0.50463, 1e-5);
    EXPECT_LE(std::abs(eval_with_derivative(FamilySpec::legendre(), 2, 0.0).p), legendre_envelope(2, 0.0));
}

TEST(Envelope, BernsteinBoundHolds) {
    int violations = 0;
    for (int n = 5; n <= 100; n += 5)
        for (int i = 0; i < 1000; ++i) {
            const double x = -1.0 + (i + 0.5) * 2.0 / 1000;
            if (std::abs(eval_with_derivative(FamilySpec::legendre(), n, x).p) > legendre_envelope(n, x)) ++violations;
        }
    EXPECT_EQ(violations, 0);
}
