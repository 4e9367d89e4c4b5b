#include "orthospec/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orthospec/error.hpp"
#include "orthospec/sincmap.hpp"
#include "orthospec/spectra.hpp"

namespace orthospec {

namespace {

constexpr double kPi = std::numbers::pi;

double beta_fn(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Generic three-term recurrence p_{k+1} = (A_k x + B_k) p_k - C_k p_{k-1} in classical normalization.
struct Step {
    double A, B, C;
};

Step classical_step(const FamilySpec& f, int k) {
    switch (f.kind) {
        case FamilyKind::Legendre:
            return {(2.0 * k + 1.0) / (k + 1.0), 0.0, k / (k + 1.0)};
        case FamilyKind::ChebyshevT:
            return {k == 0 ? 1.0 : 2.0, 0.0, 1.0};
        case FamilyKind::ChebyshevU:
            return {2.0, 0.0, 1.0};
        case FamilyKind::Jacobi: {
            const double a = f.alpha, b = f.beta, s = a + b;
            if (k == 0) return {(s + 2.0) / 2.0, (a - b) / 2.0, 0.0};
            const double c = 2.0 * k + s;
            const double den = 2.0 * (k + 1.0) * (k + s + 1.0) * c;
            return {(c + 1.0) * (c + 2.0) * c / den, (c + 1.0) * (a * a - b * b) / den,
                    2.0 * (k + a) * (k + b) * (c + 2.0) / den};
        }
        case FamilyKind::Gegenbauer: {
            const double e = f.eta;
            if (e == 0.0) return {k == 0 ? 1.0 : 2.0, 0.0, 1.0};
            return {2.0 * (k + e) / (k + 1.0), 0.0, (k + 2.0 * e - 1.0) / (k + 1.0)};
        }
        case FamilyKind::Laguerre:
            return {-1.0 / (k + 1.0), (2.0 * k + 1.0) / (k + 1.0), k / (k + 1.0)};
        case FamilyKind::Hermite:
            return {2.0, 0.0, 2.0 * k};
        case FamilyKind::PolySinc:
            break;
    }
    throw ParameterDomainError("no three-term recurrence for " + f.name());
}

}  // namespace

Interval Interval::finite(double a, double b) {
    if (!(a < b)) throw ParameterDomainError("finite interval requires a < b");
    return {IntervalKind::Finite, a, b};
}

Interval Interval::semi_infinite(double a) {
    return {IntervalKind::SemiInfinite, a, std::numeric_limits<double>::infinity()};
}

Interval Interval::real_line() {
    return {IntervalKind::RealLine, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

Interval FamilySpec::interval() const {
    switch (kind) {
        case FamilyKind::Laguerre:
            return Interval::semi_infinite(0.0);
        case FamilyKind::Hermite:
            return Interval::real_line();
        case FamilyKind::PolySinc:
            return Interval::finite(a, b);
        default:
            return Interval::finite(-1.0, 1.0);
    }
}

void FamilySpec::validate() const {
    if (kind == FamilyKind::Jacobi && !(alpha > -1.0 && beta > -1.0))
        throw ParameterDomainError("Jacobi requires alpha > -1 and beta > -1");
    if (kind == FamilyKind::Gegenbauer && !(eta > -0.5)) throw ParameterDomainError("Gegenbauer requires eta > -1/2");
    if (kind == FamilyKind::PolySinc && !(a < b)) throw ParameterDomainError("PolySinc requires a < b");
}

bool FamilySpec::symmetric() const {
    switch (kind) {
        case FamilyKind::Jacobi:
            return alpha == beta;
        case FamilyKind::Laguerre:
            return false;
        default:
            return true;
    }
}

std::pair<double, double> FamilySpec::jacobi_exponents() const {
    switch (kind) {
        case FamilyKind::Legendre:
            return {0.0, 0.0};
        case FamilyKind::ChebyshevT:
            return {-0.5, -0.5};
        case FamilyKind::ChebyshevU:
            return {0.5, 0.5};
        case FamilyKind::Jacobi:
            return {alpha, beta};
        case FamilyKind::Gegenbauer:
            return {eta - 0.5, eta - 0.5};
        default:
            throw ParameterDomainError(name() + " has no Jacobi-type weight");
    }
}

std::string FamilySpec::name() const {
    switch (kind) {
        case FamilyKind::Legendre:
            return "legendre";
        case FamilyKind::ChebyshevT:
            return "chebyshev-t";
        case FamilyKind::ChebyshevU:
            return "chebyshev-u";
        case FamilyKind::Jacobi:
            return "jacobi";
        case FamilyKind::Gegenbauer:
            return "gegenbauer";
        case FamilyKind::Laguerre:
            return "laguerre";
        case FamilyKind::Hermite:
            return "hermite";
        case FamilyKind::PolySinc:
            return "polysinc";
    }
    return "unknown";
}

std::string FamilySpec::params() const {
    std::ostringstream os;
    switch (kind) {
        case FamilyKind::Jacobi:
            os << "alpha=" << alpha << ",beta=" << beta;
            break;
        case FamilyKind::Gegenbauer:
            os << "eta=" << eta;
            break;
        case FamilyKind::PolySinc:
            os << "a=" << a << ",b=" << b;
            break;
        default:
            break;
    }
    return os.str();
}

FamilySpec parse_family(const std::string& name, double alpha, double beta, double eta) {
    FamilySpec f;
    if (name == "legendre")
        f = FamilySpec::legendre();
    else if (name == "chebyshev-t")
        f = FamilySpec::chebyshev_t();
    else if (name == "chebyshev-u")
        f = FamilySpec::chebyshev_u();
    else if (name == "jacobi")
        f = FamilySpec::jacobi(alpha, beta);
    else if (name == "gegenbauer")
        f = FamilySpec::gegenbauer(eta);
    else if (name == "laguerre")
        f = FamilySpec::laguerre();
    else if (name == "hermite")
        f = FamilySpec::hermite();
    else if (name == "polysinc")
        f = FamilySpec::polysinc();
    else
        throw ParameterDomainError("unknown family '" + name + "'");
    f.validate();
    return f;
}

RecurrenceTable recurrence_coeffs(const FamilySpec& family, int n) {
    family.validate();
    if (n < 1) throw ParameterDomainError("recurrence_coeffs: n must be >= 1");
    RecurrenceTable t;
    t.n = n;
    t.diag.assign(n, 0.0);
    t.offdiag.assign(n - 1, 0.0);
    switch (family.kind) {
        case FamilyKind::Legendre:
            for (int k = 1; k < n; ++k) t.offdiag[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
            t.mu0 = 2.0;
            break;
        case FamilyKind::ChebyshevT:
            for (int k = 1; k < n; ++k) t.offdiag[k - 1] = k == 1 ? std::sqrt(0.5) : 0.5;
            t.mu0 = kPi;
            break;
        case FamilyKind::ChebyshevU:
            for (int k = 1; k < n; ++k) t.offdiag[k - 1] = 0.5;
            t.mu0 = kPi / 2.0;
            break;
        case FamilyKind::Jacobi:
        case FamilyKind::Gegenbauer: {
            const auto [a, b] = family.jacobi_exponents();
            const double s = a + b;
            for (int k = 0; k < n; ++k) {
                if (k == 0)
                    t.diag[k] = (b - a) / (s + 2.0);
                else
                    t.diag[k] = (b * b - a * a) / ((2.0 * k + s) * (2.0 * k + s + 2.0));
            }
            for (int k = 1; k < n; ++k) {
                double b2;
                if (k == 1) {
                    b2 = 4.0 * (a + 1.0) * (b + 1.0) / ((s + 2.0) * (s + 2.0) * (s + 3.0));
                } else {
                    const double c = 2.0 * k + s;
                    b2 = 4.0 * k * (k + a) * (k + b) * (k + s) / (c * c * (c + 1.0) * (c - 1.0));
                }
                t.offdiag[k - 1] = std::sqrt(b2);
            }
            t.mu0 = std::pow(2.0, s + 1.0) * beta_fn(a + 1.0, b + 1.0);
            break;
        }
        case FamilyKind::Laguerre:
            for (int k = 0; k < n; ++k) t.diag[k] = 2.0 * k + 1.0;
            for (int k = 1; k < n; ++k) t.offdiag[k - 1] = k;
            t.mu0 = 1.0;
            break;
        case FamilyKind::Hermite:
            for (int k = 1; k < n; ++k) t.offdiag[k - 1] = std::sqrt(k / 2.0);
            t.mu0 = std::sqrt(kPi);
            break;
        case FamilyKind::PolySinc:
            throw ParameterDomainError("PolySinc nodes have no three-term recurrence");
    }
    return t;
}

std::string normalization_name(const FamilySpec& family) {
    switch (family.kind) {
        case FamilyKind::Legendre:
            return "classical: P_n(1) = 1";
        case FamilyKind::ChebyshevT:
            return "classical: T_n(1) = 1";
        case FamilyKind::ChebyshevU:
            return "classical: U_n(1) = n+1";
        case FamilyKind::Jacobi:
            return "classical: P_n^(a,b)(1) = binom(n+a, n)";
        case FamilyKind::Gegenbauer:
            return family.eta == 0.0 ? "Chebyshev T limit (eta = 0)" : "classical: C_n^(eta)(1) = binom(n+2eta-1, n)";
        case FamilyKind::Laguerre:
            return "classical: L_n(0) = 1";
        case FamilyKind::Hermite:
            return "physicists: leading coefficient 2^n";
        case FamilyKind::PolySinc:
            return "monic node polynomial";
    }
    return "";
}

ScaledPoly eval_scaled(const FamilySpec& family, int n, double x) {
    if (n < 0) throw ParameterDomainError("eval: degree must be >= 0");
    double pm = 0.0, p = 1.0, dpm = 0.0, dp = 0.0;
    long e = 0;
    for (int k = 0; k < n; ++k) {
        const Step s = classical_step(family, k);
        const double lin = s.A * x + s.B;
        const double pn = lin * p - s.C * pm;
        const double dpn = s.A * p + lin * dp - s.C * dpm;
        pm = p;
        p = pn;
        dpm = dp;
        dp = dpn;
        const double mag = std::max(std::abs(p), std::abs(dp));
        if (mag > 0x1p200 || (mag < 0x1p-200 && mag > 0.0)) {
            int ex;
            std::frexp(mag, &ex);
            p = std::ldexp(p, -ex);
            pm = std::ldexp(pm, -ex);
            dp = std::ldexp(dp, -ex);
            dpm = std::ldexp(dpm, -ex);
            e += ex;
        }
    }
    return {p, dp, e};
}

PolyEval eval_with_derivative(const FamilySpec& family, int n, double x) {
    family.validate();
    const ScaledPoly s = eval_scaled(family, n, x);
    const int e = static_cast<int>(std::clamp<long>(s.exponent, -100000, 100000));
    return {std::ldexp(s.p, e), std::ldexp(s.dp, e), normalization_name(family)};
}

namespace {

// Sum over i < n of the squared orthonormal polynomials at x, returned as (mantissa, log2 scale).
std::pair<double, double> christoffel_sum(const RecurrenceTable& t, double x) {
    const int n = t.n;
    double pm = 0.0, p = 1.0 / std::sqrt(t.mu0);
    double sum = p * p;
    double log2scale = 0.0;  // true values are (p, pm) * 2^log2scale
    for (int k = 0; k + 1 < n; ++k) {
        const double bk = k > 0 ? t.offdiag[k - 1] : 0.0;
        const double pn = ((x - t.diag[k]) * p - bk * pm) / t.offdiag[k];
        pm = p;
        p = pn;
        sum += p * p;
        const double mag = std::abs(p);
        if (mag > 0x1p200) {
            int ex;
            std::frexp(mag, &ex);
            p = std::ldexp(p, -ex);
            pm = std::ldexp(pm, -ex);
            sum = std::ldexp(sum, -2 * ex);
            log2scale += ex;
        }
    }
    return {sum, log2scale};
}

}  // namespace

NodeSet roots(const FamilySpec& family, int n) {
    family.validate();
    if (n < 1) throw ParameterDomainError("roots: n must be >= 1");
    if (family.kind == FamilyKind::PolySinc) {
        const int M = (n - 1) / 2;
        return polysinc_nodes(family.a, family.b, M, n - 1 - M);
    }
    const RecurrenceTable t = recurrence_coeffs(family, n);
    NodeSet ns;
    ns.family = family;
    ns.n = n;
    ns.nodes = symtrid_eigvals(t.diag, t.offdiag);
    for (double& x : ns.nodes) {
        const ScaledPoly s = eval_scaled(family, n, x);
        if (s.dp != 0.0) {
            const double step = s.p / s.dp;
            if (std::isfinite(step)) x -= step;
        }
    }
    if (family.symmetric()) {
        for (int k = 0; k < n / 2; ++k) {
            const double x = 0.5 * (ns.nodes[n - 1 - k] - ns.nodes[k]);
            ns.nodes[k] = -x;
            ns.nodes[n - 1 - k] = x;
        }
        if (n % 2 == 1) ns.nodes[n / 2] = 0.0;
    }
    const Interval iv = family.interval();
    for (std::size_t k = 0; k < ns.nodes.size(); ++k) {
        if (!iv.contains_open(ns.nodes[k]) || (k > 0 && !(ns.nodes[k] > ns.nodes[k - 1])))
            throw ConvergenceError("roots: node set of " + family.name() + " is not strictly increasing inside the interval",
                                   static_cast<int>(k));
    }
    return ns;
}

std::vector<double> golub_welsch_weights(const FamilySpec& family, int n) {
    const RecurrenceTable t = recurrence_coeffs(family, n);
    const SymTridEigen e = symtrid_eigen(t.diag, t.offdiag, true);
    std::vector<double> w(n);
    for (int k = 0; k < n; ++k) w[k] = t.mu0 * e.first_components[k] * e.first_components[k];
    return w;
}

NodeSet gauss_weights(const FamilySpec& family, int n) {
    if (!family.has_weight()) throw ParameterDomainError("gauss_weights: " + family.name() + " has no weight");
    NodeSet ns = roots(family, n);
    const RecurrenceTable t = recurrence_coeffs(family, n);
    ns.gauss_weights.resize(n);
    for (int k = 0; k < n; ++k) {
        const auto [sum, log2scale] = christoffel_sum(t, ns.nodes[k]);
        ns.gauss_weights[k] = std::ldexp(1.0 / sum, static_cast<int>(-2 * log2scale));
    }
    return ns;
}

double WeightSpec::log_value(double x, double dist_a, double dist_b) const {
    switch (mode) {
        case WeightMode::Unit:
            return 0.0;
        case WeightMode::Custom: {
            const double v = custom(x);
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("custom weight is negative or non-finite");
            return std::log(v);
        }
        case WeightMode::FamilyWeight:
            break;
    }
    switch (family.kind) {
        case FamilyKind::Laguerre:
            return -x;
        case FamilyKind::Hermite:
            return -x * x;
        case FamilyKind::PolySinc:
            throw ParameterDomainError("PolySinc has no weight function");
        default: {
            const auto [al, be] = family.jacobi_exponents();
            double l = 0.0;
            if (al != 0.0) l += al * std::log(dist_b);
            if (be != 0.0) l += be * std::log(dist_a);
            return l;
        }
    }
}

bool WeightSpec::even() const {
    switch (mode) {
        case WeightMode::Unit:
            return true;
        case WeightMode::Custom:
            return false;
        case WeightMode::FamilyWeight:
            return family.symmetric();
    }
    return false;
}

double weight_value(const WeightSpec& w, double x) {
    if (w.mode == WeightMode::Unit) return 1.0;
    if (w.mode == WeightMode::Custom) return w.custom(x);
    const Interval iv = w.family.interval();
    if (x < iv.lower() || x > iv.upper()) throw DomainError("weight_value: x outside the weight's interval");
    double da = x - iv.lower(), db = iv.upper() - x;
    if (w.family.kind != FamilyKind::Laguerre && w.family.kind != FamilyKind::Hermite) {
        const auto [al, be] = w.family.jacobi_exponents();
        if ((da == 0.0 && be < 0.0) || (db == 0.0 && al < 0.0))
            throw DomainError("weight_value: weight is singular at x = " + std::to_string(x));
        if (da == 0.0 && be > 0.0) return 0.0;
        if (db == 0.0 && al > 0.0) return 0.0;
    }
    return std::exp(w.log_value(x, da, db));
}

double moment(const WeightSpec& w, const Interval& interval, int k, const QuadratureConfig* cfg) {
    if (k < 0) throw ParameterDomainError("moment: k must be >= 0");
    if (w.mode == WeightMode::Unit) {
        if (!interval.bounded())
            throw DivergentIntegralError("moment: unit weight has divergent moments on an unbounded interval");
        const double a = interval.a, b = interval.b;
        if (a == -b) return (k % 2 == 1) ? 0.0 : 2.0 * std::pow(b, k + 1) / (k + 1);
        return (std::pow(b, k + 1) - std::pow(a, k + 1)) / (k + 1);
    }
    if (w.mode == WeightMode::FamilyWeight) {
        const FamilySpec& f = w.family;
        f.validate();
        switch (f.kind) {
            case FamilyKind::Laguerre:
                return std::tgamma(k + 1.0);
            case FamilyKind::Hermite:
                return (k % 2 == 1) ? 0.0 : std::tgamma(k / 2 + 0.5);
            case FamilyKind::PolySinc:
                throw ParameterDomainError("PolySinc has no weight function");
            default: {
                const auto [al, be] = f.jacobi_exponents();
                if (al == be) {
                    if (k % 2 == 1) return 0.0;
                    return beta_fn(k / 2 + 0.5, al + 1.0);
                }
                // m_{j+1} (al+be+2+j) = (be-al) m_j + j m_{j-1}
                double mprev = 0.0, m = std::pow(2.0, al + be + 1.0) * beta_fn(al + 1.0, be + 1.0);
                for (int j = 0; j < k; ++j) {
                    const double next = ((be - al) * m + j * mprev) / (al + be + 2.0 + j);
                    mprev = m;
                    m = next;
                }
                return m;
            }
        }
    }
    QuadratureConfig q = cfg ? *cfg : QuadratureConfig::for_interval(interval, 256);
    return sinc_quad([&](const SincPoint& p) { return w.custom(p.x) * std::pow(p.x, k); }, q);
}

double legendre_envelope(int n, double x) {
    if (n < 1) throw ParameterDomainError("legendre_envelope: n must be >= 1");
    if (std::abs(x) >= 1.0) return 1.0;
    const double v = 2.0 / std::sqrt(kPi * (2.0 * n + 1.0) * std::sqrt(1.0 - x * x));
    return std::min(1.0, v);
}

}  // namespace orthospec
