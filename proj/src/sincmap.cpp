#include "orthospec/sincmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "orthospec/error.hpp"

namespace orthospec {

namespace {

// logistic function 1/(1+e^{-t})
double sigma(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

// asinh(e^t) without overflow
double asinh_exp(double t) {
    if (t < 0.0) return std::asinh(std::exp(t));
    return t + std::log1p(std::sqrt(1.0 + std::exp(-2.0 * t)));
}

}  // namespace

ConformalMap ConformalMap::log_finite(double a, double b) {
    if (!(a < b)) throw ParameterDomainError("log map requires a < b");
    return {MapKind::LogFinite, a, b, false};
}

double ConformalMap::forward(double x) const {
    switch (kind) {
        case MapKind::Identity:
            return x;
        case MapKind::LogFinite:
            return std::log((x - a) / (b - x));
        case MapKind::LogSemi:
            return std::log(reflected ? a - x : x - a);
        case MapKind::SinhLogSemi: {
            const double u = reflected ? a - x : x - a;
            if (u > 1.0) return u + std::log1p(-std::exp(-2.0 * u)) - std::numbers::ln2;
            return std::log(std::sinh(u));
        }
    }
    return 0.0;
}

double ConformalMap::forward(const SincPoint& p) const {
    switch (kind) {
        case MapKind::Identity:
            return p.x;
        case MapKind::LogFinite:
            return std::log(p.lo / p.hi);
        case MapKind::LogSemi:
            return std::log(reflected ? p.hi : p.lo);
        case MapKind::SinhLogSemi: {
            const double u = reflected ? p.hi : p.lo;
            if (u > 1.0) return u + std::log1p(-std::exp(-2.0 * u)) - std::numbers::ln2;
            return std::log(std::sinh(u));
        }
    }
    return 0.0;
}

SincPoint ConformalMap::inverse(double t) const {
    SincPoint p;
    switch (kind) {
        case MapKind::Identity:
            p.x = t;
            return p;
        case MapKind::LogFinite: {
            const double len = b - a;
            p.lo = len * sigma(t);
            p.hi = len * sigma(-t);
            p.x = t <= 0.0 ? a + p.lo : b - p.hi;
            return p;
        }
        case MapKind::LogSemi:
        case MapKind::SinhLogSemi: {
            const double u = kind == MapKind::LogSemi ? std::exp(t) : asinh_exp(t);
            if (reflected) {
                p.x = a - u;
                p.hi = u;
            } else {
                p.x = a + u;
                p.lo = u;
            }
            return p;
        }
    }
    return p;
}

double ConformalMap::inv_derivative(double t) const {
    switch (kind) {
        case MapKind::Identity:
            return 1.0;
        case MapKind::LogFinite:
            return (b - a) * sigma(t) * sigma(-t);
        case MapKind::LogSemi:
            return std::exp(t);
        case MapKind::SinhLogSemi:
            // e^t / sqrt(1 + e^{2t}) = tanh(u)
            if (t > 0.0) return 1.0 / std::sqrt(1.0 + std::exp(-2.0 * t));
            return std::exp(t) / std::sqrt(1.0 + std::exp(2.0 * t));
    }
    return 1.0;
}

std::string ConformalMap::name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case MapKind::Identity:
            return "identity";
        case MapKind::LogFinite:
            os << "log(" << a << "," << b << ")";
            break;
        case MapKind::LogSemi:
            os << (reflected ? "log-left(" : "log-semi(") << a << ")";
            break;
        case MapKind::SinhLogSemi:
            os << (reflected ? "sinh-log-left(" : "sinh-log(") << a << ")";
            break;
    }
    return os.str();
}

double QuadratureConfig::step() const {
    if (h > 0.0) return h;
    return std::numbers::pi / std::sqrt(static_cast<double>(N));
}

QuadratureConfig QuadratureConfig::for_interval(const Interval& iv, int N) {
    QuadratureConfig q;
    q.N = N;
    switch (iv.kind) {
        case IntervalKind::Finite:
            q.map = ConformalMap::log_finite(iv.a, iv.b);
            break;
        case IntervalKind::SemiInfinite:
            q.map = ConformalMap::sinh_log_semi(iv.a);
            break;
        case IntervalKind::RealLine:
            q.map = ConformalMap::identity();
            break;
    }
    return q;
}

std::vector<double> sinc_nodes(const QuadratureConfig& cfg) {
    if (cfg.N < 1) throw ParameterDomainError("sinc_nodes: N must be >= 1");
    const double h = cfg.step();
    std::vector<double> x;
    x.reserve(2 * cfg.N + 1);
    for (int k = -cfg.N; k <= cfg.N; ++k) x.push_back(cfg.map.inverse(k * h).x);
    if (cfg.map.reflected) std::reverse(x.begin(), x.end());
    return x;
}

double sinc_quad(const std::function<double(const SincPoint&)>& f, const QuadratureConfig& cfg) {
    if (cfg.N < 1) throw ParameterDomainError("sinc_quad: N must be >= 1");
    const double h = cfg.step();
    if (!(h > 0.0)) throw ParameterDomainError("sinc_quad: step must be positive");
    double sum = 0.0;
    for (int k = -cfg.N; k <= cfg.N; ++k) {
        const double t = k * h;
        const SincPoint p = cfg.map.inverse(t);
        const double v = f(p);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os.precision(17);
            os << "sinc_quad: non-finite integrand at node k=" << k << ", x=" << p.x;
            throw QuadratureError(os.str());
        }
        const double w = cfg.map.inv_derivative(t);
        if (v != 0.0) sum += v * w;
    }
    return h * sum;
}

double sinc_quad(const std::function<double(double)>& f, const QuadratureConfig& cfg) {
    return sinc_quad([&](const SincPoint& p) { return f(p.x); }, cfg);
}

QuadErrorCurve quad_error_curve(const std::function<double(const SincPoint&)>& f, double exact,
                                const ConformalMap& map, const std::vector<int>& Ns) {
    QuadErrorCurve c;
    std::vector<double> xs, ys;
    c.floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(exact));
    for (int N : Ns) {
        QuadratureConfig q;
        q.N = N;
        q.map = map;
        const double err = std::abs(sinc_quad(f, q) - exact);
        c.points.push_back({N, err});
        if (err > c.floor) {
            xs.push_back(std::sqrt(static_cast<double>(N)));
            ys.push_back(std::log(err / std::sqrt(static_cast<double>(N))));
        }
    }
    c.fitted = static_cast<int>(xs.size());
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double den = n * sxx - sx * sx;
        c.slope = (n * sxy - sx * sy) / den;
        c.intercept = (sy - c.slope * sx) / n;
        const double mean = sy / n;
        double ss_tot = 0, ss_res = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double r = ys[i] - (c.intercept + c.slope * xs[i]);
            ss_res += r * r;
            ss_tot += (ys[i] - mean) * (ys[i] - mean);
        }
        c.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    }
    return c;
}

NodeSet polysinc_nodes(double a, double b, int M, int N) {
    if (!(a < b)) throw ParameterDomainError("polysinc_nodes: requires a < b");
    if (M < 0 || N < 0) throw ParameterDomainError("polysinc_nodes: M and N must be >= 0");
    double h = std::numbers::pi;
    if (N > 0)
        h = std::numbers::pi / std::sqrt(static_cast<double>(N));
    else if (M > 0)
        h = std::numbers::pi / std::sqrt(static_cast<double>(M));
    NodeSet ns;
    ns.family = FamilySpec::polysinc(a, b);
    ns.n = M + N + 1;
    ns.h = h;
    const ConformalMap map = ConformalMap::log_finite(a, b);
    for (int k = -M; k <= N; ++k) ns.nodes.push_back(map.inverse(k * h).x);
    for (std::size_t k = 1; k < ns.nodes.size(); ++k)
        if (!(ns.nodes[k] > ns.nodes[k - 1]) || !(ns.nodes[k] < b))
            throw ParameterDomainError("polysinc_nodes: nodes collapse in double precision; reduce M, N");
    return ns;
}

}  // namespace orthospec
