#include "orthospec/integmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

#include <boost/math/constants/constants.hpp>

#include "orthospec/detail/hqr.hpp"
#include "orthospec/detail/mp.hpp"
#include "orthospec/detail/parallel.hpp"
#include "orthospec/error.hpp"
#include "orthospec/lagrange.hpp"
#include "orthospec/sincmap.hpp"

namespace orthospec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SubIntegral {
    std::vector<double> value;
    std::vector<double> mass;
};

// Integrates xi(x) b_k(x) for all k over one sub-interval.
class RowIntegrator {
public:
    RowIntegrator(const BasisSet& basis, const WeightSpec& xi, double lo_end, double hi_end)
        : basis_(basis), xi_(xi), lo_end_(lo_end), hi_end_(hi_end) {}

    // Sub-interval (s_lo, s_hi); infinite ends use the semi-infinite map.
    SubIntegral integrate(double s_lo, double s_hi, const QuadratureConfig& finite_cfg,
                          const QuadratureConfig& tail_cfg, MapKind tail_kind, int row) const {
        const std::size_t m = basis_.size();
        SubIntegral out{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
        QuadratureConfig q;
        if (std::isfinite(s_lo) && std::isfinite(s_hi)) {
            if (s_hi - s_lo < 1e-14 * std::max(1.0, std::abs(s_hi))) return out;
            q = finite_cfg;
            q.map = ConformalMap::log_finite(s_lo, s_hi);
        } else if (std::isfinite(s_lo)) {
            q = tail_cfg;
            q.map = {tail_kind, s_lo, 0.0, false};
        } else if (std::isfinite(s_hi)) {
            q = tail_cfg;
            q.map = {tail_kind, s_hi, 0.0, true};
        } else {
            throw ParameterDomainError("assembly: sub-interval is the whole real line");
        }
        const double h = q.step();
        std::vector<double> r(m);
        for (int k = -q.N; k <= q.N; ++k) {
            const double t = k * h;
            const SincPoint p = q.map.inverse(t);
            const double w = h * q.map.inv_derivative(t);
            if (!(w > 0.0)) continue;
            // distances to the ends of the full interval
            const double da = !std::isfinite(lo_end_) ? kInf
                              : (s_lo == lo_end_)     ? p.lo
                                                      : (s_lo - lo_end_) + p.lo;
            const double db = !std::isfinite(hi_end_) ? kInf
                              : (s_hi == hi_end_)     ? p.hi
                                                      : (hi_end_ - s_hi) + p.hi;
            const double da_eff = std::isfinite(da) ? da : p.x - lo_end_;
            const double db_eff = std::isfinite(db) ? db : hi_end_ - p.x;
            const double lw = xi_.log_value(p.x, da_eff, db_eff);
            basis_.row(p.x, lw + std::log(w), r.data());
            for (std::size_t c = 0; c < m; ++c) {
                if (!std::isfinite(r[c])) {
                    std::ostringstream os;
                    os.precision(17);
                    os << "assembly: non-finite integrand for entry (j=" << row << ", k=" << c << ") at x=" << p.x;
                    throw QuadratureError(os.str());
                }
                out.value[c] += r[c];
                out.mass[c] += std::abs(r[c]);
            }
        }
        return out;
    }

private:
    const BasisSet& basis_;
    const WeightSpec& xi_;
    double lo_end_;
    double hi_end_;
};

// automatic N doubles until the direct row-sum defect is below this
constexpr double kAutoDefect = 1e-10;

double tail_extent(const FamilySpec& f, const NodeSet& nodes, XiKind xi) {
    const int m = static_cast<int>(nodes.nodes.size());
    if (xi == XiKind::Cpc && f.kind == FamilyKind::Hermite) {
        double xmax = 0.0;
        for (double x : nodes.nodes) xmax = std::max(xmax, std::abs(x));
        return 2.0 * xmax + 40.0;
    }
    return 2.0 * (m + 40.0);
}

template <class T>
Spectrum finish_spectrum(Matrix<T> c, int digits, std::string source) {
    const std::size_t n = c.rows();
    auto r = detail::nonsymmetric_eigenvalues(std::move(c), true);
    Spectrum s;
    s.digits = digits;
    s.converged = r.converged;
    s.iterations = r.iterations;
    s.source = std::move(source);
    for (std::size_t i = 0; i < n; ++i) s.eigenvalues.emplace_back(detail::to_double(r.re[i]), detail::to_double(r.im[i]));
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const Complex& x, const Complex& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    s.min_real_part = min_real_part(s);
    return s;
}

template <class T>
Spectrum coefficient_spectrum_t(const std::vector<double>& nodes, double a, double b, Side side, int digits) {
    const std::size_t n = nodes.size();
    if (n == 0) throw ParameterDomainError("coefficient_spectrum: empty node set");
    const T ta(a), tb(b);
    const T half = (tb - ta) / T(2);
    std::vector<T> w(n + 1, T(0));
    w[0] = T(1);
    std::vector<T> nw(n + 1);
    for (std::size_t l = 0; l < n; ++l) {
        const T y = (T(nodes[l]) - ta) / half - T(1);
        std::fill(nw.begin(), nw.end(), T(0));
        for (std::size_t i = 0; i <= l; ++i) {
            const T wi = w[i];
            nw[i + 1] += wi * T(static_cast<double>(i + 1)) / T(static_cast<double>(2 * i + 1));
            if (i > 0) nw[i - 1] += wi * T(static_cast<double>(i)) / T(static_cast<double>(2 * i + 1));
            nw[i] -= y * wi;
        }
        T mx(0);
        for (std::size_t i = 0; i <= l + 1; ++i) mx = std::max(mx, detail::abs_of(nw[i]));
        for (std::size_t i = 0; i <= l + 1; ++i) w[i] = nw[i] / mx;
    }
    // J: Legendre coefficients of int_{-1}^x P_k, rows 0..n
    Matrix<T> c(n, n);
    auto jentry = [&](std::size_t i, std::size_t k) -> T {
        if (k == 0) return (i == 0 || i == 1) ? T(1) : T(0);
        const T d = T(static_cast<double>(2 * k + 1));
        if (i == k + 1) return T(1) / d;
        if (i + 1 == k) return T(-1) / d;
        return T(0);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const T r = -w[i] / w[n];
        for (std::size_t k = 0; k < n; ++k) c(i, k) = jentry(i, k) + r * jentry(n, k);
    }
    if (side == Side::Minus) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) c(i, k) = -c(i, k);
        c(0, 0) += T(2);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) c(i, k) *= half;
    return finish_spectrum(std::move(c), digits, "legendre-coefficient " + to_string(side));
}

// Tanh-sinh quadrature of (b-t)^al (t-a)^be b_k(t) over [a, x_j] or [x_j, b] for every row, refined
// by halving the step until successive sums agree to the working precision.
template <class T>
Spectrum reassembled_spectrum_t(const IntegralMatrixPair& pair, double al, double be, Side side, int digits) {
    using std::abs;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sinh;
    const std::size_t n = pair.nodes.nodes.size();
    const int d = digits == 0 ? 16 : digits;
    const T ta(pair.a), tb(pair.b);
    std::vector<T> x(n), bw(n, T(1));
    for (std::size_t k = 0; k < n; ++k) x[k] = T(pair.nodes.nodes[k]);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            if (i != k) bw[k] *= x[k] - x[i];
        bw[k] = T(1) / bw[k];
    }
    const T pi_half = boost::math::constants::half_pi<T>();
    const double mu = 1.0 + std::min({0.0, al, be});
    const double s_max = (d + 10) * std::log(10.0) / (2.0 * mu) + 5.0;
    const double u_max = std::asinh(s_max / (std::numbers::pi / 2));
    const T tol = pow(T(10), -(d - 4));
    Matrix<T> c(n, n);
    std::vector<T> pre(n + 1), suf(n + 1), sum(n), prev(n);
    for (std::size_t j = 0; j < n; ++j) {
        const T lo = side == Side::Plus ? ta : x[j];
        const T hi = side == Side::Plus ? x[j] : tb;
        const T half = (hi - lo) / T(2);
        std::fill(sum.begin(), sum.end(), T(0));
        auto add_point = [&](double u, const T& step) {
            const T s = pi_half * sinh(T(u));
            const T d_lo = T(2) * half / (T(1) + exp(T(-2) * s));
            const T d_hi = T(2) * half / (T(1) + exp(T(2) * s));
            const T ch = cosh(s);
            const T jac = step * half * pi_half * cosh(T(u)) / (ch * ch);
            const T da = side == Side::Plus ? d_lo : (x[j] - ta) + d_lo;
            const T db = side == Side::Plus ? (tb - x[j]) + d_hi : d_hi;
            if (!(da > T(0)) || !(db > T(0))) return;
            T w = jac;
            if (al != 0.0) w *= pow(db, T(al));
            if (be != 0.0) w *= pow(da, T(be));
            if (!(w > T(0))) return;
            const T t = lo + d_lo;
            pre[0] = T(1);
            for (std::size_t i = 0; i < n; ++i) {
                const T diff = i == j ? (side == Side::Plus ? -d_hi : d_lo) : t - x[i];
                pre[i + 1] = pre[i] * diff;
            }
            suf[n] = T(1);
            for (std::size_t i = n; i-- > 0;) {
                const T diff = i == j ? (side == Side::Plus ? -d_hi : d_lo) : t - x[i];
                suf[i] = suf[i + 1] * diff;
            }
            for (std::size_t k = 0; k < n; ++k) sum[k] += w * bw[k] * pre[k] * suf[k + 1];
        };
        double h = 0.25;
        const int n0 = static_cast<int>(std::ceil(u_max / h));
        for (int i = -n0; i <= n0; ++i) add_point(i * h, T(h));
        bool done = false;
        for (int level = 0; level < 12 && !done; ++level) {
            prev = sum;
            const int ni = static_cast<int>(std::ceil(u_max / h));
            for (std::size_t k = 0; k < n; ++k) sum[k] /= T(2);
            for (int i = -ni; i < ni; ++i) add_point((i + 0.5) * h, T(h / 2));
            h /= 2;
            T diff(0), scale(0);
            for (std::size_t k = 0; k < n; ++k) {
                diff = std::max(diff, T(abs(sum[k] - prev[k])));
                scale = std::max(scale, T(abs(sum[k])));
            }
            done = level >= 1 && diff <= tol * std::max(scale, T(1));
        }
        if (!done) throw QuadratureError("reassembled_spectrum: tanh-sinh refinement did not converge");
        for (std::size_t k = 0; k < n; ++k) c(j, k) = sum[k];
    }
    return finish_spectrum(std::move(c), d, "reassembled " + to_string(side));
}

}  // namespace

std::string to_string(XiKind x) {
    switch (x) {
        case XiKind::Cpc:
            return "cpc";
        case XiKind::NpcUnit:
            return "unit";
        default:
            return "custom";
    }
}

std::string to_string(Side s) {
    return s == Side::Plus ? "plus" : "minus";
}

std::string to_string(AssemblyRoute r) {
    switch (r) {
        case AssemblyRoute::Best:
            return "best";
        case AssemblyRoute::Complement:
            return "complement";
        default:
            return "direct";
    }
}

XiKind parse_xi(const std::string& s) {
    if (s == "cpc") return XiKind::Cpc;
    if (s == "unit" || s == "npc") return XiKind::NpcUnit;
    throw ParameterDomainError("unknown xi mode '" + s + "'");
}

AssemblyRoute parse_route(const std::string& s) {
    if (s == "best") return AssemblyRoute::Best;
    if (s == "complement") return AssemblyRoute::Complement;
    if (s == "direct") return AssemblyRoute::Direct;
    throw ParameterDomainError("unknown assembly route '" + s + "'");
}

MapChoice parse_map(const std::string& s) {
    if (s == "auto") return MapChoice::Auto;
    if (s == "log") return MapChoice::Log;
    if (s == "sinh-log") return MapChoice::SinhLog;
    throw ParameterDomainError("unknown map '" + s + "'");
}

int auto_quad_n(int m) {
    const double r = std::numbers::pi * m / 6.0;
    return std::max(128, static_cast<int>(std::ceil(r * r)));
}

std::vector<double> unit_weights(const NodeSet& nodes, double a, double b) {
    const BasisSet basis(nodes);
    const int m = static_cast<int>(nodes.nodes.size());
    const NodeSet gl = gauss_weights(FamilySpec::legendre(), m);
    std::vector<double> w(m, 0.0), r(m);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        const double x = a + half * (gl.nodes[i] + 1.0);
        basis.row(x, 0.0, r.data());
        for (int k = 0; k < m; ++k) w[k] += half * gl.gauss_weights[i] * r[k];
    }
    return w;
}

IntegralMatrixPair build_pair(const FamilySpec& family, int n, XiKind xi, const AssemblyOptions& opt) {
    family.validate();
    if (n < 1) throw ParameterDomainError("build_pair: n must be >= 1");
    if (n > 1000) throw ParameterDomainError("build_pair: m <= 1000 enforced");
    if (xi == XiKind::Cpc && family.has_weight()) return build_pair(gauss_weights(family, n), xi, opt);
    return build_pair(roots(family, n), xi, opt);
}

static IntegralMatrixPair assemble(const NodeSet& nodes, XiKind xi, const AssemblyOptions& opt, int scale) {
    const FamilySpec& family = nodes.family;
    const int m = static_cast<int>(nodes.nodes.size());
    if (m < 1 || m > 1000) throw ParameterDomainError("build_pair: node count must be in [1, 1000]");
    if (xi == XiKind::Cpc && !family.has_weight())
        throw ParameterDomainError("build_pair: cpc mode needs a family weight; " + family.name() + " pairs with xi = 1");

    IntegralMatrixPair pair;
    pair.nodes = nodes;
    pair.family = family;
    pair.xi = xi;
    pair.route = opt.route;

    Interval iv = family.interval();
    WeightSpec wspec = WeightSpec::unit();
    if (xi == XiKind::Cpc) wspec = WeightSpec::of_family(family);
    if (xi == XiKind::Custom) wspec = opt.custom_xi;
    double lo = iv.lower(), hi = iv.upper();
    if (xi != XiKind::Cpc && !iv.bounded()) {
        if (xi == XiKind::NpcUnit && !opt.truncation)
            throw DivergentIntegralError(
                "build_pair: xi = 1 on an unbounded interval gives divergent integrals; supply a truncation cutoff");
        if (opt.truncation) {
            const double c = *opt.truncation;
            if (iv.kind == IntervalKind::RealLine) {
                lo = -c;
                hi = c;
            } else {
                hi = c;
            }
            if (!(nodes.nodes.front() > lo && nodes.nodes.back() < hi))
                throw ParameterDomainError("build_pair: truncation cutoff must enclose all nodes");
            pair.truncation = c;
        }
    }
    pair.a = lo;
    pair.b = hi;

    QuadratureConfig finite_cfg;
    finite_cfg.N = opt.quad_n > 0 ? opt.quad_n : auto_quad_n(m);
    if (opt.quad_n <= 0 && xi == XiKind::Cpc && iv.bounded()) {
        // endpoint factor (t-a)^(mu-1) with mu < 1 slows the Sinc rate to exp(-sqrt(pi d mu N))
        const auto [ea, eb] = family.jacobi_exponents();
        const double mu = 1.0 + std::min(ea, eb);
        if (mu < 1.0) finite_cfg.N = static_cast<int>(std::ceil(finite_cfg.N / mu));
    }
    finite_cfg.h = opt.quad_h;
    QuadratureConfig tail_cfg = finite_cfg;
    if (opt.quad_n <= 0) {
        const double u = tail_extent(family, nodes, xi) / std::numbers::pi;
        tail_cfg.N = std::max(finite_cfg.N, static_cast<int>(std::ceil(u * u)));
        finite_cfg.N *= scale;
        tail_cfg.N *= scale;
    }
    const MapKind tail_kind = opt.map == MapChoice::Log ? MapKind::LogSemi : MapKind::SinhLogSemi;
    const bool has_tail = !std::isfinite(lo) || !std::isfinite(hi);
    pair.quad.N = finite_cfg.N;
    pair.quad.N_tail = has_tail ? tail_cfg.N : 0;
    pair.quad.h = finite_cfg.step();
    pair.quad.h_tail = has_tail ? tail_cfg.step() : 0.0;
    pair.quad.map = has_tail ? (tail_kind == MapKind::LogSemi ? "log+log-semi" : "log+sinh-log") : "log";
    pair.quad.automatic = opt.quad_n <= 0;

    // row-sum oracle
    std::vector<double> W;
    bool w_known = true;
    if (xi == XiKind::Cpc) {
        W = nodes.gauss_weights.empty() ? gauss_weights(family, m).gauss_weights : nodes.gauss_weights;
    } else if (std::isfinite(lo) && std::isfinite(hi) && xi == XiKind::NpcUnit) {
        W = unit_weights(nodes, lo, hi);
    } else {
        w_known = false;
    }
    AssemblyRoute route = opt.route;
    if (!w_known) route = AssemblyRoute::Direct;
    pair.route = route;

    const BasisSet basis(nodes);
    const RowIntegrator integ(basis, wspec, lo, hi);
    pair.b_plus = Mat(m, m);
    pair.b_minus = Mat(m, m);
    std::vector<double> defect(m, 0.0);
    detail::parallel_for(
        static_cast<std::size_t>(m),
        [&](std::size_t jj) {
            const int j = static_cast<int>(jj);
            const double xj = nodes.nodes[j];
            const SubIntegral P = integ.integrate(lo, xj, finite_cfg, tail_cfg, tail_kind, j);
            SubIntegral M;
            if (route != AssemblyRoute::Complement) M = integ.integrate(xj, hi, finite_cfg, tail_cfg, tail_kind, j);
            for (int k = 0; k < m; ++k) {
                double bp = P.value[k], bm = 0.0;
                switch (route) {
                    case AssemblyRoute::Complement:
                        bm = W[k] - bp;
                        break;
                    case AssemblyRoute::Direct:
                        bm = M.value[k];
                        break;
                    case AssemblyRoute::Best:
                        if (P.mass[k] <= M.mass[k]) {
                            bm = W[k] - bp;
                        } else {
                            bm = M.value[k];
                            bp = W[k] - bm;
                        }
                        break;
                }
                pair.b_plus(j, k) = bp;
                pair.b_minus(j, k) = bm;
                if (route != AssemblyRoute::Complement && w_known)
                    defect[j] = std::max(defect[j], std::abs(P.value[k] + M.value[k] - W[k]));
            }
        },
        opt.threads);
    if (!w_known) {
        // W from the assembled rows (custom weight or truncated without oracle)
        W.assign(m, 0.0);
        for (int k = 0; k < m; ++k) W[k] = pair.b_plus(0, k) + pair.b_minus(0, k);
    }
    pair.weights = W;
    pair.direct_defect = (route == AssemblyRoute::Complement || !w_known)
                             ? std::numeric_limits<double>::quiet_NaN()
                             : *std::max_element(defect.begin(), defect.end());
    return pair;
}

IntegralMatrixPair build_pair(const NodeSet& nodes, XiKind xi, const AssemblyOptions& opt) {
    IntegralMatrixPair pair = assemble(nodes, xi, opt, 1);
    if (opt.quad_n > 0) return pair;
    for (int scale = 2; scale <= 8 && pair.direct_defect > kAutoDefect; scale *= 2) {
        IntegralMatrixPair next = assemble(nodes, xi, opt, scale);
        pair = std::move(next);
    }
    return pair;
}

IntegralMatrixPair rescale(const IntegralMatrixPair& pair, double a_new, double b_new) {
    if (!std::isfinite(pair.a) || !std::isfinite(pair.b))
        throw ParameterDomainError("rescale: source interval must be finite");
    if (!(a_new < b_new)) throw ParameterDomainError("rescale: requires a < b");
    const double ratio = (b_new - a_new) / (pair.b - pair.a);
    IntegralMatrixPair out = pair;
    const double c_old = 0.5 * (pair.a + pair.b), c_new = 0.5 * (a_new + b_new);
    for (double& x : out.nodes.nodes) x = c_new + (x - c_old) * ratio;
    for (double& v : out.b_plus.data()) v *= ratio;
    for (double& v : out.b_minus.data()) v *= ratio;
    for (double& v : out.weights) v *= ratio;
    for (double& v : out.nodes.gauss_weights) v *= ratio;
    out.direct_defect *= ratio;
    out.a = a_new;
    out.b = b_new;
    return out;
}

double row_sum_defect(const IntegralMatrixPair& pair, const std::vector<double>& w) {
    const std::size_t m = pair.b_plus.rows();
    if (w.size() != m) throw ParameterDomainError("row_sum_defect: oracle length mismatch");
    double d = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k) d = std::max(d, std::abs(pair.b_plus(j, k) + pair.b_minus(j, k) - w[k]));
    return d;
}

double row_sum_defect(const IntegralMatrixPair& pair) {
    return row_sum_defect(pair, pair.weights);
}

Spectrum coefficient_spectrum(const std::vector<double>& nodes, double a, double b, Side side, int digits) {
    if (!(std::isfinite(a) && std::isfinite(b) && a < b))
        throw ParameterDomainError("coefficient_spectrum: needs a finite interval");
    return detail::with_precision(digits, [&](auto tag) {
        using T = decltype(tag);
        return coefficient_spectrum_t<T>(nodes, a, b, side, digits == 0 ? 16 : digits);
    });
}

Spectrum reassembled_spectrum(const IntegralMatrixPair& pair, Side side, int digits) {
    if (!(std::isfinite(pair.a) && std::isfinite(pair.b) && pair.a < pair.b))
        throw ParameterDomainError("reassembled_spectrum: needs a finite interval");
    if (pair.nodes.nodes.empty()) throw ParameterDomainError("reassembled_spectrum: empty node set");
    double al = 0.0, be = 0.0;
    if (pair.xi == XiKind::Custom) throw ParameterDomainError("reassembled_spectrum: custom xi is not supported");
    if (pair.xi == XiKind::Cpc) std::tie(al, be) = pair.family.jacobi_exponents();
    return detail::with_precision(digits, [&](auto tag) {
        using T = decltype(tag);
        return reassembled_spectrum_t<T>(pair, al, be, side, digits);
    });
}

}  // namespace orthospec
