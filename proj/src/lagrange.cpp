#include "orthospec/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orthospec/error.hpp"
#include "orthospec/sincmap.hpp"

namespace orthospec {

namespace {

void normalize(double& m, long& e) {
    if (m == 0.0 || !std::isfinite(m)) return;
    int ex;
    m = std::frexp(m, &ex);
    e += ex;
}

double coincidence_tol(double xk) {
    return 1e-13 * std::max(1.0, std::abs(xk));
}

// Sup-grid range for an unbounded interval: where xi >= 1e-16 max xi.
std::pair<double, double> effective_range(const Interval& iv, const WeightSpec* xi) {
    if (iv.bounded()) return {iv.a, iv.b};
    if (!xi || xi->mode != WeightMode::FamilyWeight)
        throw ParameterDomainError("error_norm: unbounded interval needs a family weight to set the grid");
    const double cut = 16.0 * std::numbers::ln10;
    if (xi->family.kind == FamilyKind::Laguerre) return {0.0, cut};
    if (xi->family.kind == FamilyKind::Hermite) return {-std::sqrt(cut), std::sqrt(cut)};
    throw ParameterDomainError("error_norm: unsupported weight on an unbounded interval");
}

double log_weight_at(const WeightSpec& xi, const Interval& iv, double x) {
    if (xi.mode == WeightMode::Unit) return 0.0;
    return xi.log_value(x, x - iv.lower(), iv.upper() - x);
}

}  // namespace

BasisSet::BasisSet(NodeSet nodes) : nodes_(std::move(nodes)) {
    product_form_ = nodes_.family.kind == FamilyKind::PolySinc;
    const std::size_t n = nodes_.nodes.size();
    if (n == 0) throw ParameterDomainError("BasisSet: empty node set");
    dm_.resize(n);
    de_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double m = 1.0;
        long e = 0;
        if (product_form_) {
            for (std::size_t l = 0; l < n; ++l) {
                if (l == k) continue;
                m *= nodes_.nodes[k] - nodes_.nodes[l];
                normalize(m, e);
            }
        } else {
            const ScaledPoly s = eval_scaled(nodes_.family, static_cast<int>(n), nodes_.nodes[k]);
            m = s.dp;
            e = s.exponent;
            normalize(m, e);
        }
        if (m == 0.0 || !std::isfinite(m)) throw ParameterDomainError("BasisSet: zero basis denominator");
        dm_[k] = m;
        de_[k] = e;
    }
}

double BasisSet::denom(std::size_t k) const {
    return std::ldexp(dm_[k], static_cast<int>(std::clamp<long>(de_[k], -100000, 100000)));
}

void BasisSet::node_poly(double x, double& mant, long& exp2) const {
    if (product_form_) {
        mant = 1.0;
        exp2 = 0;
        for (double xl : nodes_.nodes) {
            mant *= x - xl;
            normalize(mant, exp2);
        }
        return;
    }
    const ScaledPoly s = eval_scaled(nodes_.family, static_cast<int>(nodes_.nodes.size()), x);
    mant = s.p;
    exp2 = s.exponent;
    normalize(mant, exp2);
}

void BasisSet::row(double x, double log_scale, double* out) const {
    const std::size_t n = nodes_.nodes.size();
    const auto& xs = nodes_.nodes;
    if (log_scale == -std::numeric_limits<double>::infinity()) {
        std::fill(out, out + n, 0.0);
        return;
    }
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    std::size_t near = 0;
    double best = std::numeric_limits<double>::infinity();
    for (auto jt : {it, it == xs.begin() ? it : it - 1}) {
        if (jt == xs.end()) continue;
        const double d = std::abs(x - *jt);
        if (d < best) {
            best = d;
            near = static_cast<std::size_t>(jt - xs.begin());
        }
    }
    if (best < coincidence_tol(xs[near])) {
        std::fill(out, out + n, 0.0);
        out[near] = std::exp(log_scale);
        return;
    }
    double pm;
    long pe;
    node_poly(x, pm, pe);
    const double ln2 = std::numbers::ln2;
    const double e2 = std::floor(log_scale / ln2);
    const double factor = std::exp(log_scale - e2 * ln2);
    const long base = static_cast<long>(e2) + pe;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = pm / ((x - xs[k]) * dm_[k]) * factor;
        const long e = std::clamp<long>(base - de_[k], -100000, 100000);
        out[k] = std::ldexp(v, static_cast<int>(e));
    }
}

std::vector<double> BasisSet::at(double x) const {
    std::vector<double> r(size());
    row(x, 0.0, r.data());
    return r;
}

std::vector<double> basis_at(const BasisSet& basis, double x) {
    return basis.at(x);
}

double interpolate(const BasisSet& basis, const std::vector<double>& samples, double x) {
    if (samples.size() != basis.size()) throw ParameterDomainError("interpolate: sample count mismatch");
    const auto r = basis.at(x);
    double s = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) s += r[k] * samples[k];
    return s;
}

WeightedInterpolant::WeightedInterpolant(const BasisSet& basis, const std::function<double(double)>& f,
                                         const WeightSpec& xi)
    : basis_(&basis), xi_(xi) {
    const Interval iv = basis.nodes().family.interval();
    const auto& xs = basis.nodes().nodes;
    s_.resize(xs.size());
    fx_.resize(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double lw = log_weight_at(xi_, iv, xs[k]);
        if (!std::isfinite(lw)) throw DomainError("weighted_interpolate: degenerate weight at a node");
        fx_[k] = f(xs[k]);
        s_[k] = fx_[k] * std::exp(-lw);
        if (!std::isfinite(s_[k])) throw DomainError("weighted_interpolate: degenerate weight at a node");
    }
}

double WeightedInterpolant::operator()(double x) const {
    const auto& xs = basis_->nodes().nodes;
    auto it = std::lower_bound(xs.begin(), xs.end(), x);
    if (it != xs.end() && *it == x) return fx_[it - xs.begin()];
    const Interval iv = basis_->nodes().family.interval();
    const double lw = log_weight_at(xi_, iv, x);
    std::vector<double> r(xs.size());
    basis_->row(x, lw, r.data());
    double s = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) s += r[k] * s_[k];
    return s;
}

double weighted_interpolate(const BasisSet& basis, const std::function<double(double)>& f, const WeightSpec& xi,
                            double x) {
    return WeightedInterpolant(basis, f, xi)(x);
}

double error_norm(const std::function<double(double)>& f, const std::function<double(double)>& approx,
                  const Interval& interval, Norm norm, int grid_size, const WeightSpec* xi) {
    if (grid_size < 2) throw ParameterDomainError("error_norm: grid size must be >= 2");
    if (norm == Norm::Sup) {
        const auto [lo, hi] = effective_range(interval, xi);
        const double step = (hi - lo) / grid_size;
        double m = 0.0;
        for (int i = 0; i < grid_size; ++i) {
            const double x = lo + (i + 0.5) * step;
            m = std::max(m, std::abs(f(x) - approx(x)));
        }
        return m;
    }
    QuadratureConfig q = QuadratureConfig::for_interval(interval, 256);
    if (interval.bounded()) {
        const double v = sinc_quad(
            [&](const SincPoint& p) {
                const double d = f(p.x) - approx(p.x);
                return d * d;
            },
            q);
        return std::sqrt(v);
    }
    if (!xi) throw ParameterDomainError("error_norm: unbounded L2 norm needs the weight xi");
    const double v = sinc_quad(
        [&](const SincPoint& p) {
            const double w = std::exp(log_weight_at(*xi, interval, p.x));
            const double d = w * (f(p.x) - approx(p.x));
            return d * d;
        },
        q);
    return std::sqrt(v);
}

void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept,
              double* r2) {
    const double n = static_cast<double>(x.size());
    if (x.size() < 2) throw ParameterDomainError("fit_line: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    intercept = (sy - slope * sx) / n;
    if (r2) {
        const double mean = sy / n;
        double tot = 0, res = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - (intercept + slope * x[i]);
            res += r * r;
            tot += (y[i] - mean) * (y[i] - mean);
        }
        *r2 = tot > 0 ? 1.0 - res / tot : 1.0;
    }
}

FitResult convergence_table(const FamilySpec& family, const std::function<double(double)>& f, const WeightSpec& xi,
                            const std::vector<int>& n_list) {
    if (n_list.size() < 3) throw ParameterDomainError("convergence_table: need at least three degrees");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw ParameterDomainError("convergence_table: degree list must be ascending");
    FitResult fr;
    const Interval iv = family.interval();
    std::vector<double> xs, ys;
    for (int n : n_list) {
        const BasisSet basis(roots(family, n));
        const WeightedInterpolant p(basis, f, xi);
        auto approx = [&](double x) { return p(x); };
        ConvergenceRow row;
        row.n = n;
        row.sup_error = error_norm(f, approx, iv, Norm::Sup, 1001, &xi);
        row.l2_error = error_norm(f, approx, iv, Norm::L2, 1001, &xi);
        row.log_error = std::log(row.l2_error);
        fr.rows.push_back(row);
        if (row.l2_error >= 1e-15 && std::isfinite(row.l2_error)) {
            xs.push_back(n);
            ys.push_back(row.log_error);
            fr.log_errors.emplace_back(n, row.log_error);
        } else {
            fr.note = "errors below 1e-15 excluded from the fit";
        }
    }
    if (xs.size() < 3) {
        fr.note = "fewer than three usable points; fit not produced";
        return fr;
    }
    fit_line(xs, ys, fr.slope, fr.intercept);
    fr.r_estimate = std::exp(-fr.slope);
    return fr;
}

}  // namespace orthospec
