#include "orthospec/opcalc.hpp"

#include <cmath>

#include "orthospec/error.hpp"

namespace orthospec {

namespace {

// Imaginary residue above this after F(B) means F does not respect conjugation.
constexpr double kImagTol = 1e-8;

Mat apply_function(const Mat& b, const TransformSpec& F, OpInfo* info) {
    MatFunctionInfo mi;
    Mat out = mat_function(b, F.F, &mi);
    if (info) info->matfn = mi;
    if (mi.imag_residue > kImagTol)
        throw DomainError("transform '" + F.description + "' leaves an imaginary residue of " +
                          std::to_string(mi.imag_residue) + "; F must map conjugates to conjugates");
    return out;
}

}  // namespace

TransformSpec TransformSpec::identity() {
    TransformSpec t = rational({0.0, 1.0}, {1.0}, "s");
    t.kind = TransformKind::Identity;
    return t;
}

TransformSpec TransformSpec::square() {
    TransformSpec t = rational({0.0, 0.0, 1.0}, {1.0}, "s^2");
    t.kind = TransformKind::Square;
    return t;
}

TransformSpec TransformSpec::exp_decay() {
    TransformSpec t = rational({0.0, 1.0}, {1.0, 1.0}, "s/(1+s)");
    t.kind = TransformKind::ExpDecay;
    return t;
}

TransformSpec TransformSpec::custom(std::function<Complex(Complex)> F, std::string description) {
    return {TransformKind::Custom, std::move(F), std::move(description), {}, {}};
}

TransformSpec TransformSpec::rational(std::vector<double> num, std::vector<double> den, std::string description) {
    if (num.empty() || den.empty()) throw ParameterDomainError("rational transform: empty coefficient list");
    auto F = [num, den](Complex s) {
        Complex p = 0.0, q = 0.0;
        for (std::size_t i = num.size(); i-- > 0;) p = p * s + num[i];
        for (std::size_t i = den.size(); i-- > 0;) q = q * s + den[i];
        return p / q;
    };
    return {TransformKind::Custom, F, std::move(description), std::move(num), std::move(den)};
}

TransformSpec parse_transform(const std::string& name) {
    if (name == "s") return TransformSpec::identity();
    if (name == "s2") return TransformSpec::square();
    if (name == "exp-decay") return TransformSpec::exp_decay();
    throw ParameterDomainError("unknown transform '" + name + "' (expected s, s2, exp-decay)");
}

const Mat& side_matrix(const IntegralMatrixPair& pair, Side side) {
    return side == Side::Plus ? pair.b_plus : pair.b_minus;
}

std::vector<double> indefinite_apply(const IntegralMatrixPair& pair, const std::vector<double>& g, Side side) {
    const Mat& b = side_matrix(pair, side);
    if (g.size() != b.cols()) throw ParameterDomainError("indefinite_apply: sample count mismatch");
    return b * g;
}

std::vector<double> derivative_samples(const IntegralMatrixPair& pair, const std::vector<double>& f, Side side) {
    const Mat& b = side_matrix(pair, side);
    if (f.size() != b.cols()) throw ParameterDomainError("derivative_samples: sample count mismatch");
    std::vector<double> d = lu_solve(b, f);
    if (side == Side::Minus)
        for (double& v : d) v = -v;
    return d;
}

std::vector<double> convolve(const IntegralMatrixPair& pair, const TransformSpec& F, const std::vector<double>& g,
                             Side side, OpInfo* info) {
    if (F.kind == TransformKind::Identity) {
        if (info) info->route = "indefinite";
        return indefinite_apply(pair, g, side);
    }
    const Mat& b = side_matrix(pair, side);
    if (g.size() != b.cols()) throw ParameterDomainError("convolve: sample count mismatch");
    if (!F.is_rational()) {
        if (info) info->route = "eigen";
        return apply_function(b, F, info) * g;
    }
    if (info) info->route = "rational";
    const std::size_t n = b.rows();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = F.num.size(); i-- > 0;) {
        y = b * y;
        for (std::size_t k = 0; k < n; ++k) y[k] += F.num[i] * g[k];
    }
    Mat d(n, n);
    for (std::size_t i = F.den.size(); i-- > 0;) {
        d = b * d;
        for (std::size_t k = 0; k < n; ++k) d(k, k) += F.den[i];
    }
    return lu_solve(d, y);
}

std::vector<double> inverse_laplace(const IntegralMatrixPair& pair, const TransformSpec& Fplus, OpInfo* info) {
    const std::vector<double> one(pair.b_plus.cols(), 1.0);
    const std::vector<double> q = convolve(pair, Fplus, one, Side::Plus, info);
    return lu_solve(pair.b_plus, q);
}

}  // namespace orthospec
