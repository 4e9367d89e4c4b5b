#pragma once

#include <functional>
#include <string>
#include <vector>

#include "orthospec/integmat.hpp"
#include "orthospec/spectra.hpp"

namespace orthospec {

enum class TransformKind { Identity, Square, ExpDecay, Custom };

// Laplace-type transform F(s) = int_0^c f(t) e^{-t/s} dt in closed form.
// A rational F (num, den coefficients in ascending powers of s) is applied as den(B)^{-1} num(B);
// otherwise F(B) comes from the eigendecomposition.
struct TransformSpec {
    TransformKind kind = TransformKind::Custom;
    std::function<Complex(Complex)> F;
    std::string description;
    std::vector<double> num;
    std::vector<double> den;

    bool is_rational() const { return !num.empty() && !den.empty(); }

    static TransformSpec identity();   // F(s) = s      (f = 1)
    static TransformSpec square();     // F(s) = s^2    (f = t)
    static TransformSpec exp_decay();  // F(s) = s/(1+s) (f = e^{-t})
    static TransformSpec custom(std::function<Complex(Complex)> F, std::string description);
    static TransformSpec rational(std::vector<double> num, std::vector<double> den, std::string description);
};

TransformSpec parse_transform(const std::string& name);

const Mat& side_matrix(const IntegralMatrixPair& pair, Side side);

// B+- V(g): node values of int_a^x g (plus) or int_x^b g (minus).
std::vector<double> indefinite_apply(const IntegralMatrixPair& pair, const std::vector<double>& g, Side side);

// +-(B+-)^{-1} V(f)
std::vector<double> derivative_samples(const IntegralMatrixPair& pair, const std::vector<double>& f, Side side);

struct OpInfo {
    std::string route;  // indefinite, rational or eigen
    MatFunctionInfo matfn;
};

// F(B+-) V(g)
std::vector<double> convolve(const IntegralMatrixPair& pair, const TransformSpec& F, const std::vector<double>& g,
                             Side side, OpInfo* info = nullptr);

// (B+)^{-1} F+(B+) V(1)
std::vector<double> inverse_laplace(const IntegralMatrixPair& pair, const TransformSpec& Fplus, OpInfo* info = nullptr);

}  // namespace orthospec
