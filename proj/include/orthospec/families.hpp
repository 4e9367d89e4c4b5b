#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace orthospec {

enum class FamilyKind { Legendre, ChebyshevT, ChebyshevU, Jacobi, Gegenbauer, Laguerre, Hermite, PolySinc };
enum class IntervalKind { Finite, SemiInfinite, RealLine };

struct Interval {
    IntervalKind kind = IntervalKind::Finite;
    double a = -1.0;
    double b = 1.0;

    static Interval finite(double a, double b);
    static Interval semi_infinite(double a);
    static Interval real_line();

    double lower() const { return kind == IntervalKind::RealLine ? -std::numeric_limits<double>::infinity() : a; }
    double upper() const { return kind == IntervalKind::Finite ? b : std::numeric_limits<double>::infinity(); }
    bool bounded() const { return kind == IntervalKind::Finite; }
    bool contains_open(double x) const { return x > lower() && x < upper(); }
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::Legendre;
    double alpha = 0.0;  // Jacobi
    double beta = 0.0;   // Jacobi
    double eta = 0.0;    // Gegenbauer
    double a = -1.0;     // PolySinc interval
    double b = 1.0;

    static FamilySpec legendre() { return {FamilyKind::Legendre}; }
    static FamilySpec chebyshev_t() { return {FamilyKind::ChebyshevT}; }
    static FamilySpec chebyshev_u() { return {FamilyKind::ChebyshevU}; }
    static FamilySpec jacobi(double alpha, double beta) { return {FamilyKind::Jacobi, alpha, beta}; }
    static FamilySpec gegenbauer(double eta) { return {FamilyKind::Gegenbauer, 0.0, 0.0, eta}; }
    static FamilySpec laguerre() { return {FamilyKind::Laguerre}; }
    static FamilySpec hermite() { return {FamilyKind::Hermite}; }
    static FamilySpec polysinc(double a = -1.0, double b = 1.0) {
        return {FamilyKind::PolySinc, 0.0, 0.0, 0.0, a, b};
    }

    Interval interval() const;
    void validate() const;
    bool has_weight() const { return kind != FamilyKind::PolySinc; }
    // Weight even about the midpoint of a symmetric interval (nodes then come in +- pairs).
    bool symmetric() const;
    // Jacobi exponents (alpha, beta) of the weight for the finite families.
    std::pair<double, double> jacobi_exponents() const;
    std::string name() const;
    std::string params() const;
};

FamilySpec parse_family(const std::string& name, double alpha = 0.0, double beta = 0.0, double eta = 0.0);

struct RecurrenceTable {
    int n = 0;
    std::vector<double> diag;
    std::vector<double> offdiag;
    double mu0 = 0.0;
};

RecurrenceTable recurrence_coeffs(const FamilySpec& family, int n);

// p = mantissa_p * 2^exponent, dp = mantissa_dp * 2^exponent.
struct ScaledPoly {
    double p = 0.0;
    double dp = 0.0;
    long exponent = 0;
};

struct PolyEval {
    double p = 0.0;
    double dp = 0.0;
    std::string normalization;
};

PolyEval eval_with_derivative(const FamilySpec& family, int n, double x);
ScaledPoly eval_scaled(const FamilySpec& family, int n, double x);
std::string normalization_name(const FamilySpec& family);

struct NodeSet {
    std::vector<double> nodes;
    std::vector<double> gauss_weights;
    FamilySpec family;
    int n = 0;
    double h = 0.0;  // PolySinc step
};

NodeSet roots(const FamilySpec& family, int n);
NodeSet gauss_weights(const FamilySpec& family, int n);
// mu0 * (first eigenvector component)^2, for cross-checking.
std::vector<double> golub_welsch_weights(const FamilySpec& family, int n);

enum class WeightMode { FamilyWeight, Unit, Custom };

struct WeightSpec {
    WeightMode mode = WeightMode::Unit;
    FamilySpec family;
    std::function<double(double)> custom;

    static WeightSpec unit() { return {}; }
    static WeightSpec of_family(const FamilySpec& f) { return {WeightMode::FamilyWeight, f, {}}; }
    static WeightSpec from_function(std::function<double(double)> fn) {
        return {WeightMode::Custom, FamilySpec{}, std::move(fn)};
    }

    // log of the weight given the distances to the family interval ends (infinite when absent).
    double log_value(double x, double dist_a, double dist_b) const;
    bool even() const;
};

double weight_value(const WeightSpec& w, double x);

struct QuadratureConfig;

// Closed form where available, else Sinc quadrature with 'cfg' (or a default).
double moment(const WeightSpec& w, const Interval& interval, int k, const QuadratureConfig* cfg = nullptr);

double legendre_envelope(int n, double x);

}  // namespace orthospec
