#pragma once

#include <functional>
#include <string>
#include <vector>

#include "orthospec/families.hpp"

namespace orthospec {

// Lagrange basis b_k(x) = v(x) / ((x - x_k) v'(x_k)) with v the node polynomial
// (p_n for the orthogonal families, prod (x - x_l) for Poly-Sinc points).
// Poly-Sinc rows use the second barycentric form.
class BasisSet {
public:
    explicit BasisSet(NodeSet nodes);

    const NodeSet& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.nodes.size(); }
    // v'(x_k) = denom_mantissa[k] * 2^denom_exponent[k]
    const std::vector<double>& denom_mantissa() const { return dm_; }
    const std::vector<long>& denom_exponent() const { return de_; }
    double denom(std::size_t k) const;

    // out[k] = exp(log_scale) * b_k(x); exponent-safe for large-degree node polynomials.
    void row(double x, double log_scale, double* out) const;
    std::vector<double> at(double x) const;

private:
    void node_poly(double x, double& mant, long& exp2) const;

    NodeSet nodes_;
    bool product_form_;
    std::vector<double> dm_;
    std::vector<long> de_;
};

std::vector<double> basis_at(const BasisSet& basis, double x);
double interpolate(const BasisSet& basis, const std::vector<double>& samples, double x);

// xi(x) sum_k b_k(x) f(x_k) / xi(x_k)
class WeightedInterpolant {
public:
    WeightedInterpolant(const BasisSet& basis, const std::function<double(double)>& f, const WeightSpec& xi);
    double operator()(double x) const;
    const std::vector<double>& scaled_samples() const { return s_; }

private:
    const BasisSet* basis_;
    WeightSpec xi_;
    std::vector<double> s_;
    std::vector<double> fx_;
};

double weighted_interpolate(const BasisSet& basis, const std::function<double(double)>& f, const WeightSpec& xi,
                            double x);

enum class Norm { Sup, L2 };

// For unbounded intervals the L2 norm is weighted by xi^2 and the sup grid covers the
// region where xi exceeds 1e-16 of its maximum.
double error_norm(const std::function<double(double)>& f, const std::function<double(double)>& approx,
                  const Interval& interval, Norm norm, int grid_size = 1001, const WeightSpec* xi = nullptr);

struct ConvergenceRow {
    int n = 0;
    double sup_error = 0.0;
    double l2_error = 0.0;
    double log_error = 0.0;
};

struct FitResult {
    std::vector<ConvergenceRow> rows;
    std::vector<std::pair<int, double>> log_errors;  // points used in the fit
    double slope = 0.0;
    double intercept = 0.0;
    double r_estimate = 0.0;
    std::string note;
};

FitResult convergence_table(const FamilySpec& family, const std::function<double(double)>& f, const WeightSpec& xi,
                            const std::vector<int>& n_list);

// Least-squares line through (x, y).
void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept,
              double* r2 = nullptr);

}  // namespace orthospec
