#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthospec/families.hpp"
#include "orthospec/matrix.hpp"
#include "orthospec/spectra.hpp"

namespace orthospec {

enum class XiKind { Cpc, NpcUnit, Custom };
enum class Side { Plus, Minus };

// Best: for each entry integrate the side with the smaller absolute integrand mass and
// take the other from the row-sum identity. Complement: B+ by quadrature, B- = W - B+.
// Direct: both sides by quadrature.
enum class AssemblyRoute { Best, Complement, Direct };
enum class MapChoice { Auto, Log, SinhLog };

std::string to_string(XiKind x);
std::string to_string(Side s);
std::string to_string(AssemblyRoute r);
XiKind parse_xi(const std::string& s);
AssemblyRoute parse_route(const std::string& s);
MapChoice parse_map(const std::string& s);

struct AssemblyOptions {
    int quad_n = 0;  // 0 selects N from the degree
    double quad_h = 0.0;
    MapChoice map = MapChoice::Auto;
    std::optional<double> truncation;
    AssemblyRoute route = AssemblyRoute::Best;
    WeightSpec custom_xi;
    int threads = 0;
};

struct QuadSummary {
    int N = 0;        // finite sub-intervals
    int N_tail = 0;   // semi-infinite sub-intervals
    double h = 0.0;
    double h_tail = 0.0;
    std::string map;
    bool automatic = true;
};

struct IntegralMatrixPair {
    Mat b_plus;
    Mat b_minus;
    NodeSet nodes;
    FamilySpec family;
    XiKind xi = XiKind::Cpc;
    QuadSummary quad;
    std::optional<double> truncation;
    double a = -1.0;  // integration interval
    double b = 1.0;
    std::vector<double> weights;        // W_k
    double direct_defect = 0.0;         // max |P + M - W| from the direct quadratures (NaN if not computed)
    AssemblyRoute route = AssemblyRoute::Best;
};

int auto_quad_n(int m);

IntegralMatrixPair build_pair(const FamilySpec& family, int n, XiKind xi, const AssemblyOptions& opt = {});
IntegralMatrixPair build_pair(const NodeSet& nodes, XiKind xi, const AssemblyOptions& opt = {});

IntegralMatrixPair rescale(const IntegralMatrixPair& pair, double a_new, double b_new);

double row_sum_defect(const IntegralMatrixPair& pair, const std::vector<double>& w);
double row_sum_defect(const IntegralMatrixPair& pair);

// W_k = int_a^b b_k(x) dx by Gauss-Legendre (exact for the degree n-1 basis).
std::vector<double> unit_weights(const NodeSet& nodes, double a, double b);

// Spectrum of B+ or B- for xi = 1 on a finite interval, from the exactly similar matrix in the
// Legendre coefficient basis, assembled and solved in 'digits' decimal digits (16 = double).
Spectrum coefficient_spectrum(const std::vector<double>& nodes, double a, double b, Side side, int digits);

// Spectrum of B+ or B- with the matrix reassembled from the nodes by tanh-sinh quadrature in 'digits'
// decimal digits. Needs a finite interval and xi = 1 or a Jacobi-type family weight.
Spectrum reassembled_spectrum(const IntegralMatrixPair& pair, Side side, int digits);

}  // namespace orthospec
