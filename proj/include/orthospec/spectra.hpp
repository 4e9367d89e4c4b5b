#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "orthospec/matrix.hpp"

namespace orthospec {

using Complex = std::complex<double>;
using CMat = Matrix<Complex>;

struct Spectrum {
    std::vector<Complex> eigenvalues;
    bool converged = true;
    int iterations = 0;
    double min_real_part = 0.0;
    std::string source;
    int digits = 16;  // working precision of the solve (decimal digits)
};

struct SymTridEigen {
    std::vector<double> values;           // ascending
    std::vector<double> first_components;  // first row of the eigenvector matrix, if requested
};

// Implicit QL with Wilkinson shifts.
SymTridEigen symtrid_eigen(const std::vector<double>& diag, const std::vector<double>& offdiag,
                           bool want_first_components);
std::vector<double> symtrid_eigvals(const std::vector<double>& diag, const std::vector<double>& offdiag);

struct EigOptions {
    bool balance = true;
};

Spectrum eigvals(const Mat& a, const EigOptions& opt = {});

// Eigenvalues of a double matrix computed in 'digits' decimal digits (one of 50, 100, 200, 400;
// 0 or 16 means plain double).
Spectrum eigvals_digits(const Mat& a, int digits, const EigOptions& opt = {});

// Precisions available for escalation, in increasing order; 16 denotes double.
const std::vector<int>& precision_ladder();

double min_real_part(const Spectrum& s);

// Greedy nearest matching after sorting by (Re, Im); returns the largest pairwise distance.
double spectrum_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);
// Permutation p such that b[p[i]] is matched to a[i].
std::vector<std::size_t> match_spectra(const std::vector<Complex>& a, const std::vector<Complex>& b);

double norm_inf(const Mat& a);
double norm_max(const Mat& a);

struct LU {
    Mat lu;
    std::vector<std::size_t> perm;
    int sign = 1;
};

LU lu_factor(const Mat& a);
std::vector<double> lu_solve(const LU& f, const std::vector<double>& b);
std::vector<double> lu_solve(const Mat& a, const std::vector<double>& b);
Mat lu_solve(const Mat& a, const Mat& b);
double determinant(const Mat& a);

struct CLU {
    CMat lu;
    std::vector<std::size_t> perm;
};
CLU lu_factor(const CMat& a);
std::vector<Complex> lu_solve(const CLU& f, const std::vector<Complex>& b);

double smallest_singular(const Mat& a);
double smallest_singular(const CMat& a);

struct GridSpec {
    double re_min = -1, re_max = 1, im_min = -1, im_max = 1;
    int n_re = 50, n_im = 50;
};

struct ResolventField {
    GridSpec grid;
    Matrix<double> values;      // 1/sigma_min(A - lambda I), row = im index, col = re index
    Matrix<double> dist_values;  // 1/dist(lambda, spectrum)
    Matrix<int> on_spectrum;     // lambda within eigTol of an eigenvalue
    std::vector<Complex> eigenvalues;
};

ResolventField resolvent_field(const Mat& a, const GridSpec& grid);

struct MatFunctionInfo {
    double condition = 0.0;      // estimate of cond_1 of the eigenvector matrix
    double imag_residue = 0.0;   // max |Im F(A)| / max |F(A)|
};

// X diag(F(lambda)) X^{-1}.
Mat mat_function(const Mat& a, const std::function<Complex(Complex)>& f, MatFunctionInfo* info = nullptr,
                 double max_condition = 1e8);

// Eigenvectors (columns) by inverse iteration on the Hessenberg form.
CMat eigenvectors(const Mat& a, const std::vector<Complex>& lambda, std::uint64_t seed = 0x5EED);

enum class Verdict { Verified, Falsified, Inconclusive };
std::string to_string(Verdict v);

enum class TolMode { Certified, Absolute };

struct CertifiedSpectrum {
    Spectrum spectrum;                // values from the most precise solve used
    std::vector<double> tolerance;    // per-eigenvalue bound on the error of Re(lambda)
    Verdict verdict = Verdict::Inconclusive;
    double tol_abs = 0.0;             // 1e-9 * ||B||_inf, reported for reference
    int digits = 16;
    std::string note;
};

// Supplies eigenvalues of the matrix under test at the requested working precision.
using SpectrumSource = std::function<Spectrum(int digits)>;

struct CertifyOptions {
    TolMode mode = TolMode::Certified;
    double matrix_norm_inf = 0.0;  // used by TolMode::Absolute
    int max_digits = 400;
};

CertifiedSpectrum certify_right_half_plane(const SpectrumSource& source, const CertifyOptions& opt);

}  // namespace orthospec
