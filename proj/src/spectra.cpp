#include "orthospec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "orthospec/detail/hqr.hpp"
#include "orthospec/detail/mp.hpp"
#include "orthospec/error.hpp"

namespace orthospec {

namespace {

double pythag(double a, double b) {
    return std::hypot(a, b);
}

bool complex_less(const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
}

template <class T>
Spectrum solve_nonsymmetric(const Mat& a, const EigOptions& opt, int digits) {
    if (!a.square()) throw ParameterDomainError("eigvals: matrix is not square");
    if (a.rows() > 1000) throw ParameterDomainError("eigvals: dimension exceeds 1000");
    Spectrum s;
    s.digits = digits;
    const std::size_t n = a.rows();
    if (n == 0) return s;
    Matrix<T> m = a.template cast<T>();
    auto r = detail::nonsymmetric_eigenvalues(std::move(m), opt.balance);
    s.converged = r.converged;
    s.iterations = r.iterations;
    s.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        s.eigenvalues[i] = Complex(detail::to_double(r.re[i]), detail::to_double(r.im[i]));
    // pair conjugates exactly
    for (std::size_t i = 0; i < n; ++i) {
        if (s.eigenvalues[i].imag() > 0 && i + 1 < n && s.eigenvalues[i + 1].imag() < 0) {
            const double re = 0.5 * (s.eigenvalues[i].real() + s.eigenvalues[i + 1].real());
            const double im = 0.5 * (s.eigenvalues[i].imag() - s.eigenvalues[i + 1].imag());
            s.eigenvalues[i] = Complex(re, im);
            s.eigenvalues[i + 1] = Complex(re, -im);
            ++i;
        } else if (s.eigenvalues[i].imag() < 0 && i + 1 < n && s.eigenvalues[i + 1].imag() > 0) {
            const double re = 0.5 * (s.eigenvalues[i].real() + s.eigenvalues[i + 1].real());
            const double im = 0.5 * (s.eigenvalues[i + 1].imag() - s.eigenvalues[i].imag());
            s.eigenvalues[i] = Complex(re, -im);
            s.eigenvalues[i + 1] = Complex(re, im);
            ++i;
        }
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), complex_less);
    s.min_real_part = min_real_part(s);
    return s;
}

}  // namespace

SymTridEigen symtrid_eigen(const std::vector<double>& diag, const std::vector<double>& offdiag,
                           bool want_first_components) {
    const int n = static_cast<int>(diag.size());
    if (n == 0) return {};
    if (static_cast<int>(offdiag.size()) != n - 1)
        throw ParameterDomainError("symtrid_eigen: off-diagonal length must be n-1");
    std::vector<double> d = diag;
    std::vector<double> e(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) e[i] = offdiag[i];
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) throw ConvergenceError("symtrid_eigen: no convergence", iter);
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = pythag(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    e[i + 1] = (r = pythag(f, g));
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    d[i + 1] = g + (p = s * r);
                    g = c * r - b;
                    if (want_first_components) {
                        f = z[i + 1];
                        z[i + 1] = s * z[i] + c * f;
                        z[i] = c * z[i] - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
    SymTridEigen out;
    out.values.resize(n);
    if (want_first_components) out.first_components.resize(n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = d[idx[k]];
        if (want_first_components) out.first_components[k] = z[idx[k]];
    }
    return out;
}

std::vector<double> symtrid_eigvals(const std::vector<double>& diag, const std::vector<double>& offdiag) {
    return symtrid_eigen(diag, offdiag, false).values;
}

Spectrum eigvals(const Mat& a, const EigOptions& opt) {
    return solve_nonsymmetric<double>(a, opt, 16);
}

Spectrum eigvals_digits(const Mat& a, int digits, const EigOptions& opt) {
    return detail::with_precision(digits, [&](auto tag) {
        using T = decltype(tag);
        return solve_nonsymmetric<T>(a, opt, digits == 0 ? 16 : digits);
    });
}

const std::vector<int>& precision_ladder() {
    static const std::vector<int> ladder{16, 50, 100, 200, 400};
    return ladder;
}

double min_real_part(const Spectrum& s) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& z : s.eigenvalues) m = std::min(m, z.real());
    return m;
}

std::vector<std::size_t> match_spectra(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.size() != b.size()) throw ParameterDomainError("match_spectra: sizes differ");
    std::vector<std::size_t> order(a.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return complex_less(a[i], a[j]); });
    std::vector<bool> used(b.size(), false);
    std::vector<std::size_t> perm(a.size(), 0);
    for (std::size_t i : order) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bj = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(a[i] - b[j]);
            if (d < best) {
                best = d;
                bj = j;
            }
        }
        used[bj] = true;
        perm[i] = bj;
    }
    return perm;
}

double spectrum_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    const auto perm = match_spectra(a, b);
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[perm[i]]));
    return d;
}

double norm_inf(const Mat& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

double norm_max(const Mat& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

namespace {

template <class T>
void factor_in_place(Matrix<T>& lu, std::vector<std::size_t>& perm, int& sign, double pivot_tol) {
    const std::size_t n = lu.rows();
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), 0);
    sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > best) {
                best = std::abs(lu(i, k));
                p = i;
            }
        if (best <= pivot_tol) throw SingularMatrixError("lu_factor: singular pivot", static_cast<int>(k));
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
            std::swap(perm[k], perm[p]);
            sign = -sign;
        }
        const T inv = T(1.0) / lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const T f = lu(i, k) * inv;
            lu(i, k) = f;
            if (f == T(0.0)) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
}

template <class T>
std::vector<T> substitute(const Matrix<T>& lu, const std::vector<std::size_t>& perm, const std::vector<T>& b) {
    const std::size_t n = lu.rows();
    std::vector<T> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        T s = b[perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        T s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
        x[i] = s / lu(i, i);
    }
    return x;
}

// Solves A^H x = b given PA = LU.
std::vector<Complex> substitute_adjoint(const CMat& lu, const std::vector<std::size_t>& perm,
                                        const std::vector<Complex>& b) {
    const std::size_t n = lu.rows();
    // A^H = U^H L^H P, so solve U^H y = b, L^H z = y, x = P^T z.
    std::vector<Complex> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= std::conj(lu(j, i)) * y[j];
        y[i] = s / std::conj(lu(i, i));
    }
    for (std::size_t i = n; i-- > 0;) {
        Complex s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= std::conj(lu(j, i)) * y[j];
        y[i] = s;
    }
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) x[perm[i]] = y[i];
    return x;
}

}  // namespace

LU lu_factor(const Mat& a) {
    if (!a.square()) throw ParameterDomainError("lu_factor: matrix is not square");
    LU f;
    f.lu = a;
    factor_in_place(f.lu, f.perm, f.sign, 1e-14 * norm_inf(a));
    return f;
}

std::vector<double> lu_solve(const LU& f, const std::vector<double>& b) {
    if (b.size() != f.lu.rows()) throw ParameterDomainError("lu_solve: dimension mismatch");
    return substitute(f.lu, f.perm, b);
}

std::vector<double> lu_solve(const Mat& a, const std::vector<double>& b) {
    return lu_solve(lu_factor(a), b);
}

Mat lu_solve(const Mat& a, const Mat& b) {
    const LU f = lu_factor(a);
    Mat x(b.rows(), b.cols());
    std::vector<double> col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        const auto s = lu_solve(f, col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = s[i];
    }
    return x;
}

double determinant(const Mat& a) {
    LU f;
    f.lu = a;
    try {
        factor_in_place(f.lu, f.perm, f.sign, 0.0);
    } catch (const SingularMatrixError&) {
        return 0.0;
    }
    double det = f.sign;
    for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
    return det;
}

CLU lu_factor(const CMat& a) {
    CLU f;
    f.lu = a;
    int sign = 1;
    double nrm = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
        nrm = std::max(nrm, s);
    }
    factor_in_place(f.lu, f.perm, sign, 1e-14 * nrm);
    return f;
}

std::vector<Complex> lu_solve(const CLU& f, const std::vector<Complex>& b) {
    return substitute(f.lu, f.perm, b);
}

double smallest_singular(const CMat& a) {
    const std::size_t n = a.rows();
    if (!a.square()) throw ParameterDomainError("smallest_singular: matrix is not square");
    if (n == 0) return 0.0;
    if (n == 1) return std::abs(a(0, 0));
    CMat lu = a;
    std::vector<std::size_t> perm;
    int sign = 1;
    try {
        factor_in_place(lu, perm, sign, 0.0);
    } catch (const SingularMatrixError&) {
        return 0.0;
    }
    std::mt19937_64 rng(0x5EED);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> x(n);
    for (auto& v : x) v = Complex(u(rng), u(rng));
    auto normalize = [](std::vector<Complex>& v) {
        double s = 0.0;
        for (const auto& c : v) s += std::norm(c);
        s = std::sqrt(s);
        for (auto& c : v) c /= s;
        return s;
    };
    normalize(x);
    double est = 0.0;
    for (int it = 0; it < 500; ++it) {
        // y = (A^H A)^{-1} x = A^{-1} A^{-H} x
        auto z = substitute_adjoint(lu, perm, x);
        auto y = substitute(lu, perm, z);
        const double g = normalize(y);
        if (!std::isfinite(g)) return 0.0;
        const double next = 1.0 / std::sqrt(g);
        x = std::move(y);
        if (it > 2 && std::abs(next - est) <= 1e-13 * next) {
            est = next;
            break;
        }
        est = next;
    }
    return est;
}

double smallest_singular(const Mat& a) {
    return smallest_singular(a.cast<Complex>());
}

ResolventField resolvent_field(const Mat& a, const GridSpec& grid) {
    if (grid.n_re < 1 || grid.n_im < 1 || grid.n_re > 400 || grid.n_im > 400)
        throw ParameterDomainError("resolvent_field: grid sizes must be in [1, 400]");
    if (!std::isfinite(grid.re_min) || !std::isfinite(grid.re_max) || !std::isfinite(grid.im_min) ||
        !std::isfinite(grid.im_max))
        throw ParameterDomainError("resolvent_field: grid bounds must be finite");
    ResolventField f;
    f.grid = grid;
    f.values = Matrix<double>(grid.n_im, grid.n_re);
    f.dist_values = Matrix<double>(grid.n_im, grid.n_re);
    f.on_spectrum = Matrix<int>(grid.n_im, grid.n_re, 0);
    f.eigenvalues = eigvals(a).eigenvalues;
    const double eig_tol = 1e-12 * std::max(norm_inf(a), 1e-300);
    const std::size_t n = a.rows();
    CMat shifted(n, n);
    for (int iy = 0; iy < grid.n_im; ++iy) {
        const double im = grid.n_im == 1 ? grid.im_min
                                         : grid.im_min + (grid.im_max - grid.im_min) * iy / (grid.n_im - 1);
        for (int ix = 0; ix < grid.n_re; ++ix) {
            const double re = grid.n_re == 1 ? grid.re_min
                                             : grid.re_min + (grid.re_max - grid.re_min) * ix / (grid.n_re - 1);
            const Complex lambda(re, im);
            double dist = std::numeric_limits<double>::infinity();
            for (const auto& z : f.eigenvalues) dist = std::min(dist, std::abs(lambda - z));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) shifted(i, j) = Complex(a(i, j), 0.0) - (i == j ? lambda : 0.0);
            const double smin = smallest_singular(shifted);
            const double inf = std::numeric_limits<double>::infinity();
            f.values(iy, ix) = smin > 0.0 ? 1.0 / smin : inf;
            f.dist_values(iy, ix) = dist > 0.0 ? 1.0 / dist : inf;
            f.on_spectrum(iy, ix) = (dist <= eig_tol || smin == 0.0) ? 1 : 0;
        }
    }
    return f;
}

CMat eigenvectors(const Mat& a, const std::vector<Complex>& lambda, std::uint64_t seed) {
    const std::size_t n = a.rows();
    Mat h = a;
    const std::vector<double> scale = detail::balance(h);
    Mat q;
    detail::hessenberg(h, &q);
    const double hnorm = std::max(norm_inf(h), 1e-300);
    const double eps = std::numeric_limits<double>::epsilon();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMat x(n, n);
    CMat shifted(n, n);
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        if (k > 0 && lambda[k].imag() != 0.0 && lambda[k] == std::conj(lambda[k - 1])) {
            for (std::size_t i = 0; i < n; ++i) x(i, k) = std::conj(x(i, k - 1));
            continue;
        }
        // Perturb the shift slightly so the factorization stays nonsingular.
        const Complex mu = lambda[k] + Complex(1.0, 0.0) * (hnorm * eps * 8.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) shifted(i, j) = Complex(h(i, j), 0.0) - (i == j ? mu : 0.0);
        CMat lu = shifted;
        std::vector<std::size_t> perm;
        int sign = 1;
        try {
            factor_in_place(lu, perm, sign, 0.0);
        } catch (const SingularMatrixError&) {
            for (std::size_t i = 0; i < n; ++i) lu(i, i) += hnorm * eps;
            factor_in_place(lu, perm, sign, 0.0);
        }
        std::vector<Complex> v(n);
        for (auto& c : v) c = Complex(u(rng), u(rng));
        for (int it = 0; it < 2; ++it) {
            v = substitute(lu, perm, v);
            double s = 0.0;
            for (const auto& c : v) s += std::norm(c);
            s = std::sqrt(s);
            for (auto& c : v) c /= s;
        }
        // back to the original basis: x = D Q v
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += q(i, j) * v[j];
            x(i, k) = scale[i] * s;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::norm(x(i, k));
        s = std::sqrt(s);
        for (std::size_t i = 0; i < n; ++i) x(i, k) /= s;
    }
    return x;
}

Mat mat_function(const Mat& a, const std::function<Complex(Complex)>& f, MatFunctionInfo* info,
                 double max_condition) {
    const std::size_t n = a.rows();
    if (!a.square()) throw ParameterDomainError("mat_function: matrix is not square");
    const Spectrum s = eigvals(a);
    if (!s.converged) throw ConvergenceError("mat_function: eigenvalues did not converge", s.iterations);
    // order conjugate pairs adjacently with positive imaginary part first
    std::vector<Complex> lambda;
    for (const auto& z : s.eigenvalues)
        if (z.imag() >= 0.0) {
            lambda.push_back(z);
            if (z.imag() > 0.0) lambda.push_back(std::conj(z));
        }
    const CMat x = eigenvectors(a, lambda);
    CLU fx;
    try {
        fx = lu_factor(x);
    } catch (const SingularMatrixError&) {
        throw ConditioningError("mat_function: eigenvector matrix is singular; try a smaller n");
    }
    CMat xinv(n, n);
    std::vector<Complex> e(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), Complex(0.0));
        e[j] = 1.0;
        const auto col = lu_solve(fx, e);
        for (std::size_t i = 0; i < n; ++i) xinv(i, j) = col[i];
    }
    auto norm1 = [n](const CMat& m) {
        double best = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::abs(m(i, j));
            best = std::max(best, s);
        }
        return best;
    };
    const double cond = norm1(x) * norm1(xinv);
    if (info) info->condition = cond;
    if (!(cond <= max_condition))
        throw ConditioningError("mat_function: eigenvector matrix condition " + std::to_string(cond) +
                                " exceeds limit; try a smaller n");
    std::vector<Complex> fl(n);
    for (std::size_t k = 0; k < n; ++k) fl[k] = f(lambda[k]);
    Mat out(n, n);
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += x(i, k) * fl[k] * xinv(k, j);
            out(i, j) = s.real();
            max_re = std::max(max_re, std::abs(s));
            max_im = std::max(max_im, std::abs(s.imag()));
        }
    if (info) info->imag_residue = max_re > 0.0 ? max_im / max_re : max_im;
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Verified:
            return "verified";
        case Verdict::Falsified:
            return "falsified";
        default:
            return "inconclusive";
    }
}

CertifiedSpectrum certify_right_half_plane(const SpectrumSource& source, const CertifyOptions& opt) {
    CertifiedSpectrum out;
    out.tol_abs = 1e-9 * opt.matrix_norm_inf;
    Spectrum prev = source(16);
    if (opt.mode == TolMode::Absolute) {
        out.spectrum = prev;
        out.digits = 16;
        out.tolerance.assign(prev.eigenvalues.size(), out.tol_abs);
        if (!prev.converged) {
            out.verdict = Verdict::Inconclusive;
            out.note = "eigensolver did not converge";
        } else if (prev.min_real_part > out.tol_abs) {
            out.verdict = Verdict::Verified;
        } else if (prev.min_real_part < -out.tol_abs) {
            out.verdict = Verdict::Falsified;
        }
        return out;
    }
    int prev_digits = 16;
    for (int digits : precision_ladder()) {
        if (digits <= 16) continue;
        if (digits > opt.max_digits) break;
        Spectrum cur = source(digits);
        const std::size_t n = cur.eigenvalues.size();
        std::vector<double> tol(n, std::numeric_limits<double>::infinity());
        if (cur.converged && prev.converged && prev.eigenvalues.size() == n) {
            const auto perm = match_spectra(cur.eigenvalues, prev.eigenvalues);
            const double eps_prev = std::pow(10.0, -prev_digits);
            for (std::size_t i = 0; i < n; ++i) {
                const double delta = std::abs(cur.eigenvalues[i].real() - prev.eigenvalues[perm[i]].real());
                tol[i] = std::max(delta, 8.0 * eps_prev * std::abs(cur.eigenvalues[i]));
            }
        }
        bool all_pos = n > 0, any_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double re = cur.eigenvalues[i].real();
            if (!(re > tol[i])) all_pos = false;
            if (re < -tol[i]) any_neg = true;
        }
        out.spectrum = cur;
        out.tolerance = tol;
        out.digits = digits;
        if (all_pos) {
            out.verdict = Verdict::Verified;
            return out;
        }
        if (any_neg) {
            out.verdict = Verdict::Falsified;
            return out;
        }
        prev = std::move(cur);
        prev_digits = digits;
    }
    out.verdict = Verdict::Inconclusive;
    out.note = "sign of the leftmost eigenvalues not resolved up to " + std::to_string(out.digits) + " digits";
    return out;
}

}  // namespace orthospec
