#pragma once

// Real nonsymmetric eigenvalues: balancing, Householder Hessenberg reduction and
// Francis double-shift QR. Templated so the same code runs in double and in
// multiprecision.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "orthospec/matrix.hpp"

namespace orthospec::detail {

template <class T>
T abs_of(const T& x) {
    using std::abs;
    return abs(x);
}

template <class T>
T sqrt_of(const T& x) {
    using std::sqrt;
    return sqrt(x);
}

template <class T>
T sign_of(const T& a, const T& b) {
    return b >= T(0) ? abs_of(a) : -abs_of(a);
}

// Diagonal similarity by powers of two; returns the scaling vector D with A <- D^{-1} A D.
template <class T>
std::vector<T> balance(Matrix<T>& a) {
    const std::size_t n = a.rows();
    std::vector<T> scale(n, T(1));
    const T radix(2), sqrdx(4);
    bool done = false;
    int sweeps = 0;
    while (!done && sweeps++ < 200) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            T r(0), c(0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) {
                    c += abs_of(a(j, i));
                    r += abs_of(a(i, j));
                }
            if (c == T(0) || r == T(0)) continue;
            T g = r / radix;
            T f(1);
            const T s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < T(0.95) * s) {
                done = false;
                const T ginv = T(1) / f;
                scale[i] *= f;
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= ginv;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
    return scale;
}

// Householder reduction to upper Hessenberg form. If q is given it receives the
// orthogonal factor with A = Q H Q^T.
template <class T>
void hessenberg(Matrix<T>& a, Matrix<T>* q) {
    const std::size_t n = a.rows();
    if (q) *q = Matrix<T>::identity(n);
    std::vector<T> v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        T alpha(0);
        for (std::size_t i = k + 1; i < n; ++i) alpha = alpha > abs_of(a(i, k)) ? alpha : abs_of(a(i, k));
        if (alpha == T(0)) continue;
        T sigma(0);
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a(i, k) / alpha;
            sigma += v[i] * v[i];
        }
        T norm = sqrt_of(sigma);
        if (v[k + 1] < T(0)) norm = -norm;
        v[k + 1] += norm;
        const T beta = T(1) / (norm * v[k + 1]);
        // A <- P A
        for (std::size_t j = k; j < n; ++j) {
            T s(0);
            for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
        }
        // A <- A P
        for (std::size_t i = 0; i < n; ++i) {
            T s(0);
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
        }
        if (q) {
            for (std::size_t i = 0; i < n; ++i) {
                T s(0);
                for (std::size_t j = k + 1; j < n; ++j) s += (*q)(i, j) * v[j];
                s *= beta;
                for (std::size_t j = k + 1; j < n; ++j) (*q)(i, j) -= s * v[j];
            }
        }
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = T(0);
    }
}

template <class T>
struct HqrResult {
    std::vector<T> re;
    std::vector<T> im;
    int iterations = 0;
    bool converged = true;
};

// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
template <class T>
HqrResult<T> hqr(Matrix<T>& a, int max_total_iterations) {
    const int n = static_cast<int>(a.rows());
    HqrResult<T> res;
    res.re.assign(n, T(0));
    res.im.assign(n, T(0));
    const T eps = std::numeric_limits<T>::epsilon();

    T anorm(0);
    for (int i = 0; i < n; ++i)
        for (int j = (i > 0 ? i - 1 : 0); j < n; ++j) anorm += abs_of(a(i, j));

    int nn = n - 1;
    T t(0);
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l >= 1; --l) {
                T s = abs_of(a(l - 1, l - 1)) + abs_of(a(l, l));
                if (s == T(0)) s = anorm;
                if (abs_of(a(l, l - 1)) <= eps * s) {
                    a(l, l - 1) = T(0);
                    break;
                }
            }
            T x = a(nn, nn);
            if (l == nn) {
                res.re[nn] = x + t;
                res.im[nn] = T(0);
                --nn;
            } else {
                T y = a(nn - 1, nn - 1);
                T w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    T p = T(0.5) * (y - x);
                    T q = p * p + w;
                    T z = sqrt_of(abs_of(q));
                    x += t;
                    if (q >= T(0)) {
                        z = p + sign_of(z, p);
                        res.re[nn - 1] = res.re[nn] = x + z;
                        if (z != T(0)) res.re[nn] = x - w / z;
                        res.im[nn - 1] = res.im[nn] = T(0);
                    } else {
                        res.re[nn - 1] = res.re[nn] = x + p;
                        res.im[nn - 1] = -z;
                        res.im[nn] = z;
                    }
                    nn -= 2;
                } else {
                    if (res.iterations >= max_total_iterations) {
                        res.converged = false;
                        for (int i = 0; i <= nn; ++i) {
                            res.re[i] = a(i, i) + t;
                            res.im[i] = T(0);
                        }
                        return res;
                    }
                    if (its > 0 && its % 10 == 0) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        T s = abs_of(a(nn, nn - 1)) + abs_of(a(nn - 1, nn - 2));
                        y = x = T(0.75) * s;
                        w = T(-0.4375) * s * s;
                    }
                    ++its;
                    ++res.iterations;
                    int m = nn - 2;
                    T p(0), q(0), r(0), z(0);
                    for (; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        T s = y - z;
                        p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = abs_of(p) + abs_of(q) + abs_of(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        T u = abs_of(a(m, m - 1)) * (abs_of(q) + abs_of(r));
                        T v = abs_of(p) * (abs_of(a(m - 1, m - 1)) + abs_of(z) + abs_of(a(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = T(0);
                        if (i != m + 2) a(i, i - 3) = T(0);
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = T(0);
                            if (k != nn - 1) r = a(k + 2, k - 1);
                            x = abs_of(p) + abs_of(q) + abs_of(r);
                            if (x != T(0)) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        T s = sign_of(sqrt_of(p * p + q * q + r * r), p);
                        if (s != T(0)) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k != nn - 1) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * y;
                                a(k, j) -= p * x;
                            }
                            const int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + y * a(i, k + 1);
                                if (k != nn - 1) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (nn >= 1 && l < nn - 1);
    }
    return res;
}

template <class T>
HqrResult<T> nonsymmetric_eigenvalues(Matrix<T> a, bool do_balance) {
    if (do_balance) balance(a);
    hessenberg(a, static_cast<Matrix<T>*>(nullptr));
    return hqr(a, 30 * static_cast<int>(a.rows()) + 30);
}

}  // namespace orthospec::detail
