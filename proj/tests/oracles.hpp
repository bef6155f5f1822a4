#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's closed forms.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double pi = std::numbers::pi;

// exp(A) by scaling and squaring around a plain Taylor series.
inline CMatrix taylor_expm(const CMatrix& a)
{
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
    const CMatrix scaled = a / std::ldexp(1.0, squarings);
    CMatrix term = CMatrix::Identity(a.rows(), a.cols());
    CMatrix sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * scaled / double(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() < 1e-300) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

inline CMatrix lowering(int dim)
{
    CMatrix a = CMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

// Leading dim x dim block of exp(alpha a^dagger - alpha^* a) built in a space
// padded by `pad` levels so the truncation never touches the block.
inline CMatrix displacement_series(cd alpha, int dim, int pad = 60)
{
    const CMatrix a = lowering(dim + pad);
    const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return taylor_expm(gen).topLeftCorner(dim, dim);
}

// L_n^(k)(x) from the explicit finite sum.
inline double laguerre_sum(int n, int k, double x)
{
    // term_j = (-1)^j C(n+k, n-j) x^j / j!, built up by ratios in long double
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i) term = term * (k + i) / i;  // C(n+k, n)
    long double acc = term;
    for (int j = 1; j <= n; ++j) {
        term = -term * (n - j + 1) / (k + j) * x / j;
        acc += term;
    }
    return static_cast<double>(acc);
}

// sum of |terms|, the scale against which cancellation error is judged
inline double laguerre_abs_sum(int n, int k, double x)
{
    long double term = 1.0L;
    for (int i = 1; i <= n; ++i) term = term * (k + i) / i;
    long double acc = term;
    for (int j = 1; j <= n; ++j) {
        term = term * (n - j + 1) / (k + j) * x / j;
        acc += term;
    }
    return static_cast<double>(acc);
}

// The reduced states are mixtures of "geometric" diagonal states
// G(x)_n = (1 - x) x^n with x = +lambda and x = -lambda:
//   even = (1+l)/2 G(l) + (1-l)/2 G(-l)
//   odd  = (1+l)/(2l) G(l) - (1-l)/(2l) G(-l)
struct Mixture {
    double w_plus;
    double w_minus;
};

inline Mixture even_mixture(double l) { return {0.5 * (1 + l), 0.5 * (1 - l)}; }
inline Mixture odd_mixture(double l) { return {(1 + l) / (2 * l), -(1 - l) / (2 * l)}; }

inline double geometric_wigner(double x, double s2)
{
    const double k = (1 - x) / (1 + x);
    return 2 / pi * k * std::exp(-2 * k * s2);
}

inline double mixture_wigner(const Mixture& m, double l, double s2)
{
    return m.w_plus * geometric_wigner(l, s2) + m.w_minus * geometric_wigner(-l, s2);
}

// <n> and <n(n-1)> of G(x)
inline double geometric_n1(double x) { return x / (1 - x); }
inline double geometric_n2(double x) { return 2 * x * x / ((1 - x) * (1 - x)); }

inline double mixture_g2(const Mixture& m, double l)
{
    const double n1 = m.w_plus * geometric_n1(l) + m.w_minus * geometric_n1(-l);
    const double n2 = m.w_plus * geometric_n2(l) + m.w_minus * geometric_n2(-l);
    return n2 / (n1 * n1);
}

inline double mixture_mean(const Mixture& m, double l)
{
    return m.w_plus * geometric_n1(l) + m.w_minus * geometric_n1(-l);
}

// Single-mode squeezed vacuum, squeeze along the axis: populations
// P_2m = (2m)! / (2^m m!)^2 tanh^{2m} r / cosh r, and <X^2> = e^{-2r}.
inline double smss_p2m(int m, double r)
{
    const double lg = std::lgamma(2.0 * m + 1) - 2 * (m * std::log(2.0) + std::lgamma(m + 1.0));
    return std::exp(lg + 2.0 * m * std::log(std::tanh(r))) / std::cosh(r);
}

// Trapezoid rule on a uniform 2-D grid of n x n points over [lo, hi]^2.
template <class F>
double quadrature_2d(F f, double lo, double hi, int n)
{
    const double h = (hi - lo) / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wi = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        for (int j = 0; j < n; ++j) {
            const double wj = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += wi * wj * f(lo + i * h, lo + j * h);
        }
    }
    return acc * h * h;
}

}  // namespace oracle
