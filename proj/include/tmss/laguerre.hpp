#pragma once

#include <vector>

namespace tmss {

// ln(n!) via lgamma; exact enough for factorial ratios far beyond n = 170.
double log_factorial(int n);

// Generalized Laguerre polynomials L_0^{(k)}(x) ... L_{n_max}^{(k)}(x)
// by the forward three-term recurrence.
std::vector<double> assoc_laguerre_sequence(int n_max, int k, double x);

// L_n(x) = L_n^{(0)}(x).
double laguerre(int n, double x);

}  // namespace tmss
