#include "tmss/laguerre.hpp"

#include <cmath>

#include "tmss/errors.hpp"

namespace tmss {

double log_factorial(int n)
{
    if (n < 0) throw DomainError("log_factorial: negative argument");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

std::vector<double> assoc_laguerre_sequence(int n_max, int k, double x)
{
    if (n_max < 0 || k < 0) throw DomainError("assoc_laguerre_sequence: negative order");
    std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
    out[0] = 1.0;
    if (n_max == 0) return out;
    out[1] = 1.0 + k - x;
    // (j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}
    for (int j = 1; j < n_max; ++j) {
        out[j + 1] = ((2.0 * j + 1.0 + k - x) * out[j] - (j + k) * out[j - 1]) / (j + 1.0);
    }
    return out;
}

double laguerre(int n, double x)
{
    return assoc_laguerre_sequence(n, 0, x).back();
}

}  // namespace tmss
