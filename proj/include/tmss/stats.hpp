#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "tmss/fock_core.hpp"
#include "tmss/states.hpp"

namespace tmss {

// Phase-space point; only s^2 = q^2 + p^2 enters the number-diagonal formulas.
// The complex probe point is identified as alpha = q + i p, so s^2 = |alpha|^2.
struct PhasePoint {
    double q = 0.0;
    double p = 0.0;

    double s2() const { return q * q + p * p; }
    cd alpha() const { return {q, p}; }
};

struct StatsReport {
    std::vector<double> populations;
    double mean_n = 0.0;
    std::optional<double> g2;  // empty for the vacuum (0/0)
    double purity = 1.0;
};

std::vector<double> populations(const DensityMatrix& rho);
double mean_n(const DensityMatrix& rho);
StatsReport stats_report(const DensityMatrix& rho);

// <a^dagger a^dagger a a> / <a^dagger a>^2 from the Fock diagonal; empty when <n> = 0.
std::optional<double> g2_numeric(const DensityMatrix& rho);

// Closed forms for Thermal, ReducedEven, ReducedOdd and SMSS (lambda = tanh^2 r).
// Empty when the law is undefined at lambda = 0 (even, smss).
std::optional<double> g2_closed(StateFamily family, double lambda);

// Mean excitation number per family as a function of lambda.
double mean_n_closed(StateFamily family, double lambda);

// Bisection for a sign change of f on [lo, hi]; throws DomainError without one.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-14);

struct G2Thresholds {
    double odd_antibunching;  // g2_odd(lambda) = 1
    double even_above_smss;   // g2_even(lambda) = g2_smss(lambda)
};

// Located by bisection on the closed-form laws.
G2Thresholds g2_thresholds();

// Number-diagonal Wigner function by the Fock-state Laguerre sum.
double wigner_generic(const DensityMatrix& rho, const PhasePoint& pt);

// Gaussian closed forms for Thermal, ReducedEven, ReducedOdd.
double wigner_closed(StateFamily family, double lambda, const PhasePoint& pt);

// Diagonal of D(alpha) rho D(alpha)^dagger in a space padded so the
// displacement is exact on rho's support.
std::vector<double> displaced_populations(const DensityMatrix& rho, cd alpha);

// (2/pi) Tr[D(-alpha) rho D(alpha) (-1)^n]; valid for any single-mode state.
double wigner_parity(const DensityMatrix& rho, cd alpha);

// Linear entropy 1 - Tr(rho_a^2) of a pure two-mode state.
double entanglement_numeric(const StateVector& psi);
// Same, for a two-mode density matrix; throws DomainError if it is mixed.
double entanglement_numeric(const DensityMatrix& rho);

double e_tmss(double lambda);
double e_phi(double lambda, double eps);
// E_E = E_O
double e_even_odd(double lambda);

// Values of eps = cos(phi) where E_phi = E_TMSS at fixed lambda: 0 and
// -(1 - lambda^2)/(1 + lambda^2). E_phi exceeds E_TMSS strictly between them.
std::array<double, 2> entanglement_boundary_eps(double lambda);

struct OddProjection {
    double probability;       // P_O = lambda / (1 + lambda)
    double single_pair_prob;  // P_1^O = 1 - lambda^2
};

OddProjection odd_projection_stats(double lambda);

}  // namespace tmss
