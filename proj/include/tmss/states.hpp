#pragma once

#include <string_view>

#include "tmss/fock_core.hpp"

namespace tmss {

// Squeezing magnitude r >= 0, squeezing angle theta = arg(xi), and relative
// phase phi of the superposition. Angles are wrapped into [0, 2 pi).
class SqueezeParams {
public:
    explicit SqueezeParams(double r, double theta = 0.0, double phi = 0.0);

    double r() const { return r_; }
    double theta() const { return theta_; }
    double phi() const { return phi_; }

    // tanh^2(r)
    double lambda() const;
    // cos(phi)
    double eps() const;

    // psi(-xi) is the same family with theta -> theta + pi.
    SqueezeParams opposite() const { return SqueezeParams(r_, theta_ + kPi, phi_); }

private:
    static constexpr double kPi = 3.14159265358979323846;
    double r_;
    double theta_;
    double phi_;
};

enum class StateFamily {
    TMSS,
    SuperpositionPlus,
    SuperpositionMinus,
    EvenTMSS,
    OddTMSS,
    Thermal,
    ReducedGeneral,
    ReducedEven,
    ReducedOdd,
    SMSS,
};

std::string_view to_string(StateFamily family);

enum class Sign { Plus, Minus };

// Cutoff keeping the truncated tail of every two-mode family (and its reduced
// states) below tail_tol at squeezing r.
FockSpace two_mode_space(double r, double tail_tol = kDefaultTailTol);
// Cutoff for the single-mode squeezed state, whose even populations decay as lambda^{n/2}.
FockSpace smss_space(double r, double tail_tol = kDefaultTailTol);

// sum_n (1/cosh r)(-e^{i theta} tanh r)^n |n, n>, renormalized over the truncation.
StateVector tmss_ket(const SqueezeParams& p, const FockSpace& space);

// exp(xi^* a b - xi a^dagger b^dagger)|0,0> by matrix exponential; ground truth for tmss_ket.
StateVector squeeze_oracle(const SqueezeParams& p, const FockSpace& space);

// N_+-(psi(xi) +- e^{i phi} psi(-xi)), global phase fixed so the first
// nonzero amplitude is real positive.
StateVector superposition_ket(const SqueezeParams& p, Sign sign, const FockSpace& space);

// Closed-form even / odd kets, support on |2n,2n> / |2n+1,2n+1>.
StateVector even_ket(const SqueezeParams& p, const FockSpace& space);
StateVector odd_ket(const SqueezeParams& p, const FockSpace& space);

// Reduced single-mode state of superposition_ket(p, Plus): diagonal with
// P_n = 2(1 - lambda)|N_+|^2 lambda^n [1 + (-1)^n cos phi]. Independent of theta.
DensityMatrix reduced_rho(const SqueezeParams& p, const FockSpace& space);
DensityMatrix thermal_rho(double r, const FockSpace& space);
DensityMatrix rho_even(double r, const FockSpace& space);
DensityMatrix rho_odd(double r, const FockSpace& space);

// exp((r e^{-i theta} a^2 - r e^{i theta} a^dagger^2)/2)|0> by matrix exponential.
StateVector smss_ket(double r, double theta, const FockSpace& space);

// |N_+-|^2 = (1/2)(1 + lambda) / [(1 + lambda) +- eps (1 - lambda)]
double superposition_norm2(double lambda, double eps, Sign sign);

}  // namespace tmss
