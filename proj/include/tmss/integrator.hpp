#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tmss/fock_core.hpp"
#include "tmss/kernels.hpp"

namespace tmss {

// out = H(t) psi. Implementations may exploit structure instead of forming H.
using HamiltonianApply = std::function<void(double t, const CVector& psi, CVector& out)>;

// Dense H(t), used for Hermiticity checks at sample times and by the dense overload.
using HamiltonianMatrix = std::function<Operator(double t)>;

struct HamiltonianAction {
    HamiltonianApply apply;
    HamiltonianMatrix dense;  // optional; enables the Hermiticity guard
};

struct EvolveOptions {
    double dt = 1e-2;
    // Number of recorded intervals; states are stored at t_k = k t_final / samples.
    int samples = 1;
    double norm_tol = 1e-8;
    double hermiticity_tol = 1e-10;
    // Check Hermiticity at every `hermiticity_stride`-th sample (0 disables).
    int hermiticity_stride = 1;
    // Renormalize after every step; the pre-renormalization drift is accumulated.
    bool renormalize = false;
    kernels::Backend backend = kernels::Backend::OpenMP;
    // Called at each sample; may throw to abort the run.
    std::function<void(double t, const CVector& psi)> observer;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CVector> states;
    int steps = 0;
    double step = 0.0;
    // max over the run of | |psi|^2 - 1 | measured before any renormalization
    double max_norm_drift = 0.0;
    // sum of per-step drifts removed by renormalization (0 if renormalize = false)
    double renormalized_drift = 0.0;
};

// Fixed-step classical RK4 for i d/dt psi = H(t) psi.
//
// The step count is samples * ceil(t_final / (samples * dt)); the actual step is
// t_final divided by that count, so halving dt exactly doubles the step count.
// Throws NumericalGuardError on a non-Hermitian sample or norm drift above norm_tol.
Trajectory evolve(const HamiltonianAction& hamiltonian, const StateVector& psi0, double t_final,
                  const EvolveOptions& options);

// Dense overload: H(t) is formed at every stage and applied with kernels::matvec.
Trajectory evolve(const HamiltonianMatrix& hamiltonian, const StateVector& psi0, double t_final,
                  const EvolveOptions& options);

}  // namespace tmss
