#include "tmss/integrator.hpp"

#include <cmath>
#include <sstream>

#include "tmss/diagnostics.hpp"
#include "tmss/errors.hpp"

namespace tmss {
namespace {

void check_hermitian(const HamiltonianAction& h, double t, const Shape& shape, double tol)
{
    const Operator op = h.dense(t);
    if (op.shape() != shape) throw ShapeError("Hamiltonian shape does not match the state");
    const double defect = op.hermiticity_defect();
    if (defect > tol) {
        std::ostringstream msg;
        msg << "non-Hermitian Hamiltonian at t=" << t << " (defect " << defect << ")";
        throw NumericalGuardError(msg.str());
    }
}

}  // namespace

Trajectory evolve(const HamiltonianAction& hamiltonian, const StateVector& psi0, double t_final,
                  const EvolveOptions& options)
{
    if (!hamiltonian.apply) throw DomainError("evolve: Hamiltonian action is empty");
    if (!(options.dt > 0.0)) throw DomainError("evolve: dt must be positive");
    if (!(t_final >= 0.0)) throw DomainError("evolve: t_final must be non-negative");
    if (options.samples < 1) throw DomainError("evolve: need at least one sample");

    const int samples = options.samples;
    const long per_sample =
        t_final == 0.0 ? 0 : static_cast<long>(std::ceil(t_final / (samples * options.dt) - 1e-12));
    const long total_steps = per_sample * samples;
    const double h = total_steps == 0 ? 0.0 : t_final / static_cast<double>(total_steps);

    Trajectory traj;
    traj.steps = static_cast<int>(total_steps);
    traj.step = h;
    traj.times.reserve(samples + 1);
    traj.states.reserve(samples + 1);

    CVector psi = psi0.amplitudes();
    const int dim = static_cast<int>(psi.size());
    CVector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    const cd minus_i(0.0, -1.0);

    auto record = [&](int k) {
        const double t = t_final * static_cast<double>(k) / samples;
        if (hamiltonian.dense && options.hermiticity_stride > 0 && k % options.hermiticity_stride == 0)
            check_hermitian(hamiltonian, t, psi0.shape(), options.hermiticity_tol);
        traj.times.push_back(t);
        traj.states.push_back(psi);
        if (options.observer) options.observer(t, psi);
    };

    record(0);
    long step = 0;
    for (int k = 1; k <= samples; ++k) {
        for (long s = 0; s < per_sample; ++s, ++step) {
            const double t = h * static_cast<double>(step);
            hamiltonian.apply(t, psi, k1);
            k1 *= minus_i;
            tmp = psi + (0.5 * h) * k1;
            hamiltonian.apply(t + 0.5 * h, tmp, k2);
            k2 *= minus_i;
            tmp = psi + (0.5 * h) * k2;
            hamiltonian.apply(t + 0.5 * h, tmp, k3);
            k3 *= minus_i;
            tmp = psi + h * k3;
            hamiltonian.apply(t + h, tmp, k4);
            k4 *= minus_i;
            psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

            const double drift = std::abs(psi.squaredNorm() - 1.0);
            if (drift > traj.max_norm_drift) traj.max_norm_drift = drift;
            if (options.renormalize) {
                traj.renormalized_drift += drift;
                psi.normalize();
            }
        }
        record(k);
    }

    const double drift = options.renormalize ? traj.renormalized_drift : traj.max_norm_drift;
    if (drift > options.norm_tol) {
        std::ostringstream msg;
        msg << "norm drift " << drift << " exceeds " << options.norm_tol;
        throw NumericalGuardError(msg.str());
    }
    return traj;
}

Trajectory evolve(const HamiltonianMatrix& hamiltonian, const StateVector& psi0, double t_final,
                  const EvolveOptions& options)
{
    const kernels::Backend backend = options.backend;
    HamiltonianAction action;
    action.dense = hamiltonian;
    action.apply = [&hamiltonian, backend](double t, const CVector& psi, CVector& out) {
        kernels::matvec(hamiltonian(t).matrix(), psi, out, backend);
    };
    return evolve(action, psi0, t_final, options);
}

}  // namespace tmss
