#pragma once

#include <vector>

#include "tmss/fock_core.hpp"
#include "tmss/integrator.hpp"

namespace tmss::ion {

// Detuning of one laser tone: Delta = +(omega_x + omega_y) or -(omega_x + omega_y).
enum class Tone { Plus, Minus };

// Frequencies in units of omega_x; time in units of 1/omega_x.
struct IonParams {
    double omega_x = 1.0;
    double omega_y = 1.2;
    double Omega = 0.05;
    double eta_x = 0.1;
    double eta_y = 0.1;
    std::vector<Tone> tones{Tone::Plus, Tone::Minus};

    // chi = eta_x eta_y Omega / 2
    double chi() const { return 0.5 * eta_x * eta_y * Omega; }
    double detuning(Tone tone) const;
    void validate() const;
};

struct IonSpaces {
    FockSpace a;
    FockSpace b;

    explicit IonSpaces(int cutoff) : a(cutoff), b(cutoff) {}
    IonSpaces(FockSpace mode_a, FockSpace mode_b) : a(mode_a), b(mode_b) {}

    Shape shape() const { return Shape{2, a.dim(), b.dim()}; }
};

// Full two-colour coupling at time t:
//   sum_tones (Omega/2) e^{-i Delta t} D_a(i eta_x e^{i omega_x t}) D_b(i eta_y e^{i omega_y t}) sigma+ + h.c.
Operator h_full(double t, const IonParams& p, const IonSpaces& spaces);

// -chi sigma_x (a b + a^dagger b^dagger); requires both tones.
Operator h_eff(const IonParams& p, const IonSpaces& spaces);

// Structured actions for the integrator. h_full's action rotates cached real
// displacement templates by diagonal phases instead of rebuilding D(t).
HamiltonianAction full_action(const IonParams& p, const IonSpaces& spaces);
HamiltonianAction eff_action(const IonParams& p, const IonSpaces& spaces);

struct ComparisonOptions {
    int cutoff = 30;
    double chi_t_max = 1.0;
    int samples = 100;
    // 0 selects the default 0.01 / max(omega_x, omega_y)
    double dt = 0.0;
    // Dense Hermiticity check of h_full every n-th sample (0 disables).
    int hermiticity_stride = 10;
    kernels::Backend backend = kernels::Backend::OpenMP;
};

struct ComparisonTrajectory {
    std::vector<double> times;
    std::vector<double> chi_t;
    // |<psi_eff(t)|psi_full(t)>|^2 on the full qubit (x) mode (x) mode space
    std::vector<double> fidelity;
    // (sum over the sigma_x sectors s of |<s, psi_eff|s, psi_full>|)^2: the fidelity
    // maximized over a relative phase between the two sectors
    std::vector<double> fidelity_xbasis;
    std::vector<double> n_full;
    std::vector<double> n_eff;
    // largest population on |n_a = N> or |n_b = N> seen at the samples
    double max_top_population = 0.0;
    // max of eta_i^2 (2 <n_i> + 1) over samples, Lamb-Dicke feasibility
    double max_lamb_dicke = 0.0;
    double norm_drift_full = 0.0;
    double norm_drift_eff = 0.0;
    int steps = 0;
    double step = 0.0;
    StateVector final_full{CVector::Ones(1), Shape{1}};
    StateVector final_eff{CVector::Ones(1), Shape{1}};
};

inline constexpr double kTopPopulationWarn = 1e-6;
inline constexpr double kTopPopulationAbort = 1e-4;

// Integrates h_full and h_eff from |g>|0,0> up to t = chi_t_max / chi.
// Throws NumericalGuardError if the top Fock level population exceeds 1e-4.
ComparisonTrajectory simulate_comparison(const IonParams& p, const ComparisonOptions& options);

double default_dt(const IonParams& p);

// <a^dagger a + b^dagger b> of a qubit (x) mode (x) mode state.
double mean_phonons(const CVector& psi, const Shape& shape);
double top_population(const CVector& psi, const Shape& shape);

enum class Outcome { Ground, Excited };

struct Projection {
    StateVector state;  // two-mode motional state
    double probability;
};

// Projects the qubit onto |g> or |e>; throws DomainError for a zero-probability outcome.
Projection project_qubit(const StateVector& psi, Outcome outcome);

// |g>|0,0>
StateVector initial_state(const IonSpaces& spaces);

}  // namespace tmss::ion
