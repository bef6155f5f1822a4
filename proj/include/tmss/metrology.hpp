#pragma once

#include <vector>

#include "tmss/fock_core.hpp"
#include "tmss/states.hpp"

namespace tmss {

// Quadrature X(angle) = a e^{-i angle} + a^dagger e^{i angle}.
// A displacement along direction phi_d is generated by X(phi_d + pi/2).
class Generator {
public:
    Generator(double angle, const FockSpace& space);

    static Generator for_displacement(double direction, const FockSpace& space);

    double angle() const { return angle_; }
    const Operator& op() const { return op_; }

private:
    double angle_;
    Operator op_;
};

inline constexpr double kQfiEigenFloor = 1e-12;

// 4 (<G^2> - <G>^2)
double qfi_pure(const StateVector& psi, const Generator& g);

// 2 sum_{ij} (l_i - l_j)^2 / (l_i + l_j) |<i|G|j>|^2 over the spectrum of rho,
// skipping pairs with l_i + l_j below `floor`.
double qfi_mixed(const DensityMatrix& rho, const Generator& g, double floor = kQfiEigenFloor);

enum class QfiAbscissa { Lambda, MeanN };

struct QfiSample {
    double lambda;
    double x;  // lambda or the family's own <n>
    double qfi;
};

struct QfiCurve {
    QfiAbscissa abscissa = QfiAbscissa::Lambda;
    StateFamily family = StateFamily::Thermal;
    // SMSS only: squeezing angles averaged over (a single angle means no averaging)
    std::vector<double> smss_angles;
    std::vector<QfiSample> samples;
};

struct QfiSweepConfig {
    double tail_tol = kDefaultTailTol;
    // Displacement direction estimated; the generator is X(direction + pi/2).
    double direction = 0.0;
    // Squeezing angles for the averaged SMSS curve; {0} gives the aligned (best) case.
    std::vector<double> smss_angles{0.0};
};

// Families: Thermal, ReducedEven, ReducedOdd (spectral QFI of the reduced state) and
// SMSS (pure-state QFI averaged over config.smss_angles). Grid values are lambda in [0, 0.95].
std::vector<QfiCurve> qfi_sweep(const std::vector<StateFamily>& families, QfiAbscissa abscissa,
                                const std::vector<double>& lambda_grid, const QfiSweepConfig& config = {});

// QFI of a single family at one lambda (used by the sweep).
double qfi_family(StateFamily family, double lambda, const QfiSweepConfig& config);

}  // namespace tmss
