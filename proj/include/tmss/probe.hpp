#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tmss/fock_core.hpp"

namespace tmss::probe {

// Carrier pulse of duration tau with Omega eta^2 tau / 2 = pi/2 and
// Phi = Omega tau / 2 - pi/4.
struct ProbeParams {
    double eta_x = 0.1;
    double Omega = 0.05;

    double tau() const;
    double Phi() const;
    void validate() const;

    // Nearest eta with Phi a multiple of pi, i.e. 1/eta^2 = 2m + 1/2, so that the
    // inversion reads out the parity with unit contrast. At eta = 0.1 itself
    // cos(2 Phi) vanishes and the signal is identically zero.
    static ProbeParams parity_readout(double eta_hint, double Omega);
};

struct ProbeResult {
    cd alpha;
    double p_eg;        // <sigma_z> after the pulse
    double wigner_ref;  // Wigner function of the undisplaced state at -alpha
    std::optional<double> p_eg_sampled;
};

// H_c = (Omega/2)[1 - eta^2 (a^dagger a + 1/2)] sigma_x on qubit (x) mode.
Operator carrier_hamiltonian(const ProbeParams& params, const FockSpace& space);

// exact = true: per-level phase map exp(-i (Phi - pi n / 2) sigma_x).
// exact = false: exp(-i H_c tau) by matrix exponential.
Operator carrier_unitary(const ProbeParams& params, const FockSpace& space, bool exact);

struct ShotNoise {
    int shots = 0;  // 0 disables sampling
    std::uint64_t seed = 0;
};

// Displaces rho by D(alpha), applies the carrier pulse with the qubit in |e>,
// and returns <sigma_z>. The state is embedded in a larger space first so the
// displacement stays unitary on its support.
ProbeResult probe(const DensityMatrix& rho, cd alpha, const ProbeParams& params, bool exact = true,
                  const ShotNoise& noise = {});

std::vector<ProbeResult> probe_scan(const DensityMatrix& rho, std::span<const cd> alphas, const ProbeParams& params,
                                    bool exact = true, const ShotNoise& noise = {});

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};

// Least squares y = slope x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct Detection {
    bool detected = false;
    // threshold |P(0)| - |P(alpha)|; positive when detected
    double margin = 0.0;
    double p_zero = 0.0;
    double p_alpha = 0.0;
};

inline constexpr double kDefaultThreshold = 0.5;

// Detected when |P_eg(alpha)| < threshold |P_eg(0)|.
Detection detect_displacement(const DensityMatrix& rho, cd alpha_true, const ProbeParams& params,
                              double threshold = kDefaultThreshold);

}  // namespace tmss::probe
