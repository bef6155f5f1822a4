#include "tmss/probe.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "tmss/errors.hpp"
#include "tmss/kernels.hpp"
#include "tmss/stats.hpp"

namespace tmss::probe {
namespace {

using Block = Eigen::Matrix2cd;

// exp(-i angle sigma_x) in the (g, e) basis
Block rotation(double angle)
{
    Block u;
    u << std::cos(angle), cd(0.0, -std::sin(angle)), cd(0.0, -std::sin(angle)), std::cos(angle);
    return u;
}

std::vector<Block> exact_blocks(const ProbeParams& params, int dim)
{
    std::vector<Block> blocks(dim);
    for (int n = 0; n < dim; ++n) blocks[n] = rotation(params.Phi() - std::numbers::pi * n / 2.0);
    return blocks;
}

// <e| U_n^dagger sigma_z U_n |e>
double inversion(const Block& u)
{
    const cd g = u(0, 1);
    const cd e = u(1, 1);
    return std::norm(e) - std::norm(g);
}

}  // namespace

double ProbeParams::tau() const { return std::numbers::pi / (Omega * eta_x * eta_x); }

double ProbeParams::Phi() const { return 0.5 * Omega * tau() - 0.25 * std::numbers::pi; }

void ProbeParams::validate() const
{
    if (!(eta_x > 0.0) || !std::isfinite(eta_x)) throw DomainError("probe: eta_x must be positive");
    if (!(Omega > 0.0) || !std::isfinite(Omega)) throw DomainError("probe: Omega must be positive");
}

ProbeParams ProbeParams::parity_readout(double eta_hint, double Omega)
{
    ProbeParams hint{eta_hint, Omega};
    hint.validate();
    const double m = std::max(1.0, std::round(0.5 / (eta_hint * eta_hint) - 0.25));
    return ProbeParams{1.0 / std::sqrt(2.0 * m + 0.5), Omega};
}

Operator carrier_hamiltonian(const ProbeParams& params, const FockSpace& space)
{
    params.validate();
    const int dim = space.dim();
    CMatrix h = CMatrix::Zero(2 * dim, 2 * dim);
    for (int n = 0; n < dim; ++n) {
        const double coupling = 0.5 * params.Omega * (1.0 - params.eta_x * params.eta_x * (n + 0.5));
        h(n, dim + n) = coupling;
        h(dim + n, n) = coupling;
    }
    return Operator(std::move(h), Shape{2, dim});
}

Operator carrier_unitary(const ProbeParams& params, const FockSpace& space, bool exact)
{
    params.validate();
    const int dim = space.dim();
    if (!exact) {
        const Operator h = carrier_hamiltonian(params, space);
        return Operator(expm(cd(0.0, -params.tau()) * h.matrix()), Shape{2, dim});
    }
    const std::vector<Block> blocks = exact_blocks(params, dim);
    CMatrix u = CMatrix::Zero(2 * dim, 2 * dim);
    for (int n = 0; n < dim; ++n)
        for (int q = 0; q < 2; ++q)
            for (int s = 0; s < 2; ++s) u(q * dim + n, s * dim + n) = blocks[n](q, s);
    return Operator(std::move(u), Shape{2, dim});
}

ProbeResult probe(const DensityMatrix& rho, cd alpha, const ProbeParams& params, bool exact, const ShotNoise& noise)
{
    params.validate();
    if (rho.shape().size() != 1) throw ShapeError("probe: expected a single-mode state");
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) throw DomainError("probe: alpha must be finite");

    const std::vector<double> shifted = displaced_populations(rho, alpha);
    const int dim = static_cast<int>(shifted.size());
    const FockSpace space(dim - 1);

    // The pulse preserves n and sigma_z is n-diagonal, so only the displaced
    // populations and the 2x2 block of each level enter.
    std::vector<Block> blocks;
    if (exact) {
        blocks = exact_blocks(params, dim);
    } else {
        const CMatrix u = carrier_unitary(params, space, false).matrix();
        blocks.resize(dim);
        for (int n = 0; n < dim; ++n)
            for (int q = 0; q < 2; ++q)
                for (int s = 0; s < 2; ++s) blocks[n](q, s) = u(q * dim + n, s * dim + n);
    }
    double p_eg = 0.0;
    for (int n = 0; n < dim; ++n) p_eg += shifted[n] * inversion(blocks[n]);

    ProbeResult result{alpha, p_eg, 0.0, std::nullopt};
    if (rho.is_number_diagonal()) {
        result.wigner_ref = wigner_generic(rho, PhasePoint{-alpha.real(), -alpha.imag()});
    } else {
        result.wigner_ref = wigner_parity(rho, -alpha);
    }
    if (noise.shots > 0) {
        std::mt19937_64 rng(noise.seed);
        const double p_up = std::clamp(0.5 * (1.0 + p_eg), 0.0, 1.0);
        std::binomial_distribution<int> draw(noise.shots, p_up);
        result.p_eg_sampled = 2.0 * draw(rng) / noise.shots - 1.0;
    }
    return result;
}

std::vector<ProbeResult> probe_scan(const DensityMatrix& rho, std::span<const cd> alphas, const ProbeParams& params,
                                    bool exact, const ShotNoise& noise)
{
    std::vector<ProbeResult> out(alphas.size());
    kernels::for_each_index(alphas.size(), [&](std::size_t i) {
        // per-point seeds keep sampled scans independent of thread scheduling
        const ShotNoise point_noise{noise.shots, noise.seed + i};
        out[i] = probe(rho, alphas[i], params, exact, point_noise);
    });
    return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw ShapeError("fit_line: need two equally sized series");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("fit_line: abscissae are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i)
        fit.max_residual = std::max(fit.max_residual, std::abs(y[i] - fit.slope * x[i] - fit.intercept));
    return fit;
}

Detection detect_displacement(const DensityMatrix& rho, cd alpha_true, const ProbeParams& params, double threshold)
{
    if (!(threshold > 0.0 && threshold < 1.0)) throw DomainError("detect_displacement: threshold must lie in (0, 1)");
    Detection out;
    out.p_zero = probe(rho, 0.0, params).p_eg;
    out.p_alpha = probe(rho, alpha_true, params).p_eg;
    out.margin = threshold * std::abs(out.p_zero) - std::abs(out.p_alpha);
    out.detected = out.margin > 0.0;
    return out;
}

}  // namespace tmss::probe
