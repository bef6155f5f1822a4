#include "tmss/stats.hpp"

#include <cmath>
#include <numbers>

#include "tmss/errors.hpp"
#include "tmss/kernels.hpp"

namespace tmss {
namespace {

void require_single_mode(const DensityMatrix& rho, const char* what)
{
    if (rho.shape().size() != 1) throw ShapeError(std::string(what) + ": expected a single-mode state");
}

}  // namespace

std::vector<double> populations(const DensityMatrix& rho)
{
    require_single_mode(rho, "populations");
    std::vector<double> out(rho.dim());
    for (int n = 0; n < rho.dim(); ++n) out[n] = rho.matrix()(n, n).real();
    return out;
}

double mean_n(const DensityMatrix& rho)
{
    require_single_mode(rho, "mean_n");
    double acc = 0.0;
    for (int n = 0; n < rho.dim(); ++n) acc += n * rho.matrix()(n, n).real();
    return acc;
}

std::optional<double> g2_numeric(const DensityMatrix& rho)
{
    require_single_mode(rho, "g2_numeric");
    // a^dagger a and a^dagger^2 a^2 are diagonal in the Fock basis
    double n1 = 0.0;
    double n2 = 0.0;
    for (int n = 0; n < rho.dim(); ++n) {
        const double p = rho.matrix()(n, n).real();
        n1 += n * p;
        n2 += n * (n - 1.0) * p;
    }
    if (!(n1 > 1e-300)) return std::nullopt;
    return n2 / (n1 * n1);
}

std::optional<double> g2_closed(StateFamily family, double lambda)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("g2_closed: lambda must lie in [0, 1)");
    const double l2 = lambda * lambda;
    switch (family) {
    case StateFamily::Thermal:
        if (lambda == 0.0) return std::nullopt;
        return 2.0;
    case StateFamily::ReducedEven:
        if (lambda == 0.0) return std::nullopt;
        return 2.0 + (1.0 - l2) / (2.0 * l2);
    case StateFamily::ReducedOdd:
        return 2.0 - 2.0 * (1.0 - l2) / ((1.0 + l2) * (1.0 + l2));
    case StateFamily::SMSS:
        if (lambda == 0.0) return std::nullopt;
        return 2.0 + 1.0 / lambda;
    default:
        throw DomainError("g2_closed: no closed form for this family");
    }
}

double mean_n_closed(StateFamily family, double lambda)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("mean_n_closed: lambda must lie in [0, 1)");
    const double l2 = lambda * lambda;
    switch (family) {
    case StateFamily::Thermal:
    case StateFamily::SMSS: return lambda / (1.0 - lambda);
    case StateFamily::ReducedEven: return 2.0 * l2 / (1.0 - l2);
    case StateFamily::ReducedOdd: return 1.0 + 2.0 * l2 / (1.0 - l2);
    default: throw DomainError("mean_n_closed: no closed form for this family");
    }
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol)
{
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) throw DomainError("bisect_root: no sign change on the bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

G2Thresholds g2_thresholds()
{
    G2Thresholds out;
    out.odd_antibunching =
        bisect_root([](double l) { return *g2_closed(StateFamily::ReducedOdd, l) - 1.0; }, 1e-6, 0.99);
    out.even_above_smss = bisect_root(
        [](double l) { return *g2_closed(StateFamily::ReducedEven, l) - *g2_closed(StateFamily::SMSS, l); }, 1e-6,
        0.99);
    return out;
}

StatsReport stats_report(const DensityMatrix& rho)
{
    StatsReport report;
    report.populations = populations(rho);
    report.mean_n = mean_n(rho);
    report.g2 = g2_numeric(rho);
    report.purity = rho.purity();
    return report;
}

double wigner_generic(const DensityMatrix& rho, const PhasePoint& pt)
{
    const std::vector<double> pops = populations(rho);
    return kernels::wigner_fock_sum(pops, pt.s2());
}

double wigner_closed(StateFamily family, double lambda, const PhasePoint& pt)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("wigner_closed: lambda must lie in [0, 1)");
    const double s2 = pt.s2();
    const double narrow = (1.0 - lambda) / (1.0 + lambda);
    const double broad = std::exp(-2.0 * narrow * s2);
    switch (family) {
    case StateFamily::Thermal: return 2.0 / std::numbers::pi * narrow * broad;
    case StateFamily::ReducedEven:
        return ((1.0 - lambda) * broad + (1.0 + lambda) * std::exp(-2.0 * s2 / narrow)) / std::numbers::pi;
    case StateFamily::ReducedOdd:
        if (!(lambda > 0.0)) throw DomainError("wigner_closed: odd state undefined at lambda = 0");
        return ((1.0 - lambda) * broad - (1.0 + lambda) * std::exp(-2.0 * s2 / narrow)) /
               (std::numbers::pi * lambda);
    default: throw DomainError("wigner_closed: no closed form for this family");
    }
}

std::vector<double> displaced_populations(const DensityMatrix& rho, cd alpha)
{
    require_single_mode(rho, "displaced_populations");
    const FockSpace space(displaced_cutoff(rho.dim() - 1, std::abs(alpha)));
    const CMatrix d = displacement(alpha, space).matrix().leftCols(rho.dim());
    std::vector<double> out(space.dim());
    if (rho.is_number_diagonal()) {
        const Eigen::VectorXd pops = rho.matrix().diagonal().real();
        const Eigen::VectorXd shifted = d.cwiseAbs2() * pops;
        for (int n = 0; n < space.dim(); ++n) out[n] = shifted[n];
    } else {
        const CMatrix shifted = d * rho.matrix() * d.adjoint();
        for (int n = 0; n < space.dim(); ++n) out[n] = shifted(n, n).real();
    }
    return out;
}

double wigner_parity(const DensityMatrix& rho, cd alpha)
{
    const std::vector<double> shifted = displaced_populations(rho, -alpha);
    double parity = 0.0;
    for (std::size_t n = 0; n < shifted.size(); ++n) parity += (n % 2 == 0 ? 1.0 : -1.0) * shifted[n];
    return 2.0 / std::numbers::pi * parity;
}

double entanglement_numeric(const StateVector& psi)
{
    if (psi.shape().size() != 2) throw ShapeError("entanglement_numeric: expected a two-mode state");
    return 1.0 - partial_trace(psi, 0).purity();
}

double entanglement_numeric(const DensityMatrix& rho)
{
    if (rho.shape().size() != 2) throw ShapeError("entanglement_numeric: expected a two-mode state");
    if (std::abs(rho.purity() - 1.0) > 1e-10)
        throw DomainError("entanglement_numeric: linear entropy is an entanglement measure only for pure states");
    return 1.0 - partial_trace(rho, 0).purity();
}

double e_tmss(double lambda) { return 1.0 - (1.0 - lambda) / (1.0 + lambda); }

double e_phi(double lambda, double eps)
{
    const double l2 = lambda * lambda;
    const double up = (1.0 + eps) * (1.0 + eps) + l2 * (1.0 - eps) * (1.0 - eps);
    const double down = (1.0 + eps) + lambda * (1.0 - eps);
    if (!(down > 0.0)) throw DomainError("e_phi: degenerate superposition");
    return 1.0 - (1.0 - l2) / (1.0 + l2) * up / (down * down);
}

double e_even_odd(double lambda)
{
    const double l2 = lambda * lambda;
    return 1.0 - (1.0 - l2) / (1.0 + l2);
}

std::array<double, 2> entanglement_boundary_eps(double lambda)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("entanglement_boundary_eps: lambda must lie in [0, 1)");
    const double l2 = lambda * lambda;
    return {0.0, -(1.0 - l2) / (1.0 + l2)};
}

OddProjection odd_projection_stats(double lambda)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("odd_projection_stats: lambda must lie in [0, 1)");
    return {lambda / (1.0 + lambda), 1.0 - lambda * lambda};
}

}  // namespace tmss
