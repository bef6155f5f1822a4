#include "tmss/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tmss/errors.hpp"
#include "tmss/kernels.hpp"
#include "tmss/stats.hpp"

namespace tmss {
namespace {

Operator quadrature(double angle, const FockSpace& space)
{
    const Operator a = destroy(space);
    return a * std::polar(1.0, -angle) + a.adjoint() * std::polar(1.0, angle);
}

double r_from_lambda(double lambda) { return std::atanh(std::sqrt(lambda)); }

}  // namespace

Generator::Generator(double angle, const FockSpace& space) : angle_(angle), op_(quadrature(angle, space)) {}

Generator Generator::for_displacement(double direction, const FockSpace& space)
{
    return Generator(direction + std::numbers::pi / 2.0, space);
}

double qfi_pure(const StateVector& psi, const Generator& g)
{
    if (psi.shape() != g.op().shape()) throw ShapeError("qfi_pure: generator/state shape mismatch");
    const CVector gpsi = g.op().apply(psi.amplitudes());
    const double mean = psi.amplitudes().dot(gpsi).real();
    const double second = gpsi.squaredNorm();
    return 4.0 * (second - mean * mean);
}

double qfi_mixed(const DensityMatrix& rho, const Generator& g, double floor)
{
    if (rho.shape() != g.op().shape()) throw ShapeError("qfi_mixed: generator/state shape mismatch");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho.matrix());
    if (solver.info() != Eigen::Success) throw NumericalGuardError("qfi_mixed: eigen-decomposition failed");
    const Eigen::VectorXd& l = solver.eigenvalues();
    const CMatrix& v = solver.eigenvectors();
    const CMatrix gij = v.adjoint() * g.op().matrix() * v;
    double acc = 0.0;
    for (Eigen::Index j = 0; j < l.size(); ++j) {
        for (Eigen::Index i = 0; i < l.size(); ++i) {
            const double sum = l[i] + l[j];
            if (sum < floor) continue;
            const double diff = l[i] - l[j];
            acc += diff * diff / sum * std::norm(gij(i, j));
        }
    }
    return 2.0 * acc;
}

double qfi_family(StateFamily family, double lambda, const QfiSweepConfig& config)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("qfi_family: lambda must lie in [0, 1)");
    const double r = r_from_lambda(lambda);
    switch (family) {
    case StateFamily::Thermal:
    case StateFamily::ReducedEven:
    case StateFamily::ReducedOdd: {
        const FockSpace space = two_mode_space(r, config.tail_tol);
        const Generator g = Generator::for_displacement(config.direction, space);
        if (family == StateFamily::Thermal) return qfi_mixed(thermal_rho(r, space), g);
        if (family == StateFamily::ReducedEven) return qfi_mixed(rho_even(r, space), g);
        if (lambda == 0.0) {
            // odd reduced state tends to |1><1|; X^2 on |1> needs level 2 in the space
            const FockSpace padded(std::max(space.cutoff(), 2));
            return qfi_pure(StateVector::basis(Shape{padded.dim()}, {1}),
                            Generator::for_displacement(config.direction, padded));
        }
        return qfi_mixed(rho_odd(r, space), g);
    }
    case StateFamily::SMSS: {
        if (config.smss_angles.empty()) throw DomainError("qfi_family: no SMSS angles configured");
        const FockSpace space = smss_space(r, config.tail_tol);
        const Generator g = Generator::for_displacement(config.direction, space);
        double acc = 0.0;
        for (double theta : config.smss_angles) acc += qfi_pure(smss_ket(r, theta, space), g);
        return acc / static_cast<double>(config.smss_angles.size());
    }
    default: throw DomainError("qfi_family: unsupported family");
    }
}

std::vector<QfiCurve> qfi_sweep(const std::vector<StateFamily>& families, QfiAbscissa abscissa,
                                const std::vector<double>& lambda_grid, const QfiSweepConfig& config)
{
    for (double lambda : lambda_grid)
        if (!(lambda >= 0.0 && lambda <= 0.95)) throw DomainError("qfi_sweep: lambda grid must lie in [0, 0.95]");

    std::vector<QfiCurve> curves(families.size());
    for (std::size_t f = 0; f < families.size(); ++f) {
        curves[f].abscissa = abscissa;
        curves[f].family = families[f];
        if (families[f] == StateFamily::SMSS) curves[f].smss_angles = config.smss_angles;
        curves[f].samples.resize(lambda_grid.size());
    }
    const std::size_t count = families.size() * lambda_grid.size();
    kernels::for_each_index(count, [&](std::size_t idx) {
        const std::size_t f = idx / lambda_grid.size();
        const std::size_t k = idx % lambda_grid.size();
        const double lambda = lambda_grid[k];
        QfiSample& s = curves[f].samples[k];
        s.lambda = lambda;
        s.x = abscissa == QfiAbscissa::Lambda ? lambda : mean_n_closed(families[f], lambda);
        s.qfi = qfi_family(families[f], lambda, config);
    });
    return curves;
}

}  // namespace tmss
