#include "tmss/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "tmss/errors.hpp"
#include "tmss/laguerre.hpp"

namespace tmss {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a)
{
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

int pair_index(int n, int dim) { return n * dim + n; }

void check_tail(double discarded, const FockSpace& space, const char* what)
{
    // 1 - sum(kept) carries absolute rounding error of a few ulp of 1
    if (discarded > space.tail_tol() + 1e-14) {
        std::ostringstream msg;
        msg << what << ": cutoff " << space.cutoff() << " discards " << discarded << " > tail_tol "
            << space.tail_tol();
        throw TruncationError(msg.str());
    }
}

// Infinite-space TMSS coefficients (1/cosh r)(-e^{i theta} tanh r)^n, n = 0..cutoff.
std::vector<cd> tmss_coefficients(const SqueezeParams& p, int cutoff)
{
    std::vector<cd> c(cutoff + 1);
    const cd ratio = -std::polar(std::tanh(p.r()), p.theta());
    c[0] = 1.0 / std::cosh(p.r());
    for (int n = 1; n <= cutoff; ++n) c[n] = c[n - 1] * ratio;
    return c;
}

// Puts the first non-negligible amplitude on the positive real axis.
void fix_global_phase(CVector& v)
{
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-8 * scale) {
            v *= std::conj(v[i]) / std::abs(v[i]);
            return;
        }
    }
}

DensityMatrix diagonal_state(std::vector<double> populations, const FockSpace& space, const char* what)
{
    double kept = 0.0;
    for (double p : populations) kept += p;
    const double discarded = std::max(0.0, 1.0 - kept);
    check_tail(discarded, space, what);
    return DensityMatrix::diagonal(populations, discarded);
}

}  // namespace

SqueezeParams::SqueezeParams(double r, double theta, double phi)
    : r_(r), theta_(wrap_angle(theta)), phi_(wrap_angle(phi))
{
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("squeezing magnitude r must be finite and >= 0");
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw DomainError("angles must be finite");
}

double SqueezeParams::lambda() const
{
    const double t = std::tanh(r_);
    return t * t;
}

double SqueezeParams::eps() const { return std::cos(phi_); }

std::string_view to_string(StateFamily family)
{
    switch (family) {
    case StateFamily::TMSS: return "tmss";
    case StateFamily::SuperpositionPlus: return "superposition_plus";
    case StateFamily::SuperpositionMinus: return "superposition_minus";
    case StateFamily::EvenTMSS: return "even_tmss";
    case StateFamily::OddTMSS: return "odd_tmss";
    case StateFamily::Thermal: return "thermal";
    case StateFamily::ReducedGeneral: return "reduced_general";
    case StateFamily::ReducedEven: return "even";
    case StateFamily::ReducedOdd: return "odd";
    case StateFamily::SMSS: return "smss";
    }
    return "unknown";
}

FockSpace two_mode_space(double r, double tail_tol)
{
    const double lambda = SqueezeParams(r).lambda();
    int cutoff = FockSpace::for_geometric_tail(lambda, tail_tol).cutoff();
    // Every superposition is a mixture of the even and odd branches; the odd
    // branch loses lambda^{2 ceil(N/2)}, which can exceed the TMSS tail.
    while (std::pow(lambda, 2 * ((cutoff + 1) / 2)) >= tail_tol) ++cutoff;
    return FockSpace(cutoff, tail_tol);
}

FockSpace smss_space(double r, double tail_tol)
{
    const double lambda = SqueezeParams(r).lambda();
    if (lambda == 0.0) return FockSpace(2, tail_tol);
    // P_{2n} <= lambda^n / cosh r, so the tail above N is at most lambda^m / ((1 - lambda) cosh r)
    // with m = floor(N/2) + 1.
    int cutoff = 2;
    while (std::pow(lambda, cutoff / 2 + 1) / ((1.0 - lambda) * std::cosh(r)) >= tail_tol) cutoff += 2;
    return FockSpace(cutoff, tail_tol);
}

double superposition_norm2(double lambda, double eps, Sign sign)
{
    const double s = sign == Sign::Plus ? 1.0 : -1.0;
    const double denom = (1.0 + lambda) + s * eps * (1.0 - lambda);
    if (!(denom > 1e-15)) throw DomainError("degenerate superposition: the two squeezed branches cancel exactly");
    return 0.5 * (1.0 + lambda) / denom;
}

StateVector tmss_ket(const SqueezeParams& p, const FockSpace& space)
{
    const int dim = space.dim();
    const double discarded = std::pow(p.lambda(), dim);  // sum_{n>N} (1-lambda) lambda^n
    check_tail(discarded, space, "tmss_ket");
    const std::vector<cd> c = tmss_coefficients(p, space.cutoff());
    CVector amps = CVector::Zero(dim * dim);
    for (int n = 0; n < dim; ++n) amps[pair_index(n, dim)] = c[n];
    return StateVector::normalized(std::move(amps), Shape{dim, dim}, discarded);
}

StateVector squeeze_oracle(const SqueezeParams& p, const FockSpace& space)
{
    const int dim = space.dim();
    check_tail(std::pow(p.lambda(), dim), space, "squeeze_oracle");
    const cd xi = std::polar(p.r(), p.theta());
    const Operator a = destroy(space);
    const Operator ad = create(space);
    ProductSum generator(Shape{dim, dim});
    generator.add(std::conj(xi), {a, a});
    generator.add(-xi, {ad, ad});
    const CVector vacuum = StateVector::basis(Shape{dim, dim}, {0, 0}).amplitudes();
    return StateVector::normalized(expm_multiply(generator, vacuum), Shape{dim, dim});
}

StateVector superposition_ket(const SqueezeParams& p, Sign sign, const FockSpace& space)
{
    const int dim = space.dim();
    const double lambda = p.lambda();
    const double eps = p.eps();
    const double norm2 = superposition_norm2(lambda, eps, sign);

    // psi(-xi) has coefficients (-1)^n c_n
    const std::vector<cd> c = tmss_coefficients(p, space.cutoff());
    const cd rel = (sign == Sign::Plus ? 1.0 : -1.0) * std::polar(1.0, p.phi());
    CVector amps = CVector::Zero(dim * dim);
    double kept = 0.0;
    for (int n = 0; n < dim; ++n) {
        const cd amp = c[n] * (1.0 + (n % 2 == 0 ? rel : -rel));
        amps[pair_index(n, dim)] = amp;
        kept += norm2 * std::norm(amp);
    }
    const double discarded = std::max(0.0, 1.0 - kept);
    check_tail(discarded, space, "superposition_ket");
    if (!(amps.norm() > 1e-14)) throw DomainError("degenerate superposition: zero vector");
    fix_global_phase(amps);
    return StateVector::normalized(std::move(amps), Shape{dim, dim}, discarded);
}

StateVector even_ket(const SqueezeParams& p, const FockSpace& space)
{
    const int dim = space.dim();
    const double lambda = p.lambda();
    // tail: sum_{2n > N} (1 - lambda^2) lambda^{2n} = lambda^{2m}, m = floor(N/2) + 1
    const double discarded = std::pow(lambda, 2 * (space.cutoff() / 2 + 1));
    check_tail(discarded, space, "even_ket");
    const cd ratio = -std::sqrt(lambda) * std::polar(1.0, p.theta());
    const cd ratio2 = ratio * ratio;
    CVector amps = CVector::Zero(dim * dim);
    cd c = std::sqrt(1.0 - lambda * lambda);
    for (int n = 0; 2 * n < dim; ++n) {
        amps[pair_index(2 * n, dim)] = c;
        c *= ratio2;
    }
    return StateVector::normalized(std::move(amps), Shape{dim, dim}, discarded);
}

StateVector odd_ket(const SqueezeParams& p, const FockSpace& space)
{
    if (!(p.r() > 0.0)) throw DomainError("odd TMSS is undefined at r = 0");
    const int dim = space.dim();
    const double lambda = p.lambda();
    const double discarded = std::pow(lambda, 2 * ((space.cutoff() + 1) / 2));
    check_tail(discarded, space, "odd_ket");
    const cd ratio = -std::sqrt(lambda) * std::polar(1.0, p.theta());
    const cd ratio2 = ratio * ratio;
    CVector amps = CVector::Zero(dim * dim);
    cd c = std::sqrt((1.0 - lambda * lambda) / lambda) * ratio;
    for (int n = 0; 2 * n + 1 < dim; ++n) {
        amps[pair_index(2 * n + 1, dim)] = c;
        c *= ratio2;
    }
    return StateVector::normalized(std::move(amps), Shape{dim, dim}, discarded);
}

DensityMatrix reduced_rho(const SqueezeParams& p, const FockSpace& space)
{
    const double lambda = p.lambda();
    const double eps = p.eps();
    const double pref = 2.0 * (1.0 - lambda) * superposition_norm2(lambda, eps, Sign::Plus);
    std::vector<double> pops(space.dim());
    double power = 1.0;
    for (int n = 0; n < space.dim(); ++n) {
        pops[n] = pref * power * (1.0 + (n % 2 == 0 ? eps : -eps));
        power *= lambda;
    }
    return diagonal_state(std::move(pops), space, "reduced_rho");
}

DensityMatrix thermal_rho(double r, const FockSpace& space)
{
    const double lambda = SqueezeParams(r).lambda();
    std::vector<double> pops(space.dim());
    double power = 1.0;
    for (int n = 0; n < space.dim(); ++n) {
        pops[n] = (1.0 - lambda) * power;
        power *= lambda;
    }
    return diagonal_state(std::move(pops), space, "thermal_rho");
}

DensityMatrix rho_even(double r, const FockSpace& space)
{
    const double lambda = SqueezeParams(r).lambda();
    std::vector<double> pops(space.dim(), 0.0);
    double power = 1.0;
    for (int n = 0; 2 * n < space.dim(); ++n) {
        pops[2 * n] = (1.0 - lambda * lambda) * power;
        power *= lambda * lambda;
    }
    return diagonal_state(std::move(pops), space, "rho_even");
}

DensityMatrix rho_odd(double r, const FockSpace& space)
{
    if (!(r > 0.0)) throw DomainError("odd reduced state is undefined at r = 0");
    const double lambda = SqueezeParams(r).lambda();
    std::vector<double> pops(space.dim(), 0.0);
    double power = 1.0;
    for (int n = 0; 2 * n + 1 < space.dim(); ++n) {
        pops[2 * n + 1] = (1.0 - lambda * lambda) * power;
        power *= lambda * lambda;
    }
    return diagonal_state(std::move(pops), space, "rho_odd");
}

StateVector smss_ket(double r, double theta, const FockSpace& space)
{
    if (!(r >= 0.0)) throw DomainError("squeezing magnitude r must be >= 0");
    const int dim = space.dim();
    const double lambda = SqueezeParams(r).lambda();

    // Analytic tail for reporting: P_{2n} = (2n)!/(4^n n!^2) lambda^n / cosh r
    double kept = 0.0;
    for (int n = 0; 2 * n < dim; ++n) {
        const double log_binom = log_factorial(2 * n) - 2.0 * log_factorial(n) - 2.0 * n * std::log(2.0);
        kept += std::exp(log_binom) * std::pow(lambda, n) / std::cosh(r);
    }
    const double discarded = std::max(0.0, 1.0 - kept);
    check_tail(discarded, space, "smss_ket");

    const Operator a = destroy(space);
    const Operator a2 = a * a;
    const CMatrix generator =
        0.5 * (std::polar(r, -theta) * a2.matrix() - std::polar(r, theta) * a2.adjoint().matrix());
    CVector vacuum = CVector::Zero(dim);
    vacuum[0] = 1.0;
    return StateVector::normalized(expm_multiply(generator, vacuum), Shape{dim}, discarded);
}

}  // namespace tmss
