#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tmss/errors.hpp"
#include "tmss/integrator.hpp"
#include "tmss/states.hpp"

using namespace tmss;

namespace {

HamiltonianMatrix constant(const Operator& h)
{
    return [h](double) { return h; };
}

}  // namespace

TEST_CASE("zero Hamiltonian leaves the state alone")
{
    CVector v(3);
    v << cd(0.6, 0), cd(0, 0.48), cd(0.64, 0);
    const StateVector psi(v, {3});
    EvolveOptions opt;
    opt.dt = 0.1;
    opt.samples = 4;
    const Trajectory traj = evolve(constant(Operator(CMatrix::Zero(3, 3), {3})), psi, 2.0, opt);
    REQUIRE(traj.states.size() == 5);
    for (const CVector& s : traj.states) CHECK((s - v).norm() == 0.0);
}

TEST_CASE("Rabi oscillation")
{
    const Operator h = sigma_x() * cd(0.5);
    const StateVector g = StateVector::basis({2}, {0});
    EvolveOptions opt;
    opt.dt = 1e-3;
    opt.samples = 8;
    const Trajectory traj = evolve(constant(h), g, std::numbers::pi, opt);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double pe = std::norm(traj.states[k][1]);
        CHECK(std::abs(pe - std::pow(std::sin(traj.times[k] / 2), 2)) < 1e-10);
    }
    CHECK(std::norm(traj.states.back()[1]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two-mode coupling from |-,0,0> produces |-> (x) TMSS")
{
    // H = chi sigma_x (a b + a^dagger b^dagger); on |-> this is -chi (ab + a^dagger b^dagger)
    const double chi = 0.2;
    const int n = 14;
    const FockSpace s(n);
    const Operator a = destroy(s);
    const Operator pair = tensor({sigma_x(), a, a}) + tensor({sigma_x(), a.adjoint(), a.adjoint()});
    const Operator h = pair * cd(chi);
    const Shape shape{2, n + 1, n + 1};

    CVector minus = CVector::Zero(shape_dim(shape));
    minus[0] = 1 / std::sqrt(2.0);
    minus[(n + 1) * (n + 1)] = -1 / std::sqrt(2.0);
    const double t = 2.5;  // r = chi t = 0.5
    EvolveOptions opt;
    opt.dt = 1e-3;
    const Trajectory traj = evolve(constant(h), StateVector(minus, shape), t, opt);

    const StateVector tm = tmss_ket(SqueezeParams(chi * t, -std::numbers::pi / 2), s);
    CVector expected(shape_dim(shape));
    expected << tm.amplitudes() / std::sqrt(2.0), -tm.amplitudes() / std::sqrt(2.0);
    const double f = std::norm(expected.dot(traj.states.back()));
    CHECK(f >= 1 - 1e-8);
}

TEST_CASE("time-independent evolution matches the matrix exponential")
{
    const int dim = 7;
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cd(std::cos(i * j + 0.3), std::sin(i - 2.0 * j));
    const CMatrix herm = 0.5 * (m + m.adjoint());
    const Operator h(herm, {dim});
    const double norm = herm.operatorNorm();

    CVector v = CVector::Zero(dim);
    v[0] = 1.0;
    const StateVector psi0(v, {dim});
    const double t = 3.0;
    EvolveOptions opt;
    opt.dt = 1e-2 / norm;
    opt.samples = 3;
    const Trajectory traj = evolve(constant(h), psi0, t, opt);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const CVector ref = oracle::taylor_expm(cd(0, -traj.times[k]) * herm) * v;
        CHECK((traj.states[k] - ref).norm() < 1e-8);
    }
    CHECK(traj.max_norm_drift < 1e-8);
}

TEST_CASE("step halving shows fourth-order convergence")
{
    // driven qubit, H(t) = cos(3 t) sigma_x + 0.4 sigma_z
    HamiltonianMatrix h = [](double t) { return sigma_x() * cd(std::cos(3 * t)) + sigma_z() * cd(0.4); };
    const StateVector g = StateVector::basis({2}, {0});
    auto final_state = [&](double dt) {
        EvolveOptions opt;
        opt.dt = dt;
        return evolve(h, g, 2.0, opt).states.back();
    };
    const CVector ref = final_state(1e-4);
    const double e1 = (final_state(0.02) - ref).norm();
    const double e2 = (final_state(0.01) - ref).norm();
    CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("step count and sample times")
{
    EvolveOptions opt;
    opt.dt = 0.3;
    opt.samples = 4;
    opt.norm_tol = 1e-3;  // coarse steps on purpose
    const Trajectory traj = evolve(constant(identity(2)), StateVector::basis({2}, {0}), 2.0, opt);
    // ceil(2 / (4 * 0.3)) = 2 steps per sample
    CHECK(traj.steps == 8);
    CHECK(traj.step == doctest::Approx(0.25));
    CHECK(traj.times.back() == 2.0);
    opt.dt = 0.15;
    CHECK(evolve(constant(identity(2)), StateVector::basis({2}, {0}), 2.0, opt).steps == 16);
}

TEST_CASE("guards")
{
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    const StateVector g = StateVector::basis({2}, {0});
    EvolveOptions opt;
    CHECK_THROWS_AS(evolve(constant(Operator(m, {2})), g, 1.0, opt), NumericalGuardError);

    // a huge step makes RK4 non-unitary
    opt.dt = 1.0;
    CHECK_THROWS_AS(evolve(constant(sigma_x() * cd(2.0)), g, 4.0, opt), NumericalGuardError);

    opt.dt = 0.0;
    CHECK_THROWS_AS(evolve(constant(sigma_x()), g, 1.0, opt), DomainError);
    opt.dt = 0.1;
    CHECK_THROWS_AS(evolve(constant(identity(3)), g, 1.0, opt), ShapeError);

    SUBCASE("renormalization logs the drift it removes")
    {
        EvolveOptions ren;
        ren.dt = 0.2;
        ren.renormalize = true;
        ren.norm_tol = 1.0;
        const Trajectory traj = evolve(constant(sigma_x()), g, 1.0, ren);
        CHECK(traj.renormalized_drift > 0.0);
        CHECK(std::abs(traj.states.back().norm() - 1.0) < 1e-14);
    }
}
