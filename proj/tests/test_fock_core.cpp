#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tmss/diagnostics.hpp"
#include "tmss/errors.hpp"
#include "tmss/fock_core.hpp"
#include "tmss/laguerre.hpp"
#include "tmss/states.hpp"

using namespace tmss;

TEST_CASE("destroy matrix elements")
{
    const Operator a = destroy(FockSpace(5));
    CHECK(a.matrix()(0, 1).real() == doctest::Approx(1.0));
    CHECK(a.matrix()(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    const CVector vac = StateVector::basis({6}, {0}).amplitudes();
    CHECK(a.apply(vac).norm() == 0.0);
    CHECK((create(FockSpace(5)).matrix() - a.matrix().adjoint()).norm() == 0.0);
}

TEST_CASE("tensor products")
{
    const Operator i6 = tensor({identity(2), identity(3)});
    CHECK(i6.dim() == 6);
    CHECK((i6.matrix() - CMatrix::Identity(6, 6)).norm() == 0.0);

    const Operator big = tensor({identity(2), identity(4)});
    CHECK(big.shape() == Shape{2, 4});
    CHECK(big.dim() == 8);

    const FockSpace s(2);
    const Operator a_i = tensor({destroy(s), identity(3)});
    const CVector ket10 = StateVector::basis({3, 3}, {1, 0}).amplitudes();
    const CVector ket00 = StateVector::basis({3, 3}, {0, 0}).amplitudes();
    CHECK((a_i.apply(ket10) - ket00).norm() < 1e-15);
}

TEST_CASE("partial trace")
{
    CVector bell = CVector::Zero(4);
    bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
    const StateVector psi(bell, {2, 2});
    const DensityMatrix ra = partial_trace(psi, 0);
    CHECK(std::abs(ra.matrix()(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(ra.matrix()(1, 1) - 0.5) < 1e-15);
    CHECK(std::abs(ra.matrix()(0, 1)) < 1e-15);

    SUBCASE("tmss r = 1.5 gives a thermal state with <n> = sinh^2 r")
    {
        const FockSpace space = two_mode_space(1.5);
        const DensityMatrix rho = partial_trace(tmss_ket(SqueezeParams(1.5), space), 0);
        const double lambda = std::pow(std::tanh(1.5), 2);
        double mean = 0.0;
        for (int n = 0; n < rho.dim(); ++n) {
            mean += n * rho.matrix()(n, n).real();
            CHECK(std::abs(rho.matrix()(n, n).real() - (1 - lambda) * std::pow(lambda, n)) < 1e-10);
        }
        CHECK(mean == doctest::Approx(std::pow(std::sinh(1.5), 2)).epsilon(1e-9));
        CHECK(std::abs(mean - std::pow(std::sinh(1.5), 2)) < 1e-8);
    }

    SUBCASE("product state")
    {
        CMatrix r1(2, 2);
        r1 << 0.7, cd(0.1, 0.2), cd(0.1, -0.2), 0.3;
        CMatrix r2(3, 3);
        r2.setZero();
        r2.diagonal() << 0.5, 0.3, 0.2;
        const CMatrix prod = tensor({Operator(r1, {2}), Operator(r2, {3})}).matrix();
        const DensityMatrix rho(prod, {2, 3});
        CHECK((partial_trace(rho, 0).matrix() - r1).cwiseAbs().maxCoeff() < 1e-15);
        CHECK((partial_trace(rho, 1).matrix() - r2).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("Schmidt symmetry")
    {
        CVector v(12);
        for (int i = 0; i < 12; ++i) v[i] = cd(std::sin(1.3 * i + 0.2), std::cos(0.7 * i * i));
        const StateVector psi2 = StateVector::normalized(v, {3, 4});
        Eigen::VectorXd ea = Eigen::SelfAdjointEigenSolver<CMatrix>(partial_trace(psi2, 0).matrix()).eigenvalues();
        Eigen::VectorXd eb = Eigen::SelfAdjointEigenSolver<CMatrix>(partial_trace(psi2, 1).matrix()).eigenvalues();
        // b has one extra zero eigenvalue
        CHECK(std::abs(eb[0]) < 1e-10);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(ea[i] - eb[i + 1]) < 1e-10);
    }

    CHECK_THROWS_AS(partial_trace(psi, 2), DomainError);
    CHECK_THROWS_AS(partial_trace(StateVector::basis({3}, {0}), 0), DomainError);
}

TEST_CASE("laguerre recurrence against the explicit sum")
{
    for (int k : {0, 1, 3, 7})
        for (double x : {0.0, 0.3, 2.5, 9.0}) {
            const std::vector<double> seq = assoc_laguerre_sequence(12, k, x);
            for (int n = 0; n <= 12; ++n) {
                const double ref = oracle::laguerre_sum(n, k, x);
                CHECK(std::abs(seq[n] - ref) <= 1e-13 * oracle::laguerre_abs_sum(n, k, x));
            }
        }
    CHECK(laguerre(1, 2.0) == doctest::Approx(-1.0));
    CHECK(log_factorial(200) == doctest::Approx(std::lgamma(201.0)));
}

TEST_CASE("displacement")
{
    const FockSpace space(40);
    SUBCASE("D(0) is the identity exactly")
    {
        const Operator d0 = displacement(0.0, space);
        CHECK((d0.matrix() - CMatrix::Identity(41, 41)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("vacuum amplitude")
    {
        const Operator d = displacement(1.0, space);
        CHECK(std::abs(d.matrix()(0, 0) - std::exp(-0.5)) < 1e-14);
        CHECK(d.matrix()(0, 0).real() == doctest::Approx(0.60653066).epsilon(1e-8));
    }
    SUBCASE("closed form against the power-series exponential")
    {
        for (cd alpha : {cd(1.0, 0.0), cd(0.3, -0.8), cd(-1.2, 1.1), cd(0.0, 2.0)}) {
            const CMatrix ref = oracle::displacement_series(alpha, 25);
            const CMatrix got = displacement(alpha, space).matrix().topLeftCorner(25, 25);
            CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("unitarity at cutoff 40")
    {
        const DisplacementReport rep = displacement_report(0.5, space);
        CHECK(rep.unitarity_defect < 1e-8);
        // columns keep all but 1e-10 of their norm up to n = 26
        CHECK(rep.reliable_dim >= 25);
    }
    SUBCASE("D(alpha) D(-alpha) = I on the reliable block")
    {
        for (cd alpha : {cd(2.0, 0.0), cd(1.2, -1.5), cd(0.0, 0.7)}) {
            const DisplacementReport minus = displacement_report(-alpha, space);
            const CMatrix prod = displacement(alpha, space).matrix() * minus.matrix;
            const int k = minus.reliable_dim;
            CHECK(k >= 8);
            CHECK((prod.topLeftCorner(k, k) - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
    SUBCASE("large cutoffs stay finite")
    {
        const RMatrix d = displacement_real(3.0, 250);
        CHECK(d.allFinite());
        CHECK(std::abs(d(0, 0) - std::exp(-4.5)) < 1e-15);
    }
    SUBCASE("truncation warning")
    {
        int warnings = 0;
        diagnostics::reset();
        diagnostics::set_sink([&](const std::string&, const std::string&) { ++warnings; });
        displacement(cd(4.0, 0.0), FockSpace(10));
        diagnostics::set_sink(nullptr);
        diagnostics::reset();
        CHECK(warnings == 1);
    }
    SUBCASE("padding makes the displacement exact on the support")
    {
        const int m = displaced_cutoff(20, 3.0);
        const RMatrix d = displacement_real(3.0, m + 1);
        for (int n = 0; n <= 20; ++n) CHECK(std::abs(d.col(n).squaredNorm() - 1.0) < 1e-12);
    }
}

TEST_CASE("expm against the Taylor oracle")
{
    CMatrix h(6, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) h(i, j) = cd(std::sin(i + 2.0 * j), std::cos(3.0 * i - j));
    const CMatrix herm = 0.5 * (h + h.adjoint());
    const CMatrix gen = cd(0, -1.3) * herm;
    CHECK((expm(gen) - oracle::taylor_expm(gen)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((expm(h) - oracle::taylor_expm(h)).cwiseAbs().maxCoeff() / oracle::taylor_expm(h).cwiseAbs().maxCoeff() <
          1e-12);

    CVector v = CVector::Zero(6);
    v[2] = 1.0;
    CHECK((expm_multiply(gen, v) - oracle::taylor_expm(gen) * v).norm() < 1e-12);
}

TEST_CASE("expm_multiply restricts to the reachable subspace exactly")
{
    const FockSpace s(8);
    ProductSum gen(Shape{9, 9});
    const Operator a = destroy(s);
    gen.add(0.4, {a, a});
    gen.add(-0.4, {a.adjoint(), a.adjoint()});
    const CVector vac = StateVector::basis({9, 9}, {0, 0}).amplitudes();
    const CVector ref = oracle::taylor_expm(gen.dense().matrix()) * vac;
    CHECK((expm_multiply(gen, vac) - ref).norm() < 1e-13);
}

TEST_CASE("fidelity")
{
    const StateVector zero = StateVector::basis({2}, {0});
    const StateVector one = StateVector::basis({2}, {1});
    CVector plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    CHECK(fidelity(zero, zero) == doctest::Approx(1.0));
    CHECK(fidelity(zero, one) == 0.0);
    CHECK(fidelity(StateVector(plus, {2}), zero) == doctest::Approx(0.5));
    CHECK_THROWS_AS(fidelity(zero, StateVector::basis({3}, {0})), ShapeError);
}

TEST_CASE("constructor invariants")
{
    CVector v = CVector::Ones(3);
    CHECK_THROWS_AS(StateVector(v, {3}), DomainError);
    CHECK_THROWS_AS(StateVector::normalized(CVector::Zero(3), {3}), DomainError);
    CHECK_THROWS_AS(StateVector(CVector::Ones(1), {2}), ShapeError);
    CMatrix m = CMatrix::Identity(2, 2) * 0.5;
    m(0, 1) = 0.2;
    CHECK_THROWS_AS(DensityMatrix(m, {2}), DomainError);
    CHECK_THROWS_AS(FockSpace(0), DomainError);
    CHECK_THROWS_AS(FockSpace(3, 1.5), DomainError);
}
