#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tmss/errors.hpp"
#include "tmss/ion.hpp"
#include "tmss/states.hpp"

using namespace tmss;
using namespace tmss::ion;

namespace {

constexpr double pi = std::numbers::pi;

int index(const IonSpaces& s, int q, int na, int nb) { return (q * s.a.dim() + na) * s.b.dim() + nb; }

// (|g> -+ |e>)/sqrt2 (x) |0,0>
StateVector x_state(const IonSpaces& s, double sign)
{
    CVector v = CVector::Zero(shape_dim(s.shape()));
    v[index(s, 0, 0, 0)] = 1 / std::sqrt(2.0);
    v[index(s, 1, 0, 0)] = sign / std::sqrt(2.0);
    return StateVector(v, s.shape());
}

// Hadamard on the qubit: rows |+>, |->
CMatrix to_x_basis(const CMatrix& h, int motional_dim)
{
    CMatrix u = CMatrix::Zero(h.rows(), h.cols());
    const double s = 1 / std::sqrt(2.0);
    for (int k = 0; k < motional_dim; ++k) {
        u(k, k) = s;
        u(k, motional_dim + k) = s;
        u(motional_dim + k, k) = s;
        u(motional_dim + k, motional_dim + k) = -s;
    }
    return u * h * u.adjoint();
}

}  // namespace

TEST_CASE("IonParams")
{
    IonParams p;
    CHECK(p.chi() == doctest::Approx(2.5e-4));
    CHECK(p.detuning(Tone::Plus) == doctest::Approx(2.2));
    CHECK(p.detuning(Tone::Minus) == doctest::Approx(-2.2));
    p.tones.clear();
    CHECK_THROWS_AS(p.validate(), DomainError);
    CHECK(default_dt(IonParams{}) == doctest::Approx(0.01 / 1.2));
}

TEST_CASE("h_full")
{
    const IonSpaces s(6);
    IonParams p;

    SUBCASE("Hermitian at sample times")
    {
        for (double t : {0.0, 1.0, 10.0}) CHECK(h_full(t, p, s).hermiticity_defect() < 1e-10);
    }
    SUBCASE("carrier element at t = 0")
    {
        IonParams one = p;
        one.tones = {Tone::Plus};
        const cd el = h_full(0.0, one, s).matrix()(index(s, 1, 0, 0), index(s, 0, 0, 0));
        const double expect = 0.5 * p.Omega * std::exp(-p.eta_x * p.eta_x / 2) * std::exp(-p.eta_y * p.eta_y / 2);
        CHECK(std::abs(el - expect) < 1e-15);
        const cd both = h_full(0.0, p, s).matrix()(index(s, 1, 0, 0), index(s, 0, 0, 0));
        CHECK(std::abs(both - 2 * expect) < 1e-15);
    }
    SUBCASE("vanishing Lamb-Dicke parameters leave the bare qubit drive")
    {
        IonParams q = p;
        q.eta_x = q.eta_y = 1e-12;
        q.tones = {Tone::Plus};
        const double t = 0.37;
        const CMatrix h = h_full(t, q, s).matrix();
        const Operator ref = tensor({sigma_plus() * (0.5 * q.Omega * std::polar(1.0, -q.detuning(Tone::Plus) * t)),
                                     identity(s.a.dim()), identity(s.b.dim())});
        const CMatrix full_ref = ref.matrix() + ref.matrix().adjoint();
        CHECK((h - full_ref).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("structured action equals the dense operator")
    {
        const HamiltonianAction act = full_action(p, s);
        CVector v(shape_dim(s.shape()));
        for (int i = 0; i < v.size(); ++i) v[i] = cd(std::sin(0.3 * i + 1), std::cos(1.7 * i));
        v.normalize();
        CVector out(v.size());
        for (double t : {0.0, 0.41, 17.3, 1234.5}) {
            act.apply(t, v, out);
            CHECK((out - h_full(t, p, s).matrix() * v).cwiseAbs().maxCoeff() < 1e-14);
        }
        IonParams one = p;
        one.tones = {Tone::Minus};
        full_action(one, s).apply(2.0, v, out);
        CHECK((out - h_full(2.0, one, s).matrix() * v).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("h_eff")
{
    const IonSpaces s(6);
    const IonParams p;
    const CMatrix h = h_eff(p, s).matrix();
    CHECK(h_eff(p, s).hermiticity_defect() == 0.0);

    // sigma_x flips the qubit: |g,0,0> couples to |e,1,1> with strength chi
    CHECK(std::abs(h(index(s, 1, 1, 1), index(s, 0, 0, 0))) == doctest::Approx(2.5e-4));
    CHECK(std::abs(h(index(s, 0, 1, 1), index(s, 0, 0, 0))) == 0.0);

    const int m = s.a.dim() * s.b.dim();
    const CMatrix hx = to_x_basis(h, m);
    CHECK(hx.topRightCorner(m, m).cwiseAbs().maxCoeff() < 1e-18);
    CHECK(hx.bottomLeftCorner(m, m).cwiseAbs().maxCoeff() < 1e-18);
    // <+,1,1|H|+,0,0> = -chi and <-,1,1|H|-,0,0> = +chi
    CHECK(hx(s.b.dim() + 1, 0).real() == doctest::Approx(-2.5e-4));
    CHECK(hx(m + s.b.dim() + 1, m).real() == doctest::Approx(2.5e-4));

    CVector v(shape_dim(s.shape()));
    for (int i = 0; i < v.size(); ++i) v[i] = cd(std::cos(0.2 * i), std::sin(0.9 * i + 0.5));
    CVector out(v.size());
    eff_action(p, s).apply(3.0, v, out);
    CHECK((out - h * v).cwiseAbs().maxCoeff() < 1e-18);

    IonParams one = p;
    one.tones = {Tone::Plus};
    CHECK_THROWS_AS(h_eff(one, s), DomainError);
}

TEST_CASE("effective evolution from |-,0,0> is a TMSS")
{
    const IonSpaces s(16);
    IonParams p;
    p.Omega = 4.0;  // chi = 0.02, only the effective coupling is evolved
    const double r = 0.5;
    EvolveOptions opt;
    opt.dt = 0.05;
    const Trajectory traj = evolve(eff_action(p, s), x_state(s, -1), r / p.chi(), opt);
    const StateVector tm = tmss_ket(SqueezeParams(r, pi / 2), s.a);
    const int m = s.a.dim() * s.b.dim();
    CVector expected(2 * m);
    expected << tm.amplitudes() / std::sqrt(2.0), -tm.amplitudes() / std::sqrt(2.0);
    CHECK(std::norm(expected.dot(traj.states.back())) >= 1 - 1e-8);
}

TEST_CASE("project_qubit")
{
    const IonSpaces s(5);
    const Projection g = project_qubit(initial_state(s), Outcome::Ground);
    CHECK(g.probability == 1.0);
    CHECK(std::norm(g.state.amplitudes()[0]) == 1.0);
    CHECK(g.state.shape() == Shape{6, 6});
    CHECK_THROWS_AS(project_qubit(initial_state(s), Outcome::Excited), DomainError);

    const Projection e = project_qubit(x_state(s, 1), Outcome::Excited);
    CHECK(e.probability == doctest::Approx(0.5));
}

TEST_CASE("comparison at strong coupling, short horizon")
{
    IonParams p;
    p.eta_x = p.eta_y = 0.3;
    ComparisonOptions opt;
    opt.cutoff = 10;
    opt.chi_t_max = 0.5;
    opt.samples = 5;
    const ComparisonTrajectory tr = simulate_comparison(p, opt);
    REQUIRE(tr.fidelity.size() == 6);
    CHECK(tr.fidelity[0] == doctest::Approx(1.0));
    CHECK(tr.n_full[0] == 0.0);
    CHECK(tr.n_eff[0] == 0.0);
    for (double f : tr.fidelity) CHECK(f >= 0.9);
    for (std::size_t k = 0; k < tr.fidelity.size(); ++k) CHECK(tr.fidelity_xbasis[k] >= tr.fidelity[k] - 1e-12);
    CHECK(tr.n_eff.back() == doctest::Approx(2 * std::pow(std::sinh(0.5), 2)).epsilon(1e-6));
    CHECK(tr.norm_drift_full < 1e-8);
    CHECK(tr.norm_drift_eff < 1e-8);
    CHECK(tr.max_top_population < kTopPopulationWarn);

    SUBCASE("cutoff overflow aborts")
    {
        ComparisonOptions tight = opt;
        tight.cutoff = 2;
        CHECK_THROWS_AS(simulate_comparison(p, tight), NumericalGuardError);
    }
}

TEST_CASE("one tone only: no squeezing")
{
    // With a single tone the resonant term is sigma+ a^dagger b^dagger + h.c., a Rabi
    // oscillation between |g,0,0> and |e,1,1>: the phonon number stays bounded by 2
    // instead of growing as 2 sinh^2(chi t).
    IonParams p;
    p.eta_x = p.eta_y = 0.3;
    p.tones = {Tone::Plus};
    const IonSpaces s(8);
    EvolveOptions opt;
    opt.dt = default_dt(p);
    opt.samples = 4;
    opt.hermiticity_stride = 0;
    const double t = 1.0 / p.chi();
    const Trajectory traj = evolve(full_action(p, s), initial_state(s), t, opt);
    double n_max = 0;
    for (const CVector& psi : traj.states) n_max = std::max(n_max, mean_phonons(psi, s.shape()));
    CHECK(n_max <= 2.0);
    CHECK(mean_phonons(traj.states.back(), s.shape()) < 2 * std::pow(std::sinh(1.0), 2) - 0.5);

    const StateVector fin = StateVector::normalized(traj.states.back(), s.shape());
    const Projection g = project_qubit(fin, Outcome::Ground);
    CHECK(std::norm(g.state.amplitudes()[0]) > 0.99);
}
