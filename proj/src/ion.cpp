#include "tmss/ion.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "tmss/diagnostics.hpp"
#include "tmss/errors.hpp"

namespace tmss::ion {
namespace {

cd tone_factor(const IonParams& p, double t)
{
    cd f = 0.0;
    for (Tone tone : p.tones) f += std::polar(0.5 * p.Omega, -p.detuning(tone) * t);
    return f;
}

// D(i eta e^{i omega t}) = R(omega t + pi/2) D(eta) R(omega t + pi/2)^dagger,
// R(phi) = diag(e^{i n phi}), D(eta) real.
//
// A dim_a x dim_b row-major block X is stored as the column-major matrix X^T,
// so (D_a (x) D_b) X = D_a X D_b^T becomes X^T -> D_b X^T D_a^T.
struct FullCoupling {
    IonParams params;
    int dim_a;
    int dim_b;
    RMatrix real_a;
    RMatrix real_b;

    // Work buffers; the action is used by one trajectory at a time.
    mutable CMatrix phase;  // phase(j, i) = e^{i (i phi_a + j phi_b)}
    mutable CVector phase_b;
    mutable CMatrix y, z;

    FullCoupling(const IonParams& p, const IonSpaces& spaces)
        : params(p),
          dim_a(spaces.a.dim()),
          dim_b(spaces.b.dim()),
          real_a(displacement_real(p.eta_x, spaces.a.dim())),
          real_b(displacement_real(p.eta_y, spaces.b.dim())),
          phase(dim_b, dim_a),
          phase_b(dim_b),
          y(dim_b, dim_a),
          z(dim_b, dim_a)
    {
        const auto check = [](const char* mode, double eta, const FockSpace& space) {
            const DisplacementReport report = displacement_report(cd(0.0, eta), space);
            if (2 * report.reliable_dim < space.dim() || report.unitarity_defect > 1e-8) {
                std::ostringstream msg;
                msg << "mode " << mode << " displacement at cutoff " << space.cutoff() << ": "
                    << report.reliable_dim << " reliable columns, defect " << report.unitarity_defect;
                diagnostics::warn("ion-displacement-truncation", msg.str());
            }
        };
        check("a", p.eta_x, spaces.a);
        check("b", p.eta_y, spaces.b);
    }

    void set_phases(double t) const
    {
        const double phi_a = params.omega_x * t + std::numbers::pi / 2.0;
        const double phi_b = params.omega_y * t + std::numbers::pi / 2.0;
        for (int j = 0; j < dim_b; ++j) phase_b[j] = std::polar(1.0, j * phi_b);
        for (int i = 0; i < dim_a; ++i) phase.col(i) = std::polar(1.0, i * phi_a) * phase_b;
    }

    // out = scale * M x (adjoint = false) or scale * M^dagger x (adjoint = true)
    void sandwich(const cd* x, cd* out, cd scale, bool adjoint) const
    {
        const Eigen::Map<const CMatrix> in(x, dim_b, dim_a);
        Eigen::Map<CMatrix> result(out, dim_b, dim_a);
        y = in.cwiseProduct(phase.conjugate());
        if (!adjoint) {
            z.noalias() = real_b * y;
            y.noalias() = z * real_a.transpose();
        } else {
            z.noalias() = real_b.transpose() * y;
            y.noalias() = z * real_a;
        }
        result = scale * y.cwiseProduct(phase);
    }

    void apply(double t, const CVector& psi, CVector& out) const
    {
        const int block = dim_a * dim_b;
        if (out.size() != psi.size()) out.resize(psi.size());
        set_phases(t);
        const cd f = tone_factor(params, t);
        // |e> block <- f M |g> block ; |g> block <- f^* M^dagger |e> block
        sandwich(psi.data(), out.data() + block, f, false);
        sandwich(psi.data() + block, out.data(), std::conj(f), true);
    }
};

// scale (a b + a^dagger b^dagger) on a dim_a x dim_b row-major block, on the
// interleaved real/imaginary parts. weight[i * dim_b + j] = sqrt((i + 1)(j + 1)).
void pair_coupling(const cd* x_c, cd* out_c, int dim_a, int dim_b, const std::vector<double>& weight, double scale)
{
    const double* x = reinterpret_cast<const double*>(x_c);
    double* out = reinterpret_cast<double*>(out_c);
    for (int k = 0; k < 2 * dim_a * dim_b; ++k) out[k] = 0.0;
    for (int i = 0; i + 1 < dim_a; ++i) {
        const double* w = weight.data() + i * dim_b;
        const double* lower = x + 2 * (i * dim_b);
        const double* upper = x + 2 * ((i + 1) * dim_b + 1);
        double* out_lower = out + 2 * (i * dim_b);
        double* out_upper = out + 2 * ((i + 1) * dim_b + 1);
        for (int j = 0; j + 1 < dim_b; ++j) {
            const double c = scale * w[j];
            out_lower[2 * j] += c * upper[2 * j];
            out_lower[2 * j + 1] += c * upper[2 * j + 1];
            out_upper[2 * j] += c * lower[2 * j];
            out_upper[2 * j + 1] += c * lower[2 * j + 1];
        }
    }
}

bool has_both_tones(const IonParams& p)
{
    bool plus = false;
    bool minus = false;
    for (Tone t : p.tones) (t == Tone::Plus ? plus : minus) = true;
    return plus && minus;
}

}  // namespace

double IonParams::detuning(Tone tone) const
{
    return (tone == Tone::Plus ? 1.0 : -1.0) * (omega_x + omega_y);
}

void IonParams::validate() const
{
    if (!(omega_x > 0.0 && omega_y > 0.0)) throw DomainError("ion: mode frequencies must be positive");
    if (!(Omega > 0.0)) throw DomainError("ion: carrier coupling Omega must be positive");
    if (!(eta_x > 0.0 && eta_y > 0.0)) throw DomainError("ion: Lamb-Dicke parameters must be positive");
    if (tones.empty()) throw DomainError("ion: at least one laser tone is required");
}

Operator h_full(double t, const IonParams& p, const IonSpaces& spaces)
{
    if (p.tones.empty()) throw DomainError("h_full: at least one laser tone is required");
    const Operator da = displacement(cd(0.0, p.eta_x) * std::polar(1.0, p.omega_x * t), spaces.a);
    const Operator db = displacement(cd(0.0, p.eta_y) * std::polar(1.0, p.omega_y * t), spaces.b);
    const Operator coupling = tensor({sigma_plus(), da, db}) * tone_factor(p, t);
    return coupling + coupling.adjoint();
}

Operator h_eff(const IonParams& p, const IonSpaces& spaces)
{
    if (!has_both_tones(p)) throw DomainError("h_eff: the effective Hamiltonian needs both detuning tones");
    const Operator a = destroy(spaces.a);
    const Operator b = destroy(spaces.b);
    const Operator pair = tensor({a, b}) + tensor({a.adjoint(), b.adjoint()});
    return tensor({sigma_x(), pair}) * cd(-p.chi());
}

HamiltonianAction full_action(const IonParams& p, const IonSpaces& spaces)
{
    p.validate();
    auto coupling = std::make_shared<FullCoupling>(p, spaces);
    HamiltonianAction action;
    action.apply = [coupling](double t, const CVector& psi, CVector& out) { coupling->apply(t, psi, out); };
    action.dense = [p, spaces](double t) { return h_full(t, p, spaces); };
    return action;
}

HamiltonianAction eff_action(const IonParams& p, const IonSpaces& spaces)
{
    if (!has_both_tones(p)) throw DomainError("h_eff: the effective Hamiltonian needs both detuning tones");
    const int dim_a = spaces.a.dim();
    const int dim_b = spaces.b.dim();
    const double scale = -p.chi();
    HamiltonianAction action;
    std::vector<double> weight(dim_a * dim_b, 0.0);
    for (int i = 0; i < dim_a; ++i)
        for (int j = 0; j < dim_b; ++j) weight[i * dim_b + j] = std::sqrt(static_cast<double>((i + 1) * (j + 1)));
    action.apply = [dim_a, dim_b, scale, weight](double, const CVector& psi, CVector& out) {
        const int block = dim_a * dim_b;
        if (out.size() != psi.size()) out.resize(psi.size());
        // sigma_x swaps the |g> and |e> blocks
        pair_coupling(psi.data() + block, out.data(), dim_a, dim_b, weight, scale);
        pair_coupling(psi.data(), out.data() + block, dim_a, dim_b, weight, scale);
    };
    action.dense = [p, spaces](double) { return h_eff(p, spaces); };
    return action;
}

double default_dt(const IonParams& p) { return 0.01 / std::max(p.omega_x, p.omega_y); }

double mean_phonons(const CVector& psi, const Shape& shape)
{
    if (shape.size() != 3 || shape[0] != 2) throw ShapeError("mean_phonons: expected qubit (x) mode (x) mode");
    const int dim_a = shape[1];
    const int dim_b = shape[2];
    double acc = 0.0;
    for (int q = 0; q < 2; ++q)
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_b; ++j) acc += (i + j) * std::norm(psi[(q * dim_a + i) * dim_b + j]);
    return acc;
}

namespace {

std::pair<double, double> mode_means(const CVector& psi, const Shape& shape)
{
    const int dim_a = shape[1];
    const int dim_b = shape[2];
    double na = 0.0;
    double nb = 0.0;
    for (int q = 0; q < 2; ++q)
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_b; ++j) {
                const double w = std::norm(psi[(q * dim_a + i) * dim_b + j]);
                na += i * w;
                nb += j * w;
            }
    return {na, nb};
}

}  // namespace

double top_population(const CVector& psi, const Shape& shape)
{
    if (shape.size() != 3 || shape[0] != 2) throw ShapeError("top_population: expected qubit (x) mode (x) mode");
    const int dim_a = shape[1];
    const int dim_b = shape[2];
    double acc = 0.0;
    for (int q = 0; q < 2; ++q)
        for (int i = 0; i < dim_a; ++i)
            for (int j = 0; j < dim_b; ++j)
                if (i == dim_a - 1 || j == dim_b - 1) acc += std::norm(psi[(q * dim_a + i) * dim_b + j]);
    return acc;
}

StateVector initial_state(const IonSpaces& spaces)
{
    return StateVector::basis(spaces.shape(), {0, 0, 0});
}

ComparisonTrajectory simulate_comparison(const IonParams& p, const ComparisonOptions& options)
{
    p.validate();
    if (!(options.chi_t_max >= 0.0)) throw DomainError("simulate_comparison: chi_t_max must be >= 0");
    const IonSpaces spaces(options.cutoff);
    const Shape shape = spaces.shape();
    const double t_final = options.chi_t_max / p.chi();

    EvolveOptions evolve_options;
    evolve_options.dt = options.dt > 0.0 ? options.dt : default_dt(p);
    evolve_options.samples = options.samples;
    evolve_options.hermiticity_stride = options.hermiticity_stride;
    evolve_options.backend = options.backend;

    ComparisonTrajectory out;
    evolve_options.observer = [&](double t, const CVector& psi) {
        const double top = top_population(psi, shape);
        out.max_top_population = std::max(out.max_top_population, top);
        if (top > kTopPopulationAbort) {
            std::ostringstream msg;
            msg << "cutoff overflow: top Fock level population " << top << " at t=" << t << " (cutoff "
                << options.cutoff << ")";
            throw NumericalGuardError(msg.str());
        }
        if (top > kTopPopulationWarn) {
            std::ostringstream msg;
            msg << "top Fock level population " << top << " exceeds " << kTopPopulationWarn;
            diagnostics::warn("ion-top-population", msg.str());
        }
        const auto [na, nb] = mode_means(psi, shape);
        out.max_lamb_dicke = std::max({out.max_lamb_dicke, p.eta_x * p.eta_x * (2.0 * na + 1.0),
                                       p.eta_y * p.eta_y * (2.0 * nb + 1.0)});
    };

    const Trajectory full = evolve(full_action(p, spaces), initial_state(spaces), t_final, evolve_options);
    const Trajectory eff = evolve(eff_action(p, spaces), initial_state(spaces), t_final, evolve_options);

    const int block = spaces.a.dim() * spaces.b.dim();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t k = 0; k < full.times.size(); ++k) {
        const CVector& f = full.states[k];
        const CVector& e = eff.states[k];
        out.times.push_back(full.times[k]);
        out.chi_t.push_back(p.chi() * full.times[k]);
        out.fidelity.push_back(std::norm(e.dot(f)));
        out.n_full.push_back(mean_phonons(f, shape));
        out.n_eff.push_back(mean_phonons(e, shape));

        // |+-> = (|g> +- |e>)/sqrt 2
        const CVector f_plus = inv_sqrt2 * (f.head(block) + f.tail(block));
        const CVector f_minus = inv_sqrt2 * (f.head(block) - f.tail(block));
        const CVector e_plus = inv_sqrt2 * (e.head(block) + e.tail(block));
        const CVector e_minus = inv_sqrt2 * (e.head(block) - e.tail(block));
        const double overlap = std::abs(e_plus.dot(f_plus)) + std::abs(e_minus.dot(f_minus));
        out.fidelity_xbasis.push_back(overlap * overlap);
    }
    out.norm_drift_full = full.max_norm_drift;
    out.norm_drift_eff = eff.max_norm_drift;
    out.steps = full.steps;
    out.step = full.step;
    out.final_full = StateVector::normalized(full.states.back(), shape);
    out.final_eff = StateVector::normalized(eff.states.back(), shape);
    return out;
}

Projection project_qubit(const StateVector& psi, Outcome outcome)
{
    const Shape& shape = psi.shape();
    if (shape.size() != 3 || shape[0] != 2) throw ShapeError("project_qubit: expected qubit (x) mode (x) mode");
    const int block = shape[1] * shape[2];
    const CVector part = outcome == Outcome::Ground ? psi.amplitudes().head(block) : psi.amplitudes().tail(block);
    const double probability = part.squaredNorm();
    if (!(probability > 1e-14)) throw DomainError("project_qubit: outcome has zero probability");
    return {StateVector::normalized(part, Shape{shape[1], shape[2]}), probability};
}

}  // namespace tmss::ion
