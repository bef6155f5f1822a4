#include "tmss/runner/experiments.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "tmss/diagnostics.hpp"
#include "tmss/ion.hpp"
#include "tmss/kernels.hpp"
#include "tmss/metrology.hpp"
#include "tmss/probe.hpp"
#include "tmss/states.hpp"
#include "tmss/stats.hpp"

namespace tmss::runner {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

double r_of_lambda(double lambda)
{
    if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("lambda_r must lie in [0, 1)");
    return std::atanh(std::sqrt(lambda));
}

kernels::Backend backend_of(const Config& cfg)
{
    return cfg.text("backend") == "serial" ? kernels::Backend::Serial : kernels::Backend::OpenMP;
}

std::vector<double> lambda_grid(const Config& cfg)
{
    return linspace(cfg.real("lambda_min"), cfg.real("lambda_max"), cfg.integer("lambda_points"));
}

StateFamily reduced_family(const std::string& name, bool allow_smss)
{
    if (name == "thermal") return StateFamily::Thermal;
    if (name == "even") return StateFamily::ReducedEven;
    if (name == "odd") return StateFamily::ReducedOdd;
    if (allow_smss && name == "smss") return StateFamily::SMSS;
    throw ConfigError("unknown state family '" + name + "'");
}

DensityMatrix reduced_state(StateFamily family, double r, const FockSpace& space)
{
    switch (family) {
    case StateFamily::Thermal: return thermal_rho(r, space);
    case StateFamily::ReducedEven: return rho_even(r, space);
    case StateFamily::ReducedOdd: return rho_odd(r, space);
    default: throw ConfigError("family not available here");
    }
}

std::vector<Table> populations_wigner(const Config& cfg)
{
    const double r = cfg.real("r");
    const double tol = cfg.real("tail_tol");
    const long cutoff = cfg.integer("cutoff");
    const FockSpace space = cutoff > 0 ? FockSpace(static_cast<int>(cutoff), tol) : two_mode_space(r, tol);
    const long n_max = cfg.integer("n_max");
    if (n_max < 0) throw ConfigError("n_max must be >= 0");

    std::vector<std::string> names = cfg.texts("families");
    std::vector<std::vector<double>> pops;
    for (const auto& name : names) pops.push_back(populations(reduced_state(reduced_family(name, false), r, space)));

    Table populations_table{"populations", {"n"}, {}};
    for (const auto& name : names) populations_table.columns.push_back("P_" + name);
    for (long n = 0; n <= n_max; ++n) {
        std::vector<Cell> row{static_cast<double>(n)};
        for (const auto& p : pops) row.emplace_back(n < static_cast<long>(p.size()) ? p[n] : 0.0);
        populations_table.add_row(std::move(row));
    }

    const std::vector<double> axis = linspace(cfg.real("grid_min"), cfg.real("grid_max"), cfg.integer("grid_points"));
    std::vector<std::vector<double>> grids;
    for (const auto& p : pops) grids.push_back(kernels::wigner_grid(p, axis, axis, backend_of(cfg)));
    Table wigner_table{"wigner", {"q", "p"}, {}};
    for (const auto& name : names) wigner_table.columns.push_back("W_" + name);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        for (std::size_t j = 0; j < axis.size(); ++j) {
            std::vector<Cell> row{axis[i], axis[j]};
            for (const auto& g : grids) row.emplace_back(g[i * axis.size() + j]);
            wigner_table.add_row(std::move(row));
        }
    }
    return {populations_table, wigner_table};
}

std::vector<Table> g2_sweep(const Config& cfg)
{
    const std::vector<double> grid = lambda_grid(cfg);
    const double numeric_tol = cfg.real("numeric_tail_tol");
    const StateFamily families[] = {StateFamily::Thermal, StateFamily::ReducedEven, StateFamily::ReducedOdd,
                                    StateFamily::SMSS};
    const auto value = [](std::optional<double> g) { return g ? *g : kNaN; };

    Table closed{"g2_sweep", {"lambda_r", "g2_thermal", "g2_even", "g2_odd", "g2_smss"}, {}};
    for (double lambda : grid) {
        std::vector<Cell> row{lambda};
        for (StateFamily f : families) row.emplace_back(value(g2_closed(f, lambda)));
        closed.add_row(std::move(row));
    }

    // Same quantities from truncated states.
    std::vector<std::array<double, 4>> numeric(grid.size());
    kernels::for_each_index(
        grid.size(),
        [&](std::size_t i) {
            const double r = r_of_lambda(grid[i]);
            const FockSpace space = two_mode_space(r, numeric_tol);
            numeric[i][0] = value(g2_numeric(thermal_rho(r, space)));
            numeric[i][1] = value(g2_numeric(rho_even(r, space)));
            numeric[i][2] = r > 0.0 ? value(g2_numeric(rho_odd(r, space))) : kNaN;
            numeric[i][3] = value(g2_numeric(smss_ket(r, 0.0, smss_space(r, numeric_tol)).to_density()));
        },
        backend_of(cfg));
    Table numeric_table{"g2_numeric", {"lambda_r", "g2_thermal", "g2_even", "g2_odd", "g2_smss"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i)
        numeric_table.add_row({grid[i], numeric[i][0], numeric[i][1], numeric[i][2], numeric[i][3]});

    const G2Thresholds t = g2_thresholds();
    Table thresholds{"g2_thresholds", {"quantity", "lambda_r", "r"}, {}};
    thresholds.add_row({std::string("odd_antibunching_limit"), t.odd_antibunching, r_of_lambda(t.odd_antibunching)});
    thresholds.add_row({std::string("even_above_smss_limit"), t.even_above_smss, r_of_lambda(t.even_above_smss)});
    return {closed, numeric_table, thresholds};
}

std::vector<Table> odd_source(const Config& cfg)
{
    const double tol = cfg.real("tail_tol");
    Table table{"odd_source", {"lambda_r", "p_odd", "p1_odd", "p_odd_numeric", "p1_odd_numeric"}, {}};
    for (double lambda : lambda_grid(cfg)) {
        const OddProjection closed = odd_projection_stats(lambda);
        const double r = r_of_lambda(lambda);
        const FockSpace space = two_mode_space(r, tol);
        // Odd part of the TMSS, i.e. the |e> branch after the effective evolution.
        const StateVector tmss = tmss_ket(SqueezeParams(r), space);
        double p_odd = 0.0;
        for (int n = 1; n < space.dim(); n += 2) p_odd += std::norm(tmss.amplitudes()[n * space.dim() + n]);
        double p1 = kNaN;
        if (r > 0.0) p1 = std::norm(odd_ket(SqueezeParams(r), space).amplitudes()[space.dim() + 1]);
        table.add_row({lambda, closed.probability, closed.single_pair_prob, p_odd, p1});
    }
    return {table};
}

std::vector<Table> entanglement_map(const Config& cfg)
{
    const std::vector<double> lambdas = lambda_grid(cfg);
    const std::vector<double> phis = linspace(0.0, 2.0 * kPi, cfg.integer("phi_points"));
    Table map{"entanglement_map", {"phi", "lambda_r", "e_phi", "e_tmss", "excess"}, {}};
    for (double phi : phis) {
        for (double lambda : lambdas) {
            double e = kNaN;
            try {
                e = e_phi(lambda, std::cos(phi));
            } catch (const DomainError&) {
                // phi = pi at lambda = 0: both branches cancel
            }
            map.add_row({phi, lambda, e, e_tmss(lambda), e - e_tmss(lambda)});
        }
    }
    Table boundary{"entanglement_boundary", {"lambda_r", "phi_a", "phi_b", "phi_c", "phi_d"}, {}};
    const long count = cfg.integer("boundary_points");
    for (double lambda : linspace(0.0, std::min(cfg.real("lambda_max"), 0.999), count)) {
        const auto eps = entanglement_boundary_eps(lambda);
        const double zero = std::acos(eps[0]);
        const double inner = std::acos(eps[1]);
        boundary.add_row({lambda, zero, inner, 2.0 * kPi - inner, 2.0 * kPi - zero});
    }
    return {map, boundary};
}

std::vector<Table> entanglement_slice(const Config& cfg)
{
    const double beta = cfg.real("beta");
    const double phi = kPi + beta;
    Table slice{"entanglement_slice", {"lambda_r", "e_phi", "e_tmss", "e_even_odd"}, {}};
    for (double lambda : lambda_grid(cfg)) {
        double e = kNaN;
        try {
            e = e_phi(lambda, std::cos(phi));
        } catch (const DomainError&) {
        }
        slice.add_row({lambda, e, e_tmss(lambda), e_even_odd(lambda)});
    }

    const std::string r_text = cfg.text("r");
    double r = 0.5 * std::abs(beta);
    if (r_text != "auto") {
        try {
            r = std::stod(r_text);
        } catch (const std::exception&) {
            throw ConfigError("key 'r': expected a number or auto, got '" + r_text + "'");
        }
    }
    const double tol = cfg.real("tail_tol");
    const FockSpace space = two_mode_space(r, tol);
    const SqueezeParams params(r, cfg.real("theta"), phi);
    const std::vector<double> cat = populations(reduced_rho(params, space));
    const std::vector<double> tmss = populations(thermal_rho(r, space));
    const double e_numeric = entanglement_numeric(superposition_ket(params, Sign::Plus, space));
    Table pops{"slice_populations", {"n", "p_cat", "p_tmss"}, {}};
    for (long n = 0; n <= cfg.integer("n_max"); ++n) {
        const auto at = [n](const std::vector<double>& v) { return n < static_cast<long>(v.size()) ? v[n] : 0.0; };
        pops.add_row({static_cast<double>(n), at(cat), at(tmss)});
    }
    Table point{"slice_point", {"r", "lambda_r", "phi", "e_phi", "e_phi_numeric", "e_tmss"}, {}};
    const double lambda = params.lambda();
    point.add_row({r, lambda, phi, e_phi(lambda, params.eps()), e_numeric, e_tmss(lambda)});
    return {slice, pops, point};
}

std::vector<Table> qfi_sweep_tables(const Config& cfg)
{
    std::vector<StateFamily> families;
    std::vector<std::string> names = cfg.texts("families");
    for (const auto& name : names) families.push_back(reduced_family(name, true));
    QfiSweepConfig sweep;
    sweep.tail_tol = cfg.real("tail_tol");
    sweep.direction = cfg.real("direction");
    sweep.smss_angles = cfg.reals("smss_angles");
    if (sweep.smss_angles.empty()) throw ConfigError("smss_angles must not be empty");

    const std::vector<double> grid = lambda_grid(cfg);
    const std::vector<QfiCurve> curves = qfi_sweep(families, QfiAbscissa::Lambda, grid, sweep);

    Table by_lambda{"qfi_lambda", {"lambda_r"}, {}};
    for (const auto& name : names) by_lambda.columns.push_back("qfi_" + name);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{grid[i]};
        for (const auto& curve : curves) row.emplace_back(curve.samples[i].qfi);
        by_lambda.add_row(std::move(row));
    }
    Table by_n{"qfi_mean_n", {"family", "lambda_r", "mean_n", "qfi"}, {}};
    for (std::size_t c = 0; c < curves.size(); ++c)
        for (const auto& s : curves[c].samples)
            by_n.add_row({names[c], s.lambda, mean_n_closed(families[c], s.lambda), s.qfi});
    return {by_lambda, by_n};
}

std::vector<Table> ion_sim(const Config& cfg)
{
    ion::IonParams p;
    p.omega_x = cfg.real("omega_x");
    p.omega_y = cfg.real("omega_y");
    p.Omega = cfg.real("Omega");
    p.eta_x = cfg.real("eta_x");
    p.eta_y = cfg.real("eta_y");
    p.tones.clear();
    for (const auto& tone : cfg.texts("tones")) {
        if (tone == "plus")
            p.tones.push_back(ion::Tone::Plus);
        else if (tone == "minus")
            p.tones.push_back(ion::Tone::Minus);
        else
            throw ConfigError("unknown tone '" + tone + "' (plus or minus)");
    }
    ion::ComparisonOptions options;
    options.cutoff = static_cast<int>(cfg.integer("cutoff"));
    options.chi_t_max = cfg.real("chi_t_max");
    options.samples = static_cast<int>(cfg.integer("samples"));
    options.dt = cfg.real("dt");
    options.backend = backend_of(cfg);
    if (options.cutoff < 1) throw ConfigError("cutoff must be >= 1");
    if (options.samples < 1) throw ConfigError("samples must be >= 1");
    if (options.dt < 0.0) throw ConfigError("dt must be >= 0");

    const ion::ComparisonTrajectory traj = ion::simulate_comparison(p, options);
    Table table{"ion_sim", {"chi_t", "fidelity", "n_full", "n_eff", "fidelity_xbasis", "t"}, {}};
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        table.add_row({traj.chi_t[k], traj.fidelity[k], traj.n_full[k], traj.n_eff[k], traj.fidelity_xbasis[k],
                       traj.times[k]});
    Table diag{"ion_diagnostics", {"quantity", "value"}, {}};
    diag.add_row({std::string("chi"), p.chi()});
    diag.add_row({std::string("steps"), static_cast<double>(traj.steps)});
    diag.add_row({std::string("step"), traj.step});
    diag.add_row({std::string("max_top_population"), traj.max_top_population});
    diag.add_row({std::string("max_lamb_dicke"), traj.max_lamb_dicke});
    diag.add_row({std::string("norm_drift_full"), traj.norm_drift_full});
    diag.add_row({std::string("norm_drift_eff"), traj.norm_drift_eff});
    return {table, diag};
}

std::vector<Table> probe_scan_tables(const Config& cfg)
{
    const double r = cfg.real("r");
    const double tol = cfg.real("tail_tol");
    const probe::ProbeParams params = probe::ProbeParams::parity_readout(cfg.real("eta_x"), cfg.real("Omega"));
    const double threshold = cfg.real("threshold");
    if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must lie in (0, 1)");
    const long shots = cfg.integer("shots");
    if (shots < 0) throw ConfigError("shots must be >= 0");
    const std::vector<double> radii = linspace(0.0, cfg.real("alpha_max"), cfg.integer("alpha_points"));
    const double phase = cfg.real("alpha_phase");
    std::vector<cd> alphas;
    for (double a : radii) alphas.push_back(std::polar(a, phase));

    const FockSpace space = two_mode_space(r, tol);
    std::vector<std::string> names = cfg.texts("families");
    Table scan{"probe_scan", {"abs_alpha"}, {}};
    Table summary{"probe_summary",
                  {"family", "eta_x", "tau", "slope", "intercept", "max_residual", "p_eg_at_zero", "detection_radius"},
                  {}};
    std::vector<std::vector<probe::ProbeResult>> results;
    for (std::size_t f = 0; f < names.size(); ++f) {
        const DensityMatrix rho = reduced_state(reduced_family(names[f], false), r, space);
        const probe::ShotNoise noise{static_cast<int>(shots), cfg.seed() + 1000003ULL * f};
        results.push_back(probe::probe_scan(rho, alphas, params, true, noise));
        scan.columns.push_back("p_eg_" + names[f]);
        scan.columns.push_back("wigner_" + names[f]);
        if (shots > 0) scan.columns.push_back("p_eg_sampled_" + names[f]);

        std::vector<double> x, y;
        for (const auto& res : results.back()) {
            x.push_back(res.wigner_ref);
            y.push_back(res.p_eg);
        }
        const probe::LinearFit fit = probe::fit_line(x, y);
        const double p0 = probe::probe(rho, 0.0, params).p_eg;
        double radius = kNaN;
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (std::abs(y[i]) < threshold * std::abs(p0)) {
                radius = radii[i];
                break;
            }
        }
        summary.add_row({names[f], params.eta_x, params.tau(), fit.slope, fit.intercept, fit.max_residual, p0, radius});
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        std::vector<Cell> row{radii[i]};
        for (const auto& res : results) {
            row.emplace_back(res[i].p_eg);
            row.emplace_back(res[i].wigner_ref);
            if (shots > 0) row.emplace_back(*res[i].p_eg_sampled);
        }
        scan.add_row(std::move(row));
    }
    return {scan, summary};
}

}  // namespace

std::vector<Table> run_experiment(const Config& config)
{
    static const std::map<std::string, std::function<std::vector<Table>(const Config&)>> experiments{
        {"populations-wigner", populations_wigner}, {"g2-sweep", g2_sweep},
        {"odd-source", odd_source},                 {"entanglement-map", entanglement_map},
        {"entanglement-slice", entanglement_slice}, {"qfi-sweep", qfi_sweep_tables},
        {"ion-sim", ion_sim},                       {"probe-scan", probe_scan_tables},
    };
    const auto it = experiments.find(config.experiment());
    if (it == experiments.end()) throw ConfigError("unknown experiment '" + config.experiment() + "'");
    return it->second(config);
}

RunSummary run_and_write(const Config& config)
{
    const Format format = parse_format(config.text("format"));
    const int warnings_before = diagnostics::warning_count();
    const std::vector<Table> tables = run_experiment(config);

    const std::filesystem::path dir = config.text("out");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());

    RunSummary summary;
    for (const auto& table : tables) summary.files.push_back(write_table(table, dir, format));
    summary.warnings = diagnostics::warning_count() - warnings_before;
    write_manifest(dir, config, summary.files, summary.warnings);
    return summary;
}

}  // namespace tmss::runner
