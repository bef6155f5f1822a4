// Serial reference vs OpenMP kernels, plus the ion RK4 step cost.
//
//   tmss_bench [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <omp.h>

#include "tmss/integrator.hpp"
#include "tmss/ion.hpp"
#include "tmss/kernels.hpp"
#include "tmss/metrology.hpp"
#include "tmss/states.hpp"
#include "tmss/stats.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double best_of(int repeats, const std::function<void()>& body)
{
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = Clock::now();
        body();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

void report(const std::string& name, double serial, double parallel, bool identical)
{
    std::printf("%-28s serial %10.4f ms   omp %10.4f ms   speedup %5.2f   identical %s\n", name.c_str(),
                serial * 1e3, parallel * 1e3, serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv)
{
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
    std::printf("omp threads: %d\n", omp_get_max_threads());

    {
        const tmss::FockSpace space = tmss::two_mode_space(1.5);
        const std::vector<double> pops = tmss::populations(tmss::rho_even(1.5, space));
        std::vector<double> axis(201);
        for (int i = 0; i < 201; ++i) axis[i] = -4.0 + 0.04 * i;
        std::vector<double> a, b;
        const double ts = best_of(repeats, [&] { a = tmss::kernels::wigner_grid_serial(pops, axis, axis); });
        const double tp = best_of(repeats, [&] { b = tmss::kernels::wigner_grid_omp(pops, axis, axis); });
        report("wigner grid 201x201", ts, tp, a == b);
    }
    {
        const int dim = 1922;
        const tmss::CMatrix h = tmss::CMatrix::Random(dim, dim);
        const tmss::CVector v = tmss::CVector::Random(dim);
        tmss::CVector a(dim), b(dim);
        const double ts = best_of(repeats, [&] { tmss::kernels::matvec_serial(h, v, a); });
        const double tp = best_of(repeats, [&] { tmss::kernels::matvec_omp(h, v, b); });
        report("dense matvec 1922", ts, tp, a == b);
    }
    {
        const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
        const std::vector<tmss::StateFamily> families{tmss::StateFamily::ReducedEven, tmss::StateFamily::ReducedOdd};
        std::vector<double> a(grid.size()), b(grid.size());
        const tmss::QfiSweepConfig cfg;
        const auto body = [&](std::vector<double>& out) {
            return [&](std::size_t i) { out[i] = tmss::qfi_family(families[i % 2], grid[i], cfg); };
        };
        const double ts = best_of(repeats, [&] { tmss::kernels::for_each_index_serial(grid.size(), body(a)); });
        const double tp = best_of(repeats, [&] { tmss::kernels::for_each_index_omp(grid.size(), body(b)); });
        report("qfi sweep (5 points)", ts, tp, a == b);
    }
    {
        const tmss::ion::IonParams p;
        const tmss::ion::IonSpaces spaces(30);
        const tmss::HamiltonianAction full = tmss::ion::full_action(p, spaces);
        const tmss::HamiltonianAction eff = tmss::ion::eff_action(p, spaces);
        const tmss::CVector psi = tmss::CVector::Random(2 * 31 * 31).normalized();
        tmss::CVector out(psi.size());
        const int applies = 2000;
        const double tf = best_of(repeats, [&] {
            for (int i = 0; i < applies; ++i) full.apply(0.01 * i, psi, out);
        });
        const double te = best_of(repeats, [&] {
            for (int i = 0; i < applies; ++i) eff.apply(0.01 * i, psi, out);
        });
        const double steps = 1.0 / p.chi() / tmss::ion::default_dt(p);  // RK4 steps to chi t = 1
        std::printf("ion H_full apply (cutoff 30)  %8.2f us   H_eff apply %8.2f us\n", tf / applies * 1e6,
                    te / applies * 1e6);
        std::printf("projected RK4 cost to chi t = 1: full %.1f s, eff %.1f s (%.0f steps)\n",
                    4.0 * steps * tf / applies, 4.0 * steps * te / applies, steps);
    }
    return 0;
}
