#include <doctest.h>

#include <cmath>
#include <vector>

#include "tmss/kernels.hpp"
#include "tmss/stats.hpp"

using namespace tmss;

TEST_CASE("matvec: serial and OpenMP agree bit for bit")
{
    for (int dim : {1, 7, 64, 301}) {
        CMatrix h(dim, dim);
        CVector v(dim);
        for (int i = 0; i < dim; ++i) {
            v[i] = cd(std::sin(0.1 * i), std::cos(0.37 * i));
            for (int j = 0; j < dim; ++j) h(i, j) = cd(std::sin(i * 0.7 + j), std::cos(j * 1.3 - i));
        }
        CVector a(dim), b(dim);
        kernels::matvec_serial(h, v, a);
        kernels::matvec_omp(h, v, b);
        CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a - h * v).norm() < 1e-10 * (1 + (h * v).norm()));
    }
}

TEST_CASE("wigner grid: serial and OpenMP agree bit for bit")
{
    std::vector<double> pops(40);
    double total = 0;
    for (int n = 0; n < 40; ++n) total += pops[n] = std::pow(0.8, n);
    for (double& p : pops) p /= total;
    std::vector<double> qs, ps;
    for (int i = 0; i < 33; ++i) qs.push_back(-3 + 6.0 * i / 32);
    for (int i = 0; i < 17; ++i) ps.push_back(-2 + 4.0 * i / 16);
    const auto a = kernels::wigner_grid_serial(pops, qs, ps);
    const auto b = kernels::wigner_grid_omp(pops, qs, ps);
    REQUIRE(a.size() == qs.size() * ps.size());
    CHECK(a == b);
    // and the grid agrees with the single-point path
    CHECK(a[5 * ps.size() + 3] == kernels::wigner_fock_sum(pops, qs[5] * qs[5] + ps[3] * ps[3]));
}

TEST_CASE("for_each_index fills every slot")
{
    std::vector<double> a(1000), b(1000);
    auto body = [](std::vector<double>& out) {
        return [&out](std::size_t i) { out[i] = std::sqrt(double(i)) * std::sin(double(i)); };
    };
    kernels::for_each_index_serial(a.size(), body(a));
    kernels::for_each_index_omp(b.size(), body(b));
    CHECK(a == b);
}
