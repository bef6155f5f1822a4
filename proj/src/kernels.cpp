#include "tmss/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <omp.h>

#include "tmss/errors.hpp"

namespace tmss::kernels {
namespace {

// out[lo, hi) = H[lo, hi) v, accumulating over columns in ascending order so
// every element sees the same operation sequence whatever the row split.
// Complex products are spelled out on the interleaved real/imaginary parts.
void matvec_rows(const CMatrix& h, const CVector& v, CVector& out, Eigen::Index lo, Eigen::Index hi)
{
    double* o = reinterpret_cast<double*>(out.data());
    for (Eigen::Index i = 2 * lo; i < 2 * hi; ++i) o[i] = 0.0;
    for (Eigen::Index k = 0; k < h.cols(); ++k) {
        const double vr = v[k].real();
        const double vi = v[k].imag();
        const double* col = reinterpret_cast<const double*>(h.data() + k * h.rows());
        for (Eigen::Index i = lo; i < hi; ++i) {
            const double hr = col[2 * i];
            const double hi_ = col[2 * i + 1];
            o[2 * i] += hr * vr - hi_ * vi;
            o[2 * i + 1] += hr * vi + hi_ * vr;
        }
    }
}

void check_matvec(const CMatrix& h, const CVector& v, CVector& out)
{
    if (h.cols() != v.size()) throw ShapeError("matvec size mismatch");
    if (out.size() != h.rows()) out.resize(h.rows());
}

}  // namespace

void matvec_serial(const CMatrix& h, const CVector& v, CVector& out)
{
    check_matvec(h, v, out);
    matvec_rows(h, v, out, 0, h.rows());
}

void matvec_omp(const CMatrix& h, const CVector& v, CVector& out)
{
    check_matvec(h, v, out);
    const Eigen::Index rows = h.rows();
#pragma omp parallel
    {
        const Eigen::Index threads = omp_get_num_threads();
        const Eigen::Index id = omp_get_thread_num();
        const Eigen::Index chunk = (rows + threads - 1) / threads;
        const Eigen::Index lo = std::min(rows, id * chunk);
        matvec_rows(h, v, out, lo, std::min(rows, lo + chunk));
    }
}

void matvec(const CMatrix& h, const CVector& v, CVector& out, Backend backend)
{
    if (backend == Backend::Serial)
        matvec_serial(h, v, out);
    else
        matvec_omp(h, v, out);
}

// Out of line so both grid variants run the identical instruction sequence.
[[gnu::noinline]] double wigner_fock_sum(std::span<const double> populations, double s2)
{
    // L_n(x) by recurrence, accumulated on the fly
    const double x = 4.0 * s2;
    double l_prev = 0.0;
    double l_cur = 1.0;
    double acc = 0.0;
    for (std::size_t n = 0; n < populations.size(); ++n) {
        if (n > 0) {
            const double j = static_cast<double>(n - 1);
            const double l_next = ((2.0 * j + 1.0 - x) * l_cur - j * l_prev) / (j + 1.0);
            l_prev = l_cur;
            l_cur = l_next;
        }
        acc += (n % 2 == 0 ? 1.0 : -1.0) * populations[n] * l_cur;
    }
    return 2.0 / std::numbers::pi * acc * std::exp(-2.0 * s2);
}

std::vector<double> wigner_grid_serial(std::span<const double> populations, std::span<const double> qs,
                                       std::span<const double> ps)
{
    std::vector<double> out(qs.size() * ps.size());
    for (std::size_t i = 0; i < qs.size(); ++i)
        for (std::size_t j = 0; j < ps.size(); ++j)
            out[i * ps.size() + j] = wigner_fock_sum(populations, qs[i] * qs[i] + ps[j] * ps[j]);
    return out;
}

std::vector<double> wigner_grid_omp(std::span<const double> populations, std::span<const double> qs,
                                    std::span<const double> ps)
{
    std::vector<double> out(qs.size() * ps.size());
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(out.size());
    const std::size_t np = ps.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
        const std::size_t i = static_cast<std::size_t>(idx) / np;
        const std::size_t j = static_cast<std::size_t>(idx) % np;
        out[idx] = wigner_fock_sum(populations, qs[i] * qs[i] + ps[j] * ps[j]);
    }
    return out;
}

std::vector<double> wigner_grid(std::span<const double> populations, std::span<const double> qs,
                                std::span<const double> ps, Backend backend)
{
    return backend == Backend::Serial ? wigner_grid_serial(populations, qs, ps)
                                      : wigner_grid_omp(populations, qs, ps);
}

void for_each_index_serial(std::size_t count, const std::function<void(std::size_t)>& body)
{
    for (std::size_t i = 0; i < count; ++i) body(i);
}

void for_each_index_omp(std::size_t count, const std::function<void(std::size_t)>& body)
{
    const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(count);
    // Exceptions may not cross the parallel region; keep the first and rethrow.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < total; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(tmss_for_each_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body, Backend backend)
{
    if (backend == Backend::Serial)
        for_each_index_serial(count, body);
    else
        for_each_index_omp(count, body);
}

}  // namespace tmss::kernels
