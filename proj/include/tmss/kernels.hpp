#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tmss/fock_core.hpp"

// Data-parallel inner loops. Every kernel has a serial reference and an
// OpenMP variant; both compute each output element with the same operation
// order, so their results are bit-identical and independent of scheduling.
namespace tmss::kernels {

enum class Backend { Serial, OpenMP };

// out = H v for a dense matrix, row by row.
void matvec_serial(const CMatrix& h, const CVector& v, CVector& out);
void matvec_omp(const CMatrix& h, const CVector& v, CVector& out);
void matvec(const CMatrix& h, const CVector& v, CVector& out, Backend backend = Backend::OpenMP);

// Number-diagonal Wigner function on a (q, p) grid:
//   W(q, p) = sum_n P_n (2/pi) (-1)^n L_n(4 s^2) e^{-2 s^2},  s^2 = q^2 + p^2.
// Result is row-major: out[i * ps.size() + j] = W(qs[i], ps[j]).
std::vector<double> wigner_grid_serial(std::span<const double> populations, std::span<const double> qs,
                                       std::span<const double> ps);
std::vector<double> wigner_grid_omp(std::span<const double> populations, std::span<const double> qs,
                                    std::span<const double> ps);
std::vector<double> wigner_grid(std::span<const double> populations, std::span<const double> qs,
                                std::span<const double> ps, Backend backend = Backend::OpenMP);

// Single-point Laguerre sum shared by both grid variants.
double wigner_fock_sum(std::span<const double> populations, double s2);

// Runs body(i) for i in [0, count). Bodies must only write to slot i of
// their outputs.
void for_each_index_serial(std::size_t count, const std::function<void(std::size_t)>& body);
void for_each_index_omp(std::size_t count, const std::function<void(std::size_t)>& body);
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& body,
                    Backend backend = Backend::OpenMP);

}  // namespace tmss::kernels
