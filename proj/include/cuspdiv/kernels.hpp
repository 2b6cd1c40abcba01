#ifndef CUSPDIV_KERNELS_HPP
#define CUSPDIV_KERNELS_HPP

#include <cstddef>
#include <cstdint>

// OpenMP-parallel numeric kernels used by the discrete solver and the Monte
// Carlo sampler.  Reductions are computed over fixed-size chunks whose
// partial sums are combined in index order, so results are bitwise identical
// for any thread count.  kernels::serial holds the plain-loop reference
// implementations (same chunking, no OpenMP); the test suite asserts bitwise
// agreement and tools/bench_kernels compares throughput.

namespace cuspdiv::kernels {

inline constexpr std::size_t reduction_chunk = 4096;

double dot(const double* x, const double* y, std::size_t n);
double sum_kahan(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpay(const double* x, double a, double* y, std::size_t n);  // y = x + a*y
void scale(double a, double* x, std::size_t n);
void copy(const double* x, double* y, std::size_t n);
void fill(double a, double* x, std::size_t n);
double max_abs(const double* x, std::size_t n);

// 5-point masked Laplacian on an nx*ny lattice, Dirichlet zero outside the
// mask: y = (4*x - sum of masked neighbors) restricted to masked sites.
void masked_laplacian_5pt(const uint8_t* mask, const double* x, double* y,
                          int nx, int ny);

namespace serial {
double dot(const double* x, const double* y, std::size_t n);
double sum_kahan(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double max_abs(const double* x, std::size_t n);
void masked_laplacian_5pt(const uint8_t* mask, const double* x, double* y,
                          int nx, int ny);
}  // namespace serial

}  // namespace cuspdiv::kernels

#endif
