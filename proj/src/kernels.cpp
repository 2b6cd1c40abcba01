#include "cuspdiv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace cuspdiv::kernels {
namespace {

inline std::size_t chunk_count(std::size_t n) {
    return (n + reduction_chunk - 1) / reduction_chunk;
}

inline double dot_chunk(const double* x, const double* y, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    return s;
}

struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        double t = v - c;
        double s = sum + t;
        c = (s - sum) - t;
        sum = s;
    }
};

inline double kahan_chunk(const double* x, std::size_t lo, std::size_t hi) {
    Kahan k;
    for (std::size_t i = lo; i < hi; ++i) k.add(x[i]);
    return k.sum;
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
    const std::size_t nc = chunk_count(n);
    std::vector<double> partial(nc);
#pragma omp parallel for schedule(static) if (nc > 4)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * reduction_chunk;
        partial[c] = dot_chunk(x, y, lo, std::min(lo + reduction_chunk, n));
    }
    double s = 0.0;
    for (double v : partial) s += v;
    return s;
}

double sum_kahan(const double* x, std::size_t n) {
    const std::size_t nc = chunk_count(n);
    std::vector<double> partial(nc);
#pragma omp parallel for schedule(static) if (nc > 4)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * reduction_chunk;
        partial[c] = kahan_chunk(x, lo, std::min(lo + reduction_chunk, n));
    }
    Kahan k;
    for (double v : partial) k.add(v);
    return k.sum;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) y[i] += a * x[i];
}

void xpay(const double* x, double a, double* y, std::size_t n) {
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) y[i] = x[i] + a * y[i];
}

void scale(double a, double* x, std::size_t n) {
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) x[i] *= a;
}

void copy(const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) y[i] = x[i];
}

void fill(double a, double* x, std::size_t n) {
#pragma omp parallel for schedule(static) if (n > 16384)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) x[i] = a;
}

double max_abs(const double* x, std::size_t n) {
    const std::size_t nc = chunk_count(n);
    std::vector<double> partial(nc, 0.0);
#pragma omp parallel for schedule(static) if (nc > 4)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nc); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * reduction_chunk;
        const std::size_t hi = std::min(lo + reduction_chunk, n);
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(x[i]));
        partial[c] = m;
    }
    double m = 0.0;
    for (double v : partial) m = std::max(m, v);
    return m;
}

void masked_laplacian_5pt(const uint8_t* mask, const double* x, double* y, int nx, int ny) {
    const bool par = static_cast<std::size_t>(nx) * ny > 16384;
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const std::size_t idx = row + i;
            if (!mask[idx]) {
                y[idx] = 0.0;
                continue;
            }
            double s = 4.0 * x[idx];
            if (i > 0 && mask[idx - 1]) s -= x[idx - 1];
            if (i + 1 < nx && mask[idx + 1]) s -= x[idx + 1];
            if (j > 0 && mask[idx - nx]) s -= x[idx - nx];
            if (j + 1 < ny && mask[idx + nx]) s -= x[idx + nx];
            y[idx] = s;
        }
    }
}

namespace serial {

double dot(const double* x, const double* y, std::size_t n) {
    const std::size_t nc = chunk_count(n);
    double s = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t lo = c * reduction_chunk;
        s += dot_chunk(x, y, lo, std::min(lo + reduction_chunk, n));
    }
    return s;
}

double sum_kahan(const double* x, std::size_t n) {
    const std::size_t nc = chunk_count(n);
    Kahan k;
    for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t lo = c * reduction_chunk;
        k.add(kahan_chunk(x, lo, std::min(lo + reduction_chunk, n)));
    }
    return k.sum;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

void masked_laplacian_5pt(const uint8_t* mask, const double* x, double* y, int nx, int ny) {
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            const std::size_t idx = row + i;
            if (!mask[idx]) {
                y[idx] = 0.0;
                continue;
            }
            double s = 4.0 * x[idx];
            if (i > 0 && mask[idx - 1]) s -= x[idx - 1];
            if (i + 1 < nx && mask[idx + 1]) s -= x[idx + 1];
            if (j > 0 && mask[idx - nx]) s -= x[idx - nx];
            if (j + 1 < ny && mask[idx + nx]) s -= x[idx + nx];
            y[idx] = s;
        }
    }
}

}  // namespace serial
}  // namespace cuspdiv::kernels
