// Throughput comparison of the OpenMP kernels against their serial reference
// implementations.  The two paths share the chunked reduction layout, so the
// outputs must agree bitwise; this tool reports timings and verifies that.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cuspdiv/geometry.hpp"
#include "cuspdiv/kernels.hpp"
#include "cuspdiv/rng.hpp"
#include "cuspdiv/threads.hpp"

using namespace cuspdiv;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int k = 0; k < reps; ++k) {
        const double t0 = now_seconds();
        fn();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

}  // namespace

int main() {
    const int threads = apply_thread_cap();
    std::printf("threads: %d\n", threads);

    const size_t n = size_t(1) << 23;  // 8M doubles
    std::vector<double> x(n), y(n), z(n);
    Rng rng(20240901);
    for (size_t i = 0; i < n; ++i) {
        x[i] = rng.uniform(-1.0, 1.0);
        y[i] = rng.uniform(-1.0, 1.0);
    }

    std::printf("%-24s %12s %12s %8s\n", "kernel", "serial [s]", "openmp [s]", "speedup");

    {
        volatile double sink = 0.0;
        const double ts = time_best_of(3, [&] { sink = kernels::serial::dot(x.data(), y.data(), n); });
        const double tp = time_best_of(3, [&] { sink = kernels::dot(x.data(), y.data(), n); });
        const bool same = kernels::serial::dot(x.data(), y.data(), n) ==
                          kernels::dot(x.data(), y.data(), n);
        std::printf("%-24s %12.4f %12.4f %7.2fx %s\n", "dot (8M)", ts, tp, ts / tp,
                    same ? "" : "MISMATCH");
    }
    {
        volatile double sink = 0.0;
        const double ts = time_best_of(3, [&] { sink = kernels::serial::sum_kahan(x.data(), n); });
        const double tp = time_best_of(3, [&] { sink = kernels::sum_kahan(x.data(), n); });
        const bool same =
            kernels::serial::sum_kahan(x.data(), n) == kernels::sum_kahan(x.data(), n);
        std::printf("%-24s %12.4f %12.4f %7.2fx %s\n", "kahan sum (8M)", ts, tp, ts / tp,
                    same ? "" : "MISMATCH");
    }
    {
        const int nx = 2896, ny = 2896;  // ~8.4M sites
        std::vector<uint8_t> mask(size_t(nx) * ny, 1);
        std::vector<double> a(mask.size()), b1(mask.size()), b2(mask.size());
        for (size_t i = 0; i < a.size(); ++i) a[i] = x[i % n];
        const double ts = time_best_of(3, [&] {
            kernels::serial::masked_laplacian_5pt(mask.data(), a.data(), b1.data(), nx, ny);
        });
        const double tp = time_best_of(3, [&] {
            kernels::masked_laplacian_5pt(mask.data(), a.data(), b2.data(), nx, ny);
        });
        bool same = true;
        for (size_t i = 0; i < b1.size(); ++i)
            if (b1[i] != b2[i]) {
                same = false;
                break;
            }
        std::printf("%-24s %12.4f %12.4f %7.2fx %s\n", "masked 5pt (8.4M)", ts, tp, ts / tp,
                    same ? "" : "MISMATCH");
    }
    {
        const DomainSpec dom = DomainSpec::make(FamilyParams::polyNd(2.0, 3, 2.0));
        const McRegion region = McRegion::cross_section(0.5);
        McEstimate ep, es;
        const double tp = time_best_of(3, [&] { ep = mc_measure(dom, region, 4000000, 7); });
#ifdef _OPENMP
        omp_set_num_threads(1);
#endif
        const double ts = time_best_of(3, [&] { es = mc_measure(dom, region, 4000000, 7); });
#ifdef _OPENMP
        omp_set_num_threads(threads);
#endif
        std::printf("%-24s %12.4f %12.4f %7.2fx %s\n", "mc cross-section (4M)", ts, tp, ts / tp,
                    ep.value == es.value ? "" : "MISMATCH");
    }
    return 0;
}
