#include "cuspdiv/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cuspdiv {

int effective_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("CUSPDIV_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1) omp_set_num_threads(cap);
        } catch (...) {
            // Malformed value: ignore, keep OpenMP defaults.
        }
    }
#endif
    return effective_threads();
}

}  // namespace cuspdiv
