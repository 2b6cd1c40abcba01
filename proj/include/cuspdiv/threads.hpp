#ifndef CUSPDIV_THREADS_HPP
#define CUSPDIV_THREADS_HPP

namespace cuspdiv {

// Applies the CUSPDIV_THREADS environment cap to OpenMP (no-op when unset or
// when built without OpenMP).  Returns the effective thread count.
int apply_thread_cap();

int effective_threads();

}  // namespace cuspdiv

#endif
