#include "statecoder/runtime.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace statecoder {

int worker_count() {
    int n = 1;
#ifdef _OPENMP
    n = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("STATECODER_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1 && cap < n) n = cap;
        } catch (...) {
            // ignore malformed values
        }
    }
    return n;
}

}  // namespace statecoder
