#pragma once

namespace statecoder {

// Worker count for the parallel loops: OpenMP's default, capped by the
// STATECODER_THREADS environment variable when it is set to a positive value.
// All parallel results are merged deterministically, so the thread count
// never changes any output.
int worker_count();

}  // namespace statecoder
