#pragma once

#include <omp.h>

namespace lrk {

// Execution policy for the data-parallel kernels. Every kernel has one
// arithmetic order; the policy only decides whether independent output
// elements are computed by one thread or many. Results are bit-identical
// across policies and thread counts.
enum class Exec { serial, openmp };

inline int thread_count(Exec exec) {
    return exec == Exec::serial ? 1 : omp_get_max_threads();
}

}  // namespace lrk
