#pragma once

#include <cstddef>

// Deterministic data parallelism: every task writes disjoint output and each
// task's arithmetic is independent of the schedule, so results are identical
// for any thread count.

namespace vmhs::par {

template <typename Fn>
void for_each_index(std::ptrdiff_t count, const Fn& fn) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) fn(i);
}

}  // namespace vmhs::par
