#pragma once

// Deterministic fork-join helper. Work items write to disjoint indices and
// every random draw is counter-keyed, so the thread count never changes a
// result, only the wall time.

#include <cstddef>
#include <functional>

namespace seqlab {

// Effective thread cap: explicit set_max_threads() > SEQLAB_THREADS env >
// hardware concurrency.
int max_threads();
void set_max_threads(int threads);

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace seqlab
