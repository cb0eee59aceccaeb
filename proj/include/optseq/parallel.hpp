#pragma once

#include <cstddef>
#include <functional>

namespace optseq {

// Worker count: OPTSEQ_THREADS when set and > 0, otherwise hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n). Callers write results into slot i, so the
// outcome is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace optseq
