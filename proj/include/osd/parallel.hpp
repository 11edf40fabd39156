#pragma once

#include <cstddef>
#include <functional>

namespace osd {

// 0 -> hardware concurrency
unsigned resolve_threads(unsigned requested);

// Runs fn(0..n-1) across `threads` workers. Callers write results into
// per-index slots, so the outcome is independent of scheduling.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace osd
