#pragma once

#include <cstddef>
#include <functional>

namespace skewlab {

/// Worker count: explicit > 0 wins, else SKEWLAB_WORKERS, else hardware
/// concurrency (at least 1).
unsigned resolve_workers(unsigned requested = 0);

/// Process-wide default used when an operation is passed workers = 0.
void set_default_workers(unsigned n);
unsigned default_workers();

/// Calls body(begin, end, chunk_index) over [0, n) split into fixed chunks of
/// `grain` items. Chunk boundaries depend only on n and grain, never on the
/// worker count; callers that reduce per chunk and combine in chunk order
/// get worker-independent results.
void parallel_chunks(std::size_t n, std::size_t grain, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

inline std::size_t chunk_count(std::size_t n, std::size_t grain) {
  return grain == 0 ? 0 : (n + grain - 1) / grain;
}

}  // namespace skewlab
