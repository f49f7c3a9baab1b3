#include "skewlab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace skewlab {
namespace {
std::atomic<unsigned> g_default{0};
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  if (unsigned d = g_default.load()) return d;
  if (const char* env = std::getenv("SKEWLAB_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return unsigned(v);
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void set_default_workers(unsigned n) { g_default.store(n); }
unsigned default_workers() { return resolve_workers(0); }

void parallel_chunks(std::size_t n, std::size_t grain, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  if (grain == 0) grain = 1;
  const std::size_t chunks = chunk_count(n, grain);
  const unsigned w = unsigned(std::min<std::size_t>(resolve_workers(workers), chunks));
  auto run = [&](std::size_t c) { body(c * grain, std::min(n, (c + 1) * grain), c); };
  if (w <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  // keep the error of the lowest failing chunk so reports do not depend on timing
  std::exception_ptr first_error;
  std::size_t first_chunk = chunks;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        run(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (c < first_chunk) {
          first_chunk = c;
          first_error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(w - 1);
  for (unsigned t = 1; t < w; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace skewlab
