#include "pdoe/parallel.hpp"

#include <atomic>
#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace pdoe {

namespace {
std::atomic<int> g_default_threads{0};
}

int default_threads() {
  const int configured = g_default_threads.load();
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_default_threads(int n) { g_default_threads.store(n); }

std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

void parallel_chunks(std::size_t n, std::size_t chunk_size, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t chunks = chunk_count(n, chunk_size);
  int workers = threads > 0 ? threads : default_threads();
  workers = static_cast<int>(std::min<std::size_t>(workers, chunks));

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * chunk_size;
    const std::size_t end = std::min(n, begin + chunk_size);
    fn(c, begin, end);
  };

  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      try {
        while (true) {
          const std::size_t c = next.fetch_add(1);
          if (c >= chunks || failed.load()) break;
          run_chunk(c);
        }
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace pdoe
