#pragma once

#include <cstddef>
#include <functional>

namespace pdoe {

// Worker count used when a caller passes threads = 0.
int default_threads();
void set_default_threads(int n);

// Splits [0, n) into fixed-size chunks and runs fn(chunk_index, begin, end)
// across the workers.  Chunk boundaries do not depend on the thread count, so
// callers that collect per-chunk results and merge them in chunk order get
// identical output no matter how many threads run.
void parallel_chunks(std::size_t n, std::size_t chunk_size, int threads,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

std::size_t chunk_count(std::size_t n, std::size_t chunk_size);

}  // namespace pdoe
