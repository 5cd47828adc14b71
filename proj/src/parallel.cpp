#include "proxekit/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace proxekit {

int worker_count() {
  static const int cached = [] {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("PROXEKIT_THREADS")) {
      char* end = nullptr;
      const long requested = std::strtol(env, &end, 10);
      if (end != env && requested >= 1) return static_cast<int>(std::min<long>(requested, hw));
    }
    return hw;
  }();
  return cached;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  const int workers = worker_count();
  if (workers <= 1 || count < 4096) {
    fn(0, count);
    return;
  }
  const std::size_t chunks = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  const std::size_t step = (count + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = c * step;
    const std::size_t end = std::min(count, begin + step);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace proxekit
