#include "gtopt/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace gtopt {

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, int)>& fn) {
  if (n == 0) return;
  const int nw = std::max<int>(1, std::min<std::size_t>(threads, n));
  if (nw == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nw);
  const std::size_t chunk = (n + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([=, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i, w);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace gtopt
