#include "rigidity/rng.hpp"

#include <algorithm>
#include <cstdlib>

namespace rigidity {

int thread_budget() {
  int n = int(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("RIGIDITY_LAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

void parallel_for(size_t n, const std::function<void(size_t, size_t)>& body) {
  int workers = thread_budget();
  if (workers <= 1 || n < 1024) {
    body(0, n);
    return;
  }
  size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  for (int t = 0; t < workers; ++t) {
    size_t lo = size_t(t) * chunk;
    size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : threads) th.join();
}

}  // namespace rigidity
