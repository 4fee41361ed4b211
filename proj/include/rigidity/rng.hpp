#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace rigidity {

// splitmix64-seeded xoshiro256**; byte-stable across platforms and runs.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s_) {
      x += 0x9e3779b97f4a7c15ull;
      uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      w = z ^ (z >> 31);
    }
  }

  uint64_t next() {
    auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return next() % n; }
  int range(int lo, int hi) { return lo + int(below(uint64_t(hi - lo + 1))); }

  // Marsaglia polar method.
  double gaussian() {
    while (true) {
      double a = uniform(-1.0, 1.0), b = uniform(-1.0, 1.0);
      double q = a * a + b * b;
      if (q > 0.0 && q < 1.0) return a * std::sqrt(-2.0 * std::log(q) / q);
    }
  }

 private:
  uint64_t s_[4];
};

int thread_budget();  // min(hardware, RIGIDITY_LAB_THREADS when set)

// Static-partition parallel loop; results must not depend on chunk order.
void parallel_for(size_t n, const std::function<void(size_t, size_t)>& body);

}  // namespace rigidity
