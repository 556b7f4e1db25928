#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace semisup {

// splitmix64 finalizer.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a master seed and a path of tags
// (purpose, epoch, sample id, ...). Stateless: the same path always yields the
// same stream, regardless of how many other streams were drawn in between.
inline uint64_t stream_seed(uint64_t master, std::initializer_list<uint64_t> path) {
  uint64_t s = mix64(master);
  for (uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

// Minimal deterministic PRNG (splitmix64 core). All randomness in the project
// funnels through this type so that runs are bit-reproducible under a seed.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; draws two uniforms per call, second discarded (no carry state).
  double normal(double mean = 0.0, double stddev = 1.0);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = next_u64() % i;
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace semisup
