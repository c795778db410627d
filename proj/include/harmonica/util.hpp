#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "harmonica/types.hpp"

namespace harmonica {

// splitmix64-seeded xorshift-style generator; identical streams on every
// platform (std:: distributions are not portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    state_ = seed + 0x9e3779b97f4a7c15ULL;
    next_u64();
  }

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Complex box(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }

 private:
  uint64_t state_;
};

int thread_budget();  // HARMONICA_THREADS or hardware concurrency

// Parallel loop over [0, n); f must be safe for concurrent calls.
void parallel_for(int n, const std::function<void(int)>& f);

// Complex literal "a+bi" with no spaces ("2i", "-1-i", "1e-3+2.5e-1i", "3").
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

}  // namespace harmonica
