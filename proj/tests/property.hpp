#pragma once

// Minimal seeded property runner: draws `cases` inputs and reports the first failing seed.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>

namespace prop {

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }
};

template <class Body>
void for_all(int cases, std::uint64_t seed, Body&& body) {
  for (int i = 0; i < cases; ++i) {
    Gen g(seed + static_cast<std::uint64_t>(i));
    CAPTURE(i);
    body(g);
  }
}

}  // namespace prop
