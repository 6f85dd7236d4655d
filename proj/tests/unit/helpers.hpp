#pragma once

#include <random>

#include "efista/image.hpp"

namespace test {

inline efista::Image random_image(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  efista::Image x(w, h);
  for (auto& v : x.values()) v = u(rng);
  return x;
}

inline efista::Image constant_image(int w, int h, double c) {
  efista::Image x(w, h);
  for (auto& v : x.values()) v = c;
  return x;
}

}  // namespace test
