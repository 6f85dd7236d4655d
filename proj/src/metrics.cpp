#include "efista/metrics.hpp"

#include <cmath>

namespace efista {

double psnr(const Image& x, const Image& reference) {
  const double mse = squared_distance(x, reference) / static_cast<double>(x.size());
  if (mse < 1e-20) return kPsnrCap;
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace efista
