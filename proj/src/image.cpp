#include "efista/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "efista/kernels.hpp"

namespace efista {

Image::Image(int width, int height, double fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

Image::Image(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be >= 1");
  if (values_.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("image value count does not match width*height");
  if (!all_finite()) throw std::invalid_argument("image contains non-finite values");
}

bool Image::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()) + ")");
  }
}

double dot(const Image& a, const Image& b) {
  require_same_shape(a, b, "dot");
  return kernels::active().dot(a.data(), b.data(), a.size());
}

double norm2(const Image& a) { return std::sqrt(kernels::active().dot(a.data(), a.data(), a.size())); }

double squared_distance(const Image& a, const Image& b) {
  require_same_shape(a, b, "squared_distance");
  return kernels::active().sq_dist(a.data(), b.data(), a.size());
}

double max_abs_difference(const Image& a, const Image& b) {
  require_same_shape(a, b, "max_abs_difference");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

Image operator-(const Image& a, const Image& b) {
  require_same_shape(a, b, "operator-");
  Image out(a.width(), a.height());
  kernels::active().sub(out.data(), a.data(), b.data(), a.size());
  return out;
}

Image operator+(const Image& a, const Image& b) {
  require_same_shape(a, b, "operator+");
  Image out(a.width(), a.height());
  kernels::active().axpy(out.data(), a.data(), 1.0, b.data(), a.size());
  return out;
}

Image operator*(double s, const Image& a) {
  Image out = a;
  kernels::active().scale(out.data(), s, out.size());
  return out;
}

}  // namespace efista
