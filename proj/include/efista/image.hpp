#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace efista {

/// Dense row-major grayscale image in double precision.
class Image {
 public:
  Image() = default;
  Image(int width, int height, double fill = 0.0);
  /// Takes ownership of `values`; throws std::invalid_argument on a size
  /// mismatch or non-finite entries.
  Image(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(int row, int col) noexcept {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }
  double operator()(int row, int col) const noexcept {
    return values_[static_cast<std::size_t>(row) * width_ + col];
  }

  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  double* row(int r) noexcept { return values_.data() + static_cast<std::size_t>(r) * width_; }
  const double* row(int r) const noexcept {
    return values_.data() + static_cast<std::size_t>(r) * width_;
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool same_shape(const Image& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool all_finite() const noexcept;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Throws std::invalid_argument naming `what` if the shapes differ.
void require_same_shape(const Image& a, const Image& b, const char* what);

double dot(const Image& a, const Image& b);
double norm2(const Image& a);
double squared_distance(const Image& a, const Image& b);
double max_abs_difference(const Image& a, const Image& b);
Image operator-(const Image& a, const Image& b);
Image operator+(const Image& a, const Image& b);
Image operator*(double s, const Image& a);

}  // namespace efista
