#pragma once

// Orthonormal 2D DCT-II / DCT-III on images, backed by FFTW r2r plans.

#include <memory>
#include <vector>

#include "efista/image.hpp"

namespace efista {

/// Unnormalized FFTW REDFT10 / REDFT01 plan pair for one image shape.
/// Plans are cached per shape and safe to execute concurrently.
class DctPlan {
 public:
  static std::shared_ptr<const DctPlan> get(int width, int height);

  DctPlan(int width, int height);
  ~DctPlan();
  DctPlan(const DctPlan&) = delete;
  DctPlan& operator=(const DctPlan&) = delete;

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  /// In place, REDFT10 along both axes (no normalization).
  void forward_raw(double* data) const;
  /// In place, REDFT01 along both axes. inverse_raw(forward_raw(x)) = 4*W*H*x.
  void inverse_raw(double* data) const;

 private:
  int width_;
  int height_;
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
};

Image dct2(const Image& x);
Image idct2(const Image& coeffs);

/// The operator x -> idct2(weights ⊙ dct2(x)) for weights indexed like
/// dct2 coefficients. Applied with two raw transforms and one multiply.
class DctDiagonal {
 public:
  DctDiagonal(int width, int height, const std::vector<double>& weights);

  int width() const noexcept { return plan_->width(); }
  int height() const noexcept { return plan_->height(); }

  Image apply(const Image& x) const;
  void apply(const Image& x, Image& out) const;

 private:
  std::shared_ptr<const DctPlan> plan_;
  std::vector<double> raw_weights_;
};

}  // namespace efista
