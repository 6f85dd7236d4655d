#include "efista/dct.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "efista/kernels.hpp"

namespace efista {
namespace {

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Per-axis factors taking raw REDFT10 output to orthonormal DCT-II.
std::vector<double> forward_factors(int n) {
  std::vector<double> f(n);
  for (int k = 0; k < n; ++k) f[k] = 0.5 * std::sqrt((k == 0 ? 1.0 : 2.0) / n);
  return f;
}

// Per-axis factors taking orthonormal coefficients to REDFT01 input.
std::vector<double> inverse_factors(int n) {
  std::vector<double> f(n);
  for (int k = 0; k < n; ++k) f[k] = k == 0 ? std::sqrt(1.0 / n) : 0.5 * std::sqrt(2.0 / n);
  return f;
}

void scale_separable(Image& img, const std::vector<double>& fx, const std::vector<double>& fy) {
  for (int r = 0; r < img.height(); ++r) {
    double* row = img.row(r);
    for (int c = 0; c < img.width(); ++c) row[c] *= fy[r] * fx[c];
  }
}

}  // namespace

DctPlan::DctPlan(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("DCT plan needs positive dimensions");
  std::lock_guard lock(planner_mutex());
  std::vector<double> scratch(static_cast<std::size_t>(width) * height);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_ = fftw_plan_r2r_2d(height, width, scratch.data(), scratch.data(), FFTW_REDFT10,
                              FFTW_REDFT10, flags);
  inverse_ = fftw_plan_r2r_2d(height, width, scratch.data(), scratch.data(), FFTW_REDFT01,
                              FFTW_REDFT01, flags);
  if (forward_ == nullptr || inverse_ == nullptr) throw std::runtime_error("FFTW planning failed");
}

DctPlan::~DctPlan() {
  std::lock_guard lock(planner_mutex());
  if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (inverse_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
}

std::shared_ptr<const DctPlan> DctPlan::get(int width, int height) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const DctPlan>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{width, height}];
  if (!slot) slot = std::make_shared<const DctPlan>(width, height);
  return slot;
}

void DctPlan::forward_raw(double* data) const {
  fftw_execute_r2r(static_cast<fftw_plan>(forward_), data, data);
}

void DctPlan::inverse_raw(double* data) const {
  fftw_execute_r2r(static_cast<fftw_plan>(inverse_), data, data);
}

Image dct2(const Image& x) {
  Image out = x;
  DctPlan::get(x.width(), x.height())->forward_raw(out.data());
  scale_separable(out, forward_factors(x.width()), forward_factors(x.height()));
  return out;
}

Image idct2(const Image& coeffs) {
  Image out = coeffs;
  scale_separable(out, inverse_factors(coeffs.width()), inverse_factors(coeffs.height()));
  DctPlan::get(coeffs.width(), coeffs.height())->inverse_raw(out.data());
  return out;
}

DctDiagonal::DctDiagonal(int width, int height, const std::vector<double>& weights)
    : plan_(DctPlan::get(width, height)), raw_weights_(weights) {
  if (weights.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("DctDiagonal: weight count does not match image size");
  // The diagonal commutes with the per-axis normalizations, so only the
  // overall REDFT01(REDFT10(.)) = 4WH factor survives.
  const double norm = 1.0 / (4.0 * width * height);
  kernels::active().scale(raw_weights_.data(), norm, raw_weights_.size());
}

Image DctDiagonal::apply(const Image& x) const {
  Image out(x.width(), x.height());
  apply(x, out);
  return out;
}

void DctDiagonal::apply(const Image& x, Image& out) const {
  if (x.width() != width() || x.height() != height())
    throw std::invalid_argument("DctDiagonal: image dimension mismatch");
  if (!out.same_shape(x)) out = Image(x.width(), x.height());
  std::copy(x.data(), x.data() + x.size(), out.data());
  plan_->forward_raw(out.data());
  kernels::active().mul(out.data(), out.data(), raw_weights_.data(), out.size());
  plan_->inverse_raw(out.data());
}

}  // namespace efista
