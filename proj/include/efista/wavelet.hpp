#pragma once

// Separable 2D CDF 9/7 wavelet (lifting scheme, whole-sample symmetric
// extension) and soft-thresholding in its coefficient domain.

#include <span>
#include <vector>

#include "efista/image.hpp"

namespace efista {

/// Mallat layout: after `levels` stages the coarsest approximation band
/// occupies the top-left (width >> levels) x (height >> levels) block and
/// detail bands nest around it.
struct WaveletCoeffs {
  int width = 0;
  int height = 0;
  int levels = 0;
  std::vector<double> values;

  bool in_approximation(int row, int col) const noexcept {
    return row < (height >> levels) && col < (width >> levels);
  }
};

/// Throws std::invalid_argument unless levels >= 1 and 2^levels divides
/// both dimensions.
void require_wavelet_shape(int width, int height, int levels);
/// Largest level count the dimensions allow.
int max_wavelet_levels(int width, int height);

WaveletCoeffs analyze(const Image& x, int levels);
Image synthesize(const WaveletCoeffs& c);

/// S_gamma[v]_i = max(|v_i| - gamma, 0) sign(v_i). gamma < 0 throws.
std::vector<double> soft_threshold(std::span<const double> v, double gamma);
void soft_threshold_inplace(std::span<double> v, double gamma);

/// Shrinks every band except the coarsest approximation band.
void shrink_details(WaveletCoeffs& c, double gamma);

/// synthesize(shrink_details(analyze(x), gamma)).
Image prox_l1_wavelet(const Image& x, double gamma, int levels);

/// Sum of |coefficient| over the bands prox_l1_wavelet shrinks.
double l1_norm_wavelet(const Image& x, int levels);
double l1_norm_details(const WaveletCoeffs& c);

}  // namespace efista
