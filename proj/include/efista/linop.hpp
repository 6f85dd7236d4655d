#pragma once

// The blur operator A: a normalized point spread function applied by
// correlation with reflexive (half-sample symmetric) boundaries, its
// adjoint, the least-squares gradient, and the DCT-domain spectrum of A^T A.

#include <vector>

#include "efista/image.hpp"

namespace efista {

/// Odd-sized square convolution kernel, normalized to unit sum.
class Psf {
 public:
  /// Normalizes `taps` to unit sum. Throws std::invalid_argument for an
  /// even or non-positive size, a wrong tap count, or a zero/non-finite sum.
  static Psf from_taps(int size, std::vector<double> taps);
  static Psf identity() { return from_taps(1, {1.0}); }

  int size() const noexcept { return size_; }
  int radius() const noexcept { return size_ / 2; }
  double operator()(int u, int v) const noexcept { return taps_[u * size_ + v]; }
  const std::vector<double>& taps() const noexcept { return taps_; }

  /// Invariant under horizontal and vertical flips (within `tol`).
  bool doubly_symmetric(double tol = 1e-14) const noexcept;
  Psf flipped() const;

 private:
  Psf(int size, std::vector<double> taps) : size_(size), taps_(std::move(taps)) {}

  int size_;
  std::vector<double> taps_;
};

/// Samples exp(-((i-c)^2 + (j-c)^2) / (2 sigma^2)), c = (size-1)/2, normalized.
Psf make_gaussian_psf(int size, double sigma);

/// Maps an out-of-range index onto [0, n) by half-sample mirroring
/// (x[-1] = x[0], x[n] = x[n-1]).
constexpr int reflect_index(int i, int n) noexcept {
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - 1 - i;
  return i;
}

Image blur_apply(const Psf& psf, const Image& x);
Image blur_adjoint(const Psf& psf, const Image& y);
/// A^T (A x - b).
Image gradient(const Psf& psf, const Image& x, const Image& b);
/// 0.5 * ||A x - b||^2.
double data_term(const Psf& psf, const Image& x, const Image& b);

/// Eigenvalues of eta * A^T A in the orthonormal 2D DCT-II basis.
struct SpectralDiag {
  int width = 0;
  int height = 0;
  double eta = 1.0;
  std::vector<double> mu;  ///< row-major, indexed like dct2 coefficients
};

/// Requires a doubly symmetric PSF (the DCT diagonalizes A only then);
/// throws UnsupportedOperator otherwise.
SpectralDiag spectral_decompose(const Psf& psf, double eta, int width, int height);

/// Largest eigenvalue of A^T A. Uses the spectrum when the PSF is doubly
/// symmetric, power iteration otherwise.
double lambda_max_AtA(const Psf& psf, int width, int height);

/// Power iteration on x -> A^T A x with a fixed-seed start vector. Throws
/// NumericError if the Rayleigh quotient has not settled to `rel_tol`
/// within `max_iters`.
double power_iteration_AtA(const Psf& psf, int width, int height, double rel_tol = 1e-8,
                           int max_iters = 10000);

}  // namespace efista
