#pragma once

// The n-step acceleration matrix
//   W_n = sum_{i=1..n} C(n,i) (-1)^(i-1) (eta A^T A)^(i-1),
// which satisfies (I - eta A^T A)^n = I - eta W_n A^T A, so one step
// x - eta W_n grad f(x) equals n plain gradient steps.

#include <vector>

#include "efista/dct.hpp"
#include "efista/image.hpp"
#include "efista/linop.hpp"

namespace efista {

/// c[i-1] = C(n,i) (-1)^(i-1) for i = 1..n. Requires 1 <= n <= 32.
std::vector<double> binomial_filter_weights(int n);

/// phi(mu) = (1 - (1 - mu)^n) / mu, continuous limit n at mu -> 0.
double weighting_eigenvalue(double mu, int n);

/// W_n diagonalized in the DCT basis: phi[f] is its eigenvalue at frequency f.
class WeightingFilter {
 public:
  int order() const noexcept { return order_; }
  double eta() const noexcept { return eta_; }
  int width() const noexcept { return diag_.width(); }
  int height() const noexcept { return diag_.height(); }
  const std::vector<double>& phi() const noexcept { return phi_; }
  const std::vector<double>& mu() const noexcept { return mu_; }

  /// W_n g.
  Image apply(const Image& g) const { return diag_.apply(g); }
  void apply(const Image& g, Image& out) const { diag_.apply(g, out); }

 private:
  friend WeightingFilter build_filter(const SpectralDiag& spec, int n);
  WeightingFilter(int order, double eta, const SpectralDiag& spec, std::vector<double> phi);

  int order_;
  double eta_;
  std::vector<double> mu_;
  std::vector<double> phi_;
  DctDiagonal diag_;
};

/// Builds phi from the closed form and cross-checks it against the
/// binomial polynomial on a sample of frequencies; also checks
/// 1 <= phi <= n and phi*mu <= 1 whenever mu lies in [0, 1].
/// Throws std::logic_error if either check fails.
WeightingFilter build_filter(const SpectralDiag& spec, int n);

/// idct2(phi ⊙ dct2(g)) = W_n g.
Image apply_weighted_gradient_spectral(const WeightingFilter& filter, const Image& g);

/// n plain gradient steps z <- z - eta A^T (A z - b) starting at x, which
/// equals x - eta W_n grad f(x). Works for any PSF.
Image apply_weighted_gradient_nstep(const Psf& psf, const Image& x, const Image& b, double eta,
                                    int n);

/// Largest eigenvalue of W_n.
double lambda_max_W(const WeightingFilter& filter);

/// Upper bound on the per-pixel noise standard deviation after one
/// weighted gradient step: eta * sigma_w * sqrt(lambda_max(A^T A)) * lambda_max(W_n).
double noise_std_amplification(double lambda_max_AtA, double lambda_max_W, double sigma_w,
                               double eta);

}  // namespace efista
