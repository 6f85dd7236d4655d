#include "efista/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "efista/kernels.hpp"

namespace efista {
namespace {

constexpr double kMuFloor = 1e-14;

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

double polynomial_form(const std::vector<double>& c, double mu) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * mu + *it;
  return acc;
}

double polynomial_condition(const std::vector<double>& c, double mu) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * std::fabs(mu) + std::fabs(*it);
  return acc;
}

}  // namespace

std::vector<double> binomial_filter_weights(int n) {
  if (n < 1 || n > 32) throw std::invalid_argument("weighting order n must be in [1, 32]");
  std::vector<double> c(n);
  for (int i = 1; i <= n; ++i) c[i - 1] = (i % 2 == 1 ? 1.0 : -1.0) * binomial(n, i);
  return c;
}

double weighting_eigenvalue(double mu, int n) {
  if (mu <= kMuFloor) return n;
  if (mu <= 1.0) return -std::expm1(n * std::log1p(-mu)) / mu;
  return (1.0 - std::pow(1.0 - mu, n)) / mu;
}

WeightingFilter::WeightingFilter(int order, double eta, const SpectralDiag& spec,
                                 std::vector<double> phi)
    : order_(order),
      eta_(eta),
      mu_(spec.mu),
      phi_(std::move(phi)),
      diag_(spec.width, spec.height, phi_) {}

WeightingFilter build_filter(const SpectralDiag& spec, int n) {
  const std::vector<double> coeffs = binomial_filter_weights(n);
  std::vector<double> phi(spec.mu.size());
  for (std::size_t f = 0; f < phi.size(); ++f) phi[f] = weighting_eigenvalue(spec.mu[f], n);

  // Closed form vs. literal polynomial on a strided sample plus the extremes.
  const std::size_t count = phi.size();
  const std::size_t stride = std::max<std::size_t>(1, count / 64);
  auto check = [&](std::size_t f) {
    const double mu = spec.mu[f];
    const double tol = 1e-10 * std::max(1.0, polynomial_condition(coeffs, mu));
    if (std::fabs(polynomial_form(coeffs, mu) - phi[f]) > tol)
      throw std::logic_error("weighting filter: closed form disagrees with polynomial at mu=" +
                             std::to_string(mu));
    if (mu >= 0.0 && mu <= 1.0) {
      if (phi[f] < 1.0 - 1e-12 || phi[f] > n + 1e-12 || phi[f] * mu > 1.0 + 1e-12)
        throw std::logic_error("weighting filter: eigenvalue bounds violated at mu=" +
                               std::to_string(mu));
    }
  };
  for (std::size_t f = 0; f < count; f += stride) check(f);
  const auto [lo, hi] = std::minmax_element(spec.mu.begin(), spec.mu.end());
  check(static_cast<std::size_t>(lo - spec.mu.begin()));
  check(static_cast<std::size_t>(hi - spec.mu.begin()));

  return WeightingFilter(n, spec.eta, spec, std::move(phi));
}

Image apply_weighted_gradient_spectral(const WeightingFilter& filter, const Image& g) {
  if (g.width() != filter.width() || g.height() != filter.height())
    throw std::invalid_argument("apply_weighted_gradient_spectral: dimension mismatch");
  return filter.apply(g);
}

Image apply_weighted_gradient_nstep(const Psf& psf, const Image& x, const Image& b, double eta,
                                    int n) {
  if (n < 1) throw std::invalid_argument("apply_weighted_gradient_nstep: n must be >= 1");
  require_same_shape(x, b, "apply_weighted_gradient_nstep");
  const auto& k = kernels::active();
  Image z = x;
  for (int j = 0; j < n; ++j) {
    const Image g = gradient(psf, z, b);
    k.axpy(z.data(), z.data(), -eta, g.data(), z.size());
  }
  return z;
}

double lambda_max_W(const WeightingFilter& filter) {
  return *std::max_element(filter.phi().begin(), filter.phi().end());
}

double noise_std_amplification(double lambda_max_AtA, double lambda_max_W, double sigma_w,
                               double eta) {
  if (lambda_max_AtA < 0.0 || lambda_max_W < 0.0 || sigma_w < 0.0 || eta < 0.0)
    throw std::invalid_argument("noise_std_amplification: inputs must be non-negative");
  return eta * sigma_w * std::sqrt(lambda_max_AtA) * lambda_max_W;
}

}  // namespace efista
