#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "efista/linop.hpp"
#include "efista/oracle.hpp"
#include "efista/weighting.hpp"
#include "helpers.hpp"

using namespace efista;

TEST_CASE("binomial filter weights") {
  CHECK(binomial_filter_weights(1) == std::vector<double>{1});
  CHECK(binomial_filter_weights(2) == std::vector<double>{2, -1});
  CHECK(binomial_filter_weights(8) == std::vector<double>{8, -28, 56, -70, 56, -28, 8, -1});
  CHECK_THROWS(binomial_filter_weights(0));
  CHECK_THROWS(binomial_filter_weights(33));
}

TEST_CASE("weighting eigenvalue") {
  for (double mu : {0.0, 0.1, 0.7, 1.0}) CHECK(weighting_eigenvalue(mu, 1) == doctest::Approx(1.0));
  CHECK(weighting_eigenvalue(0.5, 2) == doctest::Approx(1.5));
  for (int n : {1, 2, 5, 8, 16}) CHECK(weighting_eigenvalue(1.0, n) == doctest::Approx(1.0));
  CHECK(weighting_eigenvalue(0.0, 8) == 8.0);
  CHECK(weighting_eigenvalue(1e-300, 8) == doctest::Approx(8.0));
  // Against the polynomial sum c_i mu^(i-1).
  const auto c = binomial_filter_weights(8);
  for (double mu : {1e-6, 0.01, 0.3, 0.9}) {
    double poly = 0.0;
    for (int i = 7; i >= 0; --i) poly = poly * mu + c[i];
    CHECK(weighting_eigenvalue(mu, 8) == doctest::Approx(poly).epsilon(1e-12));
  }
}

TEST_CASE("spectral W_n matches the dense polynomial") {
  const Psf psf = make_gaussian_psf(3, 1.2);
  const double eta = 1.0;
  const auto A = oracle::direct_blur_matrix(psf, 8, 8);
  const SpectralDiag spec = spectral_decompose(psf, eta, 8, 8);
  for (int n : {1, 2, 4, 8}) {
    const WeightingFilter f = build_filter(spec, n);
    const auto W = oracle::dense_Wn(A, eta, n);
    const Image g = test::random_image(8, 8, 30 + n, -1, 1);
    const Eigen::VectorXd dense = W.entries * oracle::to_vector(g);
    CHECK((oracle::to_vector(f.apply(g)) - dense).cwiseAbs().maxCoeff() <= 1e-10);
    if (n == 1) CHECK(max_abs_difference(f.apply(g), g) <= 1e-14);
  }
}

TEST_CASE("W_n step equals n plain gradient steps") {
  const Psf psf = make_gaussian_psf(5, 2.0);
  const SpectralDiag spec = spectral_decompose(psf, 1.0, 16, 16);
  const Image zero(16, 16);
  for (int n : {1, 3, 8}) {
    const WeightingFilter f = build_filter(spec, n);
    const Image g = test::random_image(16, 16, n);
    Image steps = g;
    for (int i = 0; i < n; ++i) steps = steps - gradient(psf, steps, zero);
    const Image one = g - f.apply(gradient(psf, g, zero));
    CHECK(max_abs_difference(steps, one) <= 1e-10);
  }
}

TEST_CASE("n-step path") {
  const Psf psf = make_gaussian_psf(5, 2.0);
  const Image x = test::random_image(16, 16, 40);
  const Image b = test::random_image(16, 16, 41);
  CHECK(max_abs_difference(apply_weighted_gradient_nstep(psf, x, b, 0.9, 1), x - 0.9 * gradient(psf, x, b)) <=
        1e-15);
  CHECK(max_abs_difference(apply_weighted_gradient_nstep(psf, x, blur_apply(psf, x), 1.0, 5), x) <= 1e-14);

  const WeightingFilter f = build_filter(spectral_decompose(psf, 1.0, 16, 16), 8);
  const Image spectral = x - apply_weighted_gradient_spectral(f, gradient(psf, x, b));
  CHECK(max_abs_difference(apply_weighted_gradient_nstep(psf, x, b, 1.0, 8), spectral) <= 1e-9);
}

TEST_CASE("largest eigenvalue of W_n") {
  const Psf psf = make_gaussian_psf(7, 4.0);
  const SpectralDiag spec = spectral_decompose(psf, 1.0, 256, 256);
  CHECK(lambda_max_W(build_filter(spec, 1)) == doctest::Approx(1.0));
  const double l8 = lambda_max_W(build_filter(spec, 8));
  CHECK(l8 > 7.9);
  CHECK(l8 <= 8.0);
  const double l4 = lambda_max_W(build_filter(spec, 4));
  CHECK(l4 > 3.9);
  CHECK(l4 <= 4.0);
}

TEST_CASE("noise amplification bound") {
  CHECK(noise_std_amplification(1.0, 1.0, 0.05, 0.5) == doctest::Approx(0.5 * 0.05));
  CHECK(noise_std_amplification(1.0, 8.0, 1e-2, 1.0) == doctest::Approx(8e-2));
  CHECK(noise_std_amplification(1.0, 8.0, 0.0, 1.0) == 0.0);
  CHECK_THROWS(noise_std_amplification(-1.0, 8.0, 0.1, 1.0));
}
