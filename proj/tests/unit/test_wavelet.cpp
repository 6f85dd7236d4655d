#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "efista/oracle.hpp"
#include "efista/wavelet.hpp"
#include "helpers.hpp"

using namespace efista;

namespace {

double max_detail(const WaveletCoeffs& c) {
  double m = 0.0;
  for (int r = 0; r < c.height; ++r)
    for (int col = 0; col < c.width; ++col)
      if (!c.in_approximation(r, col)) m = std::max(m, std::abs(c.values[r * c.width + col]));
  return m;
}

}  // namespace

TEST_CASE("wavelet shape rules") {
  CHECK_THROWS_AS(require_wavelet_shape(8, 8, 0), std::invalid_argument);
  CHECK_THROWS_AS(require_wavelet_shape(12, 8, 3), std::invalid_argument);
  CHECK_NOTHROW(require_wavelet_shape(256, 256, 8));
  CHECK(max_wavelet_levels(256, 256) == 8);
  CHECK(max_wavelet_levels(64, 32) == 5);
  CHECK(max_wavelet_levels(40, 72) == 3);

  const WaveletCoeffs c = analyze(test::random_image(2, 2, 1), 1);
  int approx = 0;
  for (int r = 0; r < 2; ++r)
    for (int col = 0; col < 2; ++col) approx += c.in_approximation(r, col);
  CHECK(approx == 1);
  CHECK(c.values.size() == 4);
}

TEST_CASE("constants have no detail") {
  for (int levels : {1, 3, 8}) {
    const WaveletCoeffs c = analyze(test::constant_image(256, 256, 0.6), levels);
    CHECK(max_detail(c) <= 1e-10);
  }
}

TEST_CASE("affine ramps have no interior detail") {
  // Symmetric extension bends a ramp at the border, so only check
  // coefficients whose support stays inside.
  Image ramp(64, 64);
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c) ramp(r, c) = 0.01 * r + 0.02 * c;
  const WaveletCoeffs w = analyze(ramp, 1);
  double m = 0.0;
  for (int r = 4; r < 28; ++r)
    for (int c = 36; c < 60; ++c) m = std::max(m, std::abs(w.values[r * 64 + c]));
  CHECK(m <= 1e-12);
}

TEST_CASE("perfect reconstruction") {
  const Image x = test::random_image(256, 256, 2);
  CHECK(max_abs_difference(synthesize(analyze(x, 8)), x) <= 1e-9);
  const Image y = test::random_image(48, 16, 3);
  CHECK(max_abs_difference(synthesize(analyze(y, 4)), y) <= 1e-9);
}

TEST_CASE("perfect reconstruction over many random images") {
  double worst = 0.0;
  int count = 0;
  for (auto [size, n] : {std::pair{16, 600}, {64, 300}, {256, 100}}) {
    for (int t = 0; t < n; ++t, ++count) {
      const Image x = test::random_image(size, size, 7000 + count, -1, 1);
      worst = std::max(worst, max_abs_difference(synthesize(analyze(x, max_wavelet_levels(size, size))), x));
    }
  }
  CHECK(count == 1000);
  CHECK(worst <= 1e-9);
}

TEST_CASE("synthesis basics") {
  WaveletCoeffs zero{32, 32, 3, std::vector<double>(32 * 32, 0.0)};
  CHECK(norm2(synthesize(zero)) == 0.0);
  // With all five levels the approximation band is the single DC value.
  WaveletCoeffs dc{32, 32, 5, std::vector<double>(32 * 32, 0.0)};
  dc.values[0] = 1.0;
  const Image img = synthesize(dc);
  double lo = 1e9, hi = -1e9;
  for (double v : img.values()) lo = std::min(lo, v), hi = std::max(hi, v);
  CHECK(hi - lo <= 1e-12);
  CHECK(hi > 0.0);
}

TEST_CASE("lifting matches the dense filter-bank matrix") {
  for (auto [w, h, levels] : {std::tuple{8, 8, 3}, {16, 8, 2}, {4, 4, 2}}) {
    const auto M = oracle::dense_wavelet_analysis(w, h, levels);
    const Image x = test::random_image(w, h, w * h + levels, -1, 1);
    const WaveletCoeffs c = analyze(x, levels);
    const Eigen::VectorXd ref = M.entries * oracle::to_vector(x);
    double m = 0.0;
    for (int i = 0; i < w * h; ++i) m = std::max(m, std::abs(ref[i] - c.values[i]));
    CHECK(m <= 1e-12);
  }
}

TEST_CASE("scalar soft threshold") {
  CHECK(soft_threshold(std::vector<double>{1.2}, 0.5)[0] == doctest::Approx(0.7));
  CHECK(soft_threshold(std::vector<double>{-0.3}, 0.5)[0] == 0.0);
  const std::vector<double> v{-3.0, -0.1, 0.0, 0.4, 2.5};
  CHECK(soft_threshold(v, 0.0) == v);
  CHECK_THROWS(soft_threshold(v, -1.0));

  // Grid search of 0.5 (u - x)^2 + gamma |u| over u in [-3, 3].
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-2.5, 2.5), ug(0.0, 1.5);
  for (int t = 0; t < 100; ++t) {
    const double x = ux(rng), g = ug(rng);
    double best_u = 0.0, best = INFINITY;
    for (int i = -30000; i <= 30000; ++i) {
      const double u = i * 1e-4;
      const double f = 0.5 * (u - x) * (u - x) + g * std::abs(u);
      if (f < best) best = f, best_u = u;
    }
    CHECK(std::abs(soft_threshold(std::vector<double>{x}, g)[0] - best_u) <= 1e-4);
  }
}

TEST_CASE("soft threshold is odd and 1-Lipschitz") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> a(1000), b(1000), neg(1000);
  for (int i = 0; i < 1000; ++i) a[i] = u(rng), b[i] = u(rng), neg[i] = -a[i];
  const auto sa = soft_threshold(a, 0.7), sb = soft_threshold(b, 0.7), sn = soft_threshold(neg, 0.7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(sn[i] == -sa[i]);
    CHECK(std::abs(sa[i] - sb[i]) <= std::abs(a[i] - b[i]) + 1e-15);  // rounding of x - gamma
  }
}

TEST_CASE("wavelet prox") {
  const Image x = test::random_image(32, 32, 6);
  CHECK(max_abs_difference(prox_l1_wavelet(x, 0.0, 3), x) <= 1e-9);

  // Full shrinkage keeps only the approximation band.
  WaveletCoeffs c = analyze(x, 3);
  const double big = max_detail(c) + 1.0;
  for (int r = 0; r < 32; ++r)
    for (int col = 0; col < 32; ++col)
      if (!c.in_approximation(r, col)) c.values[r * 32 + col] = 0.0;
  CHECK(max_abs_difference(prox_l1_wavelet(x, big, 3), synthesize(c)) <= 1e-12);

  // Non-expansive up to the biorthogonal slack.
  for (int t = 0; t < 50; ++t) {
    const Image a = test::random_image(32, 32, 100 + t, -1, 1);
    const Image b = test::random_image(32, 32, 200 + t, -1, 1);
    const double d = std::sqrt(squared_distance(prox_l1_wavelet(a, 0.1, 3), prox_l1_wavelet(b, 0.1, 3)));
    CHECK(d <= 1.1 * std::sqrt(squared_distance(a, b)));
  }
}

TEST_CASE("wavelet prox is close to the exact analysis prox") {
  const int w = 4, h = 4, levels = 2;
  const auto Phi = oracle::dense_wavelet_analysis(w, h, levels);
  const auto approx = oracle::approximation_mask(w, h, levels);
  Eigen::MatrixXd D(w * h - 1, w * h);
  for (int i = 0, r = 0; i < w * h; ++i)
    if (!approx[i]) D.row(r++) = Phi.entries.row(i);
  auto value = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& x, double g) {
    return 0.5 * (u - x).squaredNorm() + g * (D * u).cwiseAbs().sum();
  };
  for (int t = 0; t < 5; ++t) {
    const Image x = test::random_image(w, h, 300 + t);
    const double gamma = 0.05 + 0.05 * t;
    const Eigen::VectorXd xv = oracle::to_vector(x);
    const Eigen::VectorXd exact = oracle::prox_l1_analysis(xv, D, gamma);
    const Eigen::VectorXd fast = oracle::to_vector(prox_l1_wavelet(x, gamma, levels));
    const double fe = value(exact, xv, gamma), ff = value(fast, xv, gamma);
    CHECK(ff >= fe - 1e-9);
    CHECK(ff <= 1.02 * fe);
  }
}

TEST_CASE("l1 norm of details") {
  CHECK(l1_norm_wavelet(Image(16, 16), 2) == 0.0);
  for (int idx : {5, 40, 200}) {
    WaveletCoeffs c{16, 16, 2, std::vector<double>(256, 0.0)};
    c.values[idx] = 1.0;
    const double v = l1_norm_wavelet(synthesize(c), 2);
    CHECK(v >= 0.8);
    CHECK(v <= 1.25);
  }
  WaveletCoeffs c{16, 16, 2, std::vector<double>(256, 0.0)};
  c.values[0] = 3.0;  // approximation band is not counted
  c.values[5] = -1.5;
  c.values[200] = 2.0;
  CHECK(l1_norm_details(c) == doctest::Approx(3.5));
}
