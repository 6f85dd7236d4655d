#include "efista/linop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "efista/dct.hpp"
#include "efista/errors.hpp"
#include "efista/kernels.hpp"

namespace efista {

Psf Psf::from_taps(int size, std::vector<double> taps) {
  if (size < 1 || size % 2 == 0) throw std::invalid_argument("PSF size must be odd and positive");
  if (taps.size() != static_cast<std::size_t>(size) * size)
    throw std::invalid_argument("PSF tap count must be size*size");
  const double sum = std::accumulate(taps.begin(), taps.end(), 0.0);
  if (!std::isfinite(sum) || std::fabs(sum) < 1e-300)
    throw std::invalid_argument("PSF taps must have a finite non-zero sum");
  for (double& t : taps) t /= sum;
  return Psf(size, std::move(taps));
}

bool Psf::doubly_symmetric(double tol) const noexcept {
  const int k = size_;
  for (int u = 0; u < k; ++u) {
    for (int v = 0; v < k; ++v) {
      const double t = (*this)(u, v);
      if (std::fabs(t - (*this)(k - 1 - u, v)) > tol) return false;
      if (std::fabs(t - (*this)(u, k - 1 - v)) > tol) return false;
    }
  }
  return true;
}

Psf Psf::flipped() const {
  std::vector<double> t(taps_.rbegin(), taps_.rend());
  return Psf(size_, std::move(t));
}

Psf make_gaussian_psf(int size, double sigma) {
  if (size < 1 || size % 2 == 0) throw std::invalid_argument("Gaussian PSF size must be odd");
  if (!(sigma > 0.0)) throw std::invalid_argument("Gaussian PSF sigma must be positive");
  const double c = (size - 1) / 2.0;
  std::vector<double> taps(static_cast<std::size_t>(size) * size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double d2 = (i - c) * (i - c) + (j - c) * (j - c);
      taps[i * size + j] = std::exp(-d2 / (2.0 * sigma * sigma));
    }
  }
  return Psf::from_taps(size, std::move(taps));
}

namespace {

void require_fits(const Psf& psf, const Image& x, const char* what) {
  if (psf.size() > std::min(x.width(), x.height()))
    throw std::invalid_argument(std::string(what) + ": PSF larger than image");
}

// Correlates `padded` (row stride pw) with a k x k kernel; output is
// out_h x out_w.
void correlate(const std::vector<double>& padded, int pw, const std::vector<double>& taps, int k,
               double* out, int out_w, int out_h) {
  const auto& kt = kernels::active();
  for (int r = 0; r < out_h; ++r) {
    kt.correlate_row(out + static_cast<std::size_t>(r) * out_w,
                     padded.data() + static_cast<std::size_t>(r) * pw, pw, taps.data(), k, out_w);
  }
}

}  // namespace

Image blur_apply(const Psf& psf, const Image& x) {
  require_fits(psf, x, "blur_apply");
  const int r = psf.radius();
  const int w = x.width();
  const int h = x.height();
  const int pw = w + 2 * r;
  const int ph = h + 2 * r;
  std::vector<double> padded(static_cast<std::size_t>(pw) * ph);
  for (int i = 0; i < ph; ++i) {
    const double* src = x.row(reflect_index(i - r, h));
    double* dst = padded.data() + static_cast<std::size_t>(i) * pw;
    for (int j = 0; j < pw; ++j) dst[j] = src[reflect_index(j - r, w)];
  }
  Image out(w, h);
  correlate(padded, pw, psf.taps(), psf.size(), out.data(), w, h);
  return out;
}

Image blur_adjoint(const Psf& psf, const Image& y) {
  require_fits(psf, y, "blur_adjoint");
  const int r = psf.radius();
  const int w = y.width();
  const int h = y.height();
  // Scatter y through the flipped kernel onto the reflexively extended
  // grid, then fold the extension back onto the pixels it mirrors.
  const int zw = w + 4 * r;
  const int zh = h + 4 * r;
  std::vector<double> zero_padded(static_cast<std::size_t>(zw) * zh, 0.0);
  for (int i = 0; i < h; ++i)
    std::copy(y.row(i), y.row(i) + w,
              zero_padded.data() + static_cast<std::size_t>(i + 2 * r) * zw + 2 * r);

  const int ew = w + 2 * r;
  const int eh = h + 2 * r;
  std::vector<double> extended(static_cast<std::size_t>(ew) * eh);
  correlate(zero_padded, zw, psf.flipped().taps(), psf.size(), extended.data(), ew, eh);

  Image out(w, h, 0.0);
  for (int e = 0; e < eh; ++e) {
    double* dst = out.row(reflect_index(e - r, h));
    const double* src = extended.data() + static_cast<std::size_t>(e) * ew;
    for (int j = 0; j < ew; ++j) dst[reflect_index(j - r, w)] += src[j];
  }
  return out;
}

Image gradient(const Psf& psf, const Image& x, const Image& b) {
  require_same_shape(x, b, "gradient");
  Image residual = blur_apply(psf, x);
  kernels::active().sub(residual.data(), residual.data(), b.data(), residual.size());
  return blur_adjoint(psf, residual);
}

double data_term(const Psf& psf, const Image& x, const Image& b) {
  require_same_shape(x, b, "data_term");
  const Image ax = blur_apply(psf, x);
  return 0.5 * kernels::active().sq_dist(ax.data(), b.data(), ax.size());
}

SpectralDiag spectral_decompose(const Psf& psf, double eta, int width, int height) {
  if (!psf.doubly_symmetric())
    throw UnsupportedOperator("spectral_decompose: PSF is not doubly symmetric");
  if (!(eta > 0.0)) throw std::invalid_argument("spectral_decompose: eta must be positive");
  // A = C^T diag(s) C with C the orthonormal DCT-II, so for the first unit
  // vector e, s = (C A e) ./ (C e); C e has no zero entries.
  Image e(width, height, 0.0);
  e(0, 0) = 1.0;
  const Image ce = dct2(e);
  const Image cae = dct2(blur_apply(psf, e));
  SpectralDiag out{width, height, eta, std::vector<double>(ce.size())};
  for (std::size_t f = 0; f < ce.size(); ++f) {
    const double s = cae.data()[f] / ce.data()[f];
    out.mu[f] = eta * s * s;
  }
  return out;
}

double power_iteration_AtA(const Psf& psf, int width, int height, double rel_tol, int max_iters) {
  std::mt19937_64 rng(0x5eedULL);
  Image v(width, height);
  for (double& x : v.values()) x = 0.5 + static_cast<double>(rng() >> 11) * 0x1.0p-53;
  v = (1.0 / norm2(v)) * v;
  double estimate = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    Image w = blur_adjoint(psf, blur_apply(psf, v));
    const double rayleigh = dot(v, w);
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    v = (1.0 / nw) * w;
    if (it > 1 && std::fabs(rayleigh - estimate) <= rel_tol * std::fabs(rayleigh)) return rayleigh;
    estimate = rayleigh;
  }
  throw NumericError("power iteration did not converge within " + std::to_string(max_iters) +
                     " iterations");
}

double lambda_max_AtA(const Psf& psf, int width, int height) {
  if (psf.doubly_symmetric()) {
    const SpectralDiag spec = spectral_decompose(psf, 1.0, width, height);
    return *std::max_element(spec.mu.begin(), spec.mu.end());
  }
  return power_iteration_AtA(psf, width, height);
}

}  // namespace efista
