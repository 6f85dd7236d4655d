#include <cmath>

#include "efista/kernels.hpp"

namespace efista::kernels {
namespace {

void lift(double* dst, const double* a, const double* b, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += c * (a[i] + b[i]);
}

void scale(double* x, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= c;
}

void soft_threshold(double* x, double gamma, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mag = std::fabs(x[i]) - gamma;
    x[i] = mag > 0.0 ? std::copysign(mag, x[i]) : 0.0;
  }
}

void axpy(double* out, const double* x, double c, const double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + c * y[i];
}

void extrapolate(double* out, const double* xn, const double* xo, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = xn[i] + c * (xn[i] - xo[i]);
}

void sub(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(double* out, const double* a, const double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * w[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double abs_sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void correlate_row(double* out, const double* src, std::size_t stride, const double* taps, int k,
                   std::size_t width) {
  for (std::size_t j = 0; j < width; ++j) {
    double acc = 0.0;
    for (int u = 0; u < k; ++u) {
      const double* s = src + u * stride + j;
      const double* t = taps + u * k;
      for (int v = 0; v < k; ++v) acc += t[v] * s[v];
    }
    out[j] = acc;
  }
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{"scalar", lift,    scale, soft_threshold, axpy,   extrapolate,
                                 sub,      mul,     dot,   abs_sum,        sq_dist, correlate_row};
  return table;
}

}  // namespace efista::kernels
