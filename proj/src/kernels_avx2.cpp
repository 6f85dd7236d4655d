// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "efista/kernels.hpp"

namespace efista::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void lift(double* dst, const double* a, const double* b, double c, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d s = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(dst + i, _mm256_fmadd_pd(vc, s, _mm256_loadu_pd(dst + i)));
  }
  for (; i < n; ++i) dst[i] += c * (a[i] + b[i]);
}

void scale(double* x, double c, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(vc, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= c;
}

void soft_threshold(double* x, double gamma, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d vg = _mm256_set1_pd(gamma);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const __m256d mag = _mm256_sub_pd(_mm256_andnot_pd(sign_mask, v), vg);
    const __m256d keep = _mm256_cmp_pd(mag, zero, _CMP_GT_OQ);
    const __m256d r = _mm256_or_pd(mag, _mm256_and_pd(sign_mask, v));
    _mm256_storeu_pd(x + i, _mm256_and_pd(r, keep));
  }
  for (; i < n; ++i) {
    const double mag = std::fabs(x[i]) - gamma;
    x[i] = mag > 0.0 ? std::copysign(mag, x[i]) : 0.0;
  }
}

void axpy(double* out, const double* x, double c, const double* y, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_fmadd_pd(vc, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = x[i] + c * y[i];
}

void extrapolate(double* out, const double* xn, const double* xo, double c, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(xn + i);
    const __m256d d = _mm256_sub_pd(a, _mm256_loadu_pd(xo + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vc, d, a));
  }
  for (; i < n; ++i) out[i] = xn[i] + c * (xn[i] - xo[i]);
}

void sub(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] - b[i];
}

void mul(double* out, const double* a, const double* w, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(w + i)));
  for (; i < n; ++i) out[i] = a[i] * w[i];
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double abs_sum(const double* a, std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(a + i)));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double sq_dist(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

void correlate_row(double* out, const double* src, std::size_t stride, const double* taps, int k,
                   std::size_t width) {
  std::size_t j = 0;
  for (; j + 8 <= width; j += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (int u = 0; u < k; ++u) {
      const double* s = src + u * stride + j;
      const double* t = taps + u * k;
      for (int v = 0; v < k; ++v) {
        const __m256d tv = _mm256_broadcast_sd(t + v);
        acc0 = _mm256_fmadd_pd(tv, _mm256_loadu_pd(s + v), acc0);
        acc1 = _mm256_fmadd_pd(tv, _mm256_loadu_pd(s + v + 4), acc1);
      }
    }
    _mm256_storeu_pd(out + j, acc0);
    _mm256_storeu_pd(out + j + 4, acc1);
  }
  for (; j < width; ++j) {
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

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", lift,    scale, soft_threshold, axpy,   extrapolate,
                                 sub,    mul,     dot,   abs_sum,        sq_dist, correlate_row};
  return table;
}

}  // namespace efista::kernels
