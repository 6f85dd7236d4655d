#pragma once

// Data-parallel inner loops shared by the operators and solvers.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The active table is picked once per process from the
// CPU feature bits; set EFISTA_KERNELS=scalar (or avx2) to force one.
// Variants agree to rounding (FMA contraction and reduction order differ).

#include <cstddef>

namespace efista::kernels {

struct KernelTable {
  const char* name;

  /// dst[i] += c * (a[i] + b[i])  (one lifting step)
  void (*lift)(double* dst, const double* a, const double* b, double c, std::size_t n);
  /// x[i] *= c
  void (*scale)(double* x, double c, std::size_t n);
  /// x[i] = sign(x[i]) * max(|x[i]| - gamma, 0)
  void (*soft_threshold)(double* x, double gamma, std::size_t n);
  /// out[i] = x[i] + c * y[i]
  void (*axpy)(double* out, const double* x, double c, const double* y, std::size_t n);
  /// out[i] = xn[i] + c * (xn[i] - xo[i])
  void (*extrapolate)(double* out, const double* xn, const double* xo, double c, std::size_t n);
  /// out[i] = a[i] - b[i]
  void (*sub)(double* out, const double* a, const double* b, std::size_t n);
  /// out[i] = a[i] * w[i]
  void (*mul)(double* out, const double* a, const double* w, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*abs_sum)(const double* a, std::size_t n);
  double (*sq_dist)(const double* a, const double* b, std::size_t n);
  /// One output row of a k x k correlation over a padded source:
  /// out[j] = sum_{u,v} taps[u*k+v] * src[u*stride + j + v], j < width.
  void (*correlate_row)(double* out, const double* src, std::size_t stride, const double* taps,
                        int k, std::size_t width);
};

const KernelTable& scalar();
/// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2();
/// The table selected for this process.
const KernelTable& active();

}  // namespace efista::kernels
