#include "efista/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "efista/kernels.hpp"

namespace efista {
namespace {

// Daubechies-Sweldens factorization of CDF 9/7.
constexpr double kAlpha = -1.586134342059924;
constexpr double kBeta = -0.052980118572961;
constexpr double kGamma = 0.882911075530934;
constexpr double kDelta = 0.443506852043971;
// Low band scaled by K, high band by 1/K: DC and Nyquist gains are sqrt(2).
constexpr double kScale = 1.149604398860241;

// Forward lifting over polyphase components of m "samples" each, where a
// sample is a run of `width` contiguous doubles (width = 1 for a row
// transform, the block width for a column transform). Sample k of the even
// phase starts at even + k*width. The mirror x[-1] = x[1] and
// x[2m] = x[2m-2] turns the boundary terms into doubled neighbours.
void lift_forward(double* even, double* odd, int m, std::size_t width) {
  const auto& k = kernels::active();
  auto e = [&](int i) { return even + static_cast<std::size_t>(i) * width; };
  auto o = [&](int i) { return odd + static_cast<std::size_t>(i) * width; };
  auto predict = [&](double c) {
    for (int i = 0; i + 1 < m; ++i) k.lift(o(i), e(i), e(i + 1), c, width);
    k.lift(o(m - 1), e(m - 1), e(m - 1), c, width);
  };
  auto update = [&](double c) {
    k.lift(e(0), o(0), o(0), c, width);
    for (int i = 1; i < m; ++i) k.lift(e(i), o(i - 1), o(i), c, width);
  };
  predict(kAlpha);
  update(kBeta);
  predict(kGamma);
  update(kDelta);
  k.scale(even, kScale, static_cast<std::size_t>(m) * width);
  k.scale(odd, 1.0 / kScale, static_cast<std::size_t>(m) * width);
}

void lift_inverse(double* even, double* odd, int m, std::size_t width) {
  const auto& k = kernels::active();
  auto e = [&](int i) { return even + static_cast<std::size_t>(i) * width; };
  auto o = [&](int i) { return odd + static_cast<std::size_t>(i) * width; };
  auto predict = [&](double c) {
    for (int i = 0; i + 1 < m; ++i) k.lift(o(i), e(i), e(i + 1), c, width);
    k.lift(o(m - 1), e(m - 1), e(m - 1), c, width);
  };
  auto update = [&](double c) {
    k.lift(e(0), o(0), o(0), c, width);
    for (int i = 1; i < m; ++i) k.lift(e(i), o(i - 1), o(i), c, width);
  };
  k.scale(even, 1.0 / kScale, static_cast<std::size_t>(m) * width);
  k.scale(odd, kScale, static_cast<std::size_t>(m) * width);
  update(-kDelta);
  predict(-kGamma);
  update(-kBeta);
  predict(-kAlpha);
}

// One analysis stage on the top-left bw x bh block of a stride-w buffer.
void analyze_block(double* data, int stride, int bw, int bh, std::vector<double>& scratch) {
  // Rows: deinterleave into [even | odd], lift, write back low | high.
  scratch.resize(static_cast<std::size_t>(bh) * bw);
  const int mw = bw / 2;
  for (int r = 0; r < bh; ++r) {
    double* row = data + static_cast<std::size_t>(r) * stride;
    double* even = scratch.data();
    double* odd = scratch.data() + mw;
    for (int i = 0; i < mw; ++i) {
      even[i] = row[2 * i];
      odd[i] = row[2 * i + 1];
    }
    lift_forward(even, odd, mw, 1);
    std::copy(scratch.data(), scratch.data() + bw, row);
  }
  // Columns: whole rows act as vector samples.
  const int mh = bh / 2;
  scratch.resize(static_cast<std::size_t>(bh) * bw);
  double* even = scratch.data();
  double* odd = scratch.data() + static_cast<std::size_t>(mh) * bw;
  for (int i = 0; i < mh; ++i) {
    std::copy_n(data + static_cast<std::size_t>(2 * i) * stride, bw,
                even + static_cast<std::size_t>(i) * bw);
    std::copy_n(data + static_cast<std::size_t>(2 * i + 1) * stride, bw,
                odd + static_cast<std::size_t>(i) * bw);
  }
  lift_forward(even, odd, mh, bw);
  for (int r = 0; r < bh; ++r)
    std::copy_n(scratch.data() + static_cast<std::size_t>(r) * bw, bw,
                data + static_cast<std::size_t>(r) * stride);
}

void synthesize_block(double* data, int stride, int bw, int bh, std::vector<double>& scratch) {
  const int mh = bh / 2;
  scratch.resize(static_cast<std::size_t>(bh) * bw);
  for (int r = 0; r < bh; ++r)
    std::copy_n(data + static_cast<std::size_t>(r) * stride, bw,
                scratch.data() + static_cast<std::size_t>(r) * bw);
  double* even = scratch.data();
  double* odd = scratch.data() + static_cast<std::size_t>(mh) * bw;
  lift_inverse(even, odd, mh, bw);
  for (int i = 0; i < mh; ++i) {
    std::copy_n(even + static_cast<std::size_t>(i) * bw, bw,
                data + static_cast<std::size_t>(2 * i) * stride);
    std::copy_n(odd + static_cast<std::size_t>(i) * bw, bw,
                data + static_cast<std::size_t>(2 * i + 1) * stride);
  }
  const int mw = bw / 2;
  for (int r = 0; r < bh; ++r) {
    double* row = data + static_cast<std::size_t>(r) * stride;
    std::copy_n(row, bw, scratch.data());
    lift_inverse(scratch.data(), scratch.data() + mw, mw, 1);
    for (int i = 0; i < mw; ++i) {
      row[2 * i] = scratch[i];
      row[2 * i + 1] = scratch[mw + i];
    }
  }
}

}  // namespace

void require_wavelet_shape(int width, int height, int levels) {
  if (levels < 1) throw std::invalid_argument("wavelet levels must be >= 1");
  if (levels > 30 || width % (1 << levels) != 0 || height % (1 << levels) != 0)
    throw std::invalid_argument("image dimensions " + std::to_string(width) + "x" +
                                std::to_string(height) + " are not divisible by 2^" +
                                std::to_string(levels));
}

int max_wavelet_levels(int width, int height) {
  int levels = 0;
  while (width % 2 == 0 && height % 2 == 0) {
    width /= 2;
    height /= 2;
    ++levels;
  }
  return levels;
}

WaveletCoeffs analyze(const Image& x, int levels) {
  require_wavelet_shape(x.width(), x.height(), levels);
  WaveletCoeffs c{x.width(), x.height(), levels, std::vector<double>(x.values().begin(),
                                                                     x.values().end())};
  std::vector<double> scratch;
  for (int l = 0; l < levels; ++l)
    analyze_block(c.values.data(), c.width, c.width >> l, c.height >> l, scratch);
  return c;
}

Image synthesize(const WaveletCoeffs& c) {
  require_wavelet_shape(c.width, c.height, c.levels);
  if (c.values.size() != static_cast<std::size_t>(c.width) * c.height)
    throw std::invalid_argument("wavelet coefficient count does not match dimensions");
  std::vector<double> values = c.values;
  std::vector<double> scratch;
  for (int l = c.levels - 1; l >= 0; --l)
    synthesize_block(values.data(), c.width, c.width >> l, c.height >> l, scratch);
  Image out(c.width, c.height);
  std::copy(values.begin(), values.end(), out.data());
  return out;
}

void soft_threshold_inplace(std::span<double> v, double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("soft_threshold: gamma must be >= 0");
  kernels::active().soft_threshold(v.data(), gamma, v.size());
}

std::vector<double> soft_threshold(std::span<const double> v, double gamma) {
  std::vector<double> out(v.begin(), v.end());
  soft_threshold_inplace(out, gamma);
  return out;
}

void shrink_details(WaveletCoeffs& c, double gamma) {
  const int aw = c.width >> c.levels;
  const int ah = c.height >> c.levels;
  std::vector<double> approx(static_cast<std::size_t>(aw) * ah);
  for (int r = 0; r < ah; ++r)
    std::copy_n(c.values.data() + static_cast<std::size_t>(r) * c.width, aw,
                approx.data() + static_cast<std::size_t>(r) * aw);
  soft_threshold_inplace(c.values, gamma);
  for (int r = 0; r < ah; ++r)
    std::copy_n(approx.data() + static_cast<std::size_t>(r) * aw, aw,
                c.values.data() + static_cast<std::size_t>(r) * c.width);
}

Image prox_l1_wavelet(const Image& x, double gamma, int levels) {
  WaveletCoeffs c = analyze(x, levels);
  shrink_details(c, gamma);
  return synthesize(c);
}

double l1_norm_details(const WaveletCoeffs& c) {
  const auto& k = kernels::active();
  const int aw = c.width >> c.levels;
  const int ah = c.height >> c.levels;
  double total = 0.0;
  for (int r = 0; r < ah; ++r)
    total += k.abs_sum(c.values.data() + static_cast<std::size_t>(r) * c.width + aw, c.width - aw);
  const std::size_t rest = static_cast<std::size_t>(ah) * c.width;
  return total + k.abs_sum(c.values.data() + rest, c.values.size() - rest);
}

double l1_norm_wavelet(const Image& x, int levels) { return l1_norm_details(analyze(x, levels)); }

}  // namespace efista
