#pragma once

#include "efista/image.hpp"

namespace efista {

/// Reported PSNR for (numerically) identical images.
inline constexpr double kPsnrCap = 200.0;

/// 10 log10(1 / MSE) against a unit peak; kPsnrCap when MSE < 1e-20.
double psnr(const Image& x, const Image& reference);

}  // namespace efista
