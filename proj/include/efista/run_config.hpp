#pragma once

// Plain-text run configuration:
//
//   # comment
//   key = value
//
// Lists are comma separated; numeric lists also accept start:step:stop.
// Unknown keys and malformed values are rejected with the line number.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efista/solvers.hpp"

namespace efista {

struct RunConfig {
  std::vector<std::string> images;  ///< PGM paths or synthetic:<kind>
  std::string observed;             ///< deblur: already-degraded input, no ground truth
  int psf_size = 7;
  double psf_sigma = 4.0;
  std::vector<double> noise_sigmas{1e-2};
  std::vector<int> k_budgets;       ///< per noise level; default 45 for 1e-2, 180 for 1e-3, else 50
  std::vector<Variant> variants{Variant::Efista};
  std::vector<int> n_values{8};
  std::optional<double> p;          ///< unset: lambda_max(W_n)
  std::vector<double> p_values;
  double eta = 1.0;
  std::optional<double> lambda;     ///< unset: 10 sigma^2
  int iterations = 50;
  int iter_divisor = 3;
  int trials = 1;
  std::uint64_t seed = 0;
  int probe_iter = 15;
  int levels = 8;
  bool spectral_path = true;
  bool timing = true;
  std::string output_dir = "out";
  std::vector<std::string> keys_set;  ///< keys present in the file, in order
};

/// `origin` names the source in error messages; relative image paths are
/// resolved against `base_dir` when it is non-empty.
RunConfig parse_run_config(const std::string& text, const std::string& origin,
                           const std::string& base_dir = "");
RunConfig load_run_config(const std::string& path);

/// Expands "a:step:b" (inclusive, tolerant to rounding) or "a,b,c".
std::vector<double> parse_number_list(const std::string& text);

/// Default FISTA budget for a noise level.
int default_k_budget(double noise_sigma);

}  // namespace efista
