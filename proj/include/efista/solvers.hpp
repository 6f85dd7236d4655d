#pragma once

// Proximal-gradient engine for
//   F(x) = 0.5 ||A x - b||^2 + lambda ||Phi x||_1   (Phi: CDF 9/7 details)
// with the update
//   x+ = S_{p lambda eta}[ y - eta W_n grad f(y) ],  Nesterov momentum on y.
// ISTA, FISTA and IFISTA are parameter reductions of this one step:
// FISTA is n = 1, p = 1; IFISTA is p = 1; ISTA is FISTA without momentum.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "efista/image.hpp"
#include "efista/linop.hpp"
#include "efista/weighting.hpp"

namespace efista {

enum class Variant { Ista, Fista, Ifista, Efista };

std::string_view to_string(Variant v) noexcept;
/// Case-insensitive; throws std::invalid_argument for unknown names.
Variant parse_variant(std::string_view name);

struct SolverConfig {
  Variant variant = Variant::Efista;
  double eta = 1.0;
  double lambda = 0.0;
  int n = 8;                  ///< weighting order; ignored (1) for ISTA/FISTA
  std::optional<double> p;    ///< threshold scale; default lambda_max(W_n); 1 unless EFISTA
  int max_iters = 50;
  int wavelet_levels = 8;
  bool record_psnr = true;    ///< only meaningful when a ground truth is supplied
  bool spectral_path = true;  ///< apply W_n in the DCT domain when the PSF allows it
  bool record_time = true;    ///< false writes 0 seconds, making traces byte-reproducible
  double rel_tol = 0.0;       ///< stop when |F_k - F_{k-1}| <= rel_tol |F_k|; 0 disables
};

/// Blur, data and the resolved W_n machinery for one configuration.
struct Problem {
  Psf psf;
  Image b;
  double lambda_max_AtA = 1.0;
  std::optional<WeightingFilter> filter;  ///< present when W_n is applied spectrally
  double default_p = 1.0;                 ///< lambda_max(W_n), or n without a spectrum
  std::vector<std::string> warnings;
};

/// Resolves the operator spectrum and W_n for `cfg`. Throws
/// std::invalid_argument when eta lies outside (0, 1/lambda_max(A^T A)].
/// An asymmetric PSF with spectral_path set falls back to the n-step path
/// and records a warning.
Problem make_problem(const Psf& psf, const Image& b, const SolverConfig& cfg);

/// The parameters one step actually uses after variant reductions.
struct EffectiveParams {
  int n = 1;
  double p = 1.0;
  bool momentum = true;
  double threshold = 0.0;  ///< p * lambda * eta
};
EffectiveParams effective_params(const SolverConfig& cfg, const Problem& problem);

struct SolverState {
  Image x;       ///< x_k
  Image x_prev;  ///< x_{k-1}
  Image y;       ///< momentum point y_k
  double alpha = 1.0;
  int iter = 0;

  static SolverState initial(const Image& x0) { return {x0, x0, x0, 1.0, 0}; }
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double data_term = 0.0;
  double regularizer = 0.0;  ///< lambda * ||Phi x||_1
  double psnr = 0.0;         ///< NaN when no ground truth
  double seconds = 0.0;      ///< wall time since the run started
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

enum class RunStatus { Completed, Converged, Diverged };

struct SolveResult {
  Image x;
  IterationTrace trace;
  RunStatus status = RunStatus::Completed;
  EffectiveParams params;
  std::vector<std::string> warnings;
};

/// F(x) = 0.5 ||A x - b||^2 + lambda * l1_norm_wavelet(x, levels).
double objective(const Image& x, const Image& b, const Psf& psf, double lambda, int levels);

/// (1 + sqrt(1 + 4 alpha^2)) / 2.
double momentum_alpha(double alpha);

/// x_new + ((alpha - 1) / alpha_new) (x_new - x_old).
Image momentum_extrapolate(const Image& x_new, const Image& x_old, double alpha, double alpha_new);

/// One iteration of the loop body.
SolverState efista_step(const SolverState& state, const SolverConfig& cfg, const Problem& problem);

/// Runs cfg.max_iters steps from x0 (or fewer if rel_tol triggers, or on
/// divergence: non-finite objective or one above 1e6 F(x0), which ends the
/// run with the partial trace and status Diverged).
SolveResult run_solver(const SolverConfig& cfg, const Image& b, const Psf& psf, const Image& x0,
                       const Image* truth = nullptr);
SolveResult run_solver(const SolverConfig& cfg, const Problem& problem, const Image& x0,
                       const Image* truth = nullptr);

/// True when the last objective exceeds the running minimum by more than
/// rel_tol (relative), i.e. the iterates are moving away from the optimum.
bool objective_rising(const IterationTrace& trace, double rel_tol = 1e-3);

/// ||v||^2 in the W_n^{-1} metric: sum_f dct2(v)[f]^2 / phi[f].
double wnorm_sq(const Image& v, const WeightingFilter& filter);

/// Majorizer of F around z:
///   f(z) + <x - z, grad f(z)> + ||x - z||^2_{W_n^{-1}} / (2 eta) + p lambda ||Phi x||_1.
/// Needs problem.filter unless the effective n is 1.
double surrogate_Q(const Image& x, const Image& z, const Problem& problem,
                   const SolverConfig& cfg);

struct RateReport {
  bool passed = true;
  double constant = 0.0;  ///< C in C ||x0 - x*||^2_{W^-1} / (k+1)^2
  double max_ratio = 0.0;  ///< max over k of (F(x_k) - F*) / bound_k
  int worst_iter = 0;
  int violations = 0;
  std::string convention;
};

/// Checks F(x_k) - F(x*) <= (2/eta) ||x0 - x*||^2_{W_n^{-1}} / (k+1)^2 for
/// every traced k > 1. `filter` may be null for n = 1 (Euclidean norm).
RateReport rate_check(const IterationTrace& trace, const Image& x0, const Image& x_star,
                      double objective_star, const WeightingFilter* filter, double eta);

}  // namespace efista
