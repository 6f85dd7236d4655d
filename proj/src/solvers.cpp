#include "efista/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "efista/dct.hpp"
#include "efista/errors.hpp"
#include "efista/kernels.hpp"
#include "efista/metrics.hpp"
#include "efista/wavelet.hpp"

namespace efista {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::Ista: return "ISTA";
    case Variant::Fista: return "FISTA";
    case Variant::Ifista: return "IFISTA";
    case Variant::Efista: return "EFISTA";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (Variant v : {Variant::Ista, Variant::Fista, Variant::Ifista, Variant::Efista})
    if (upper == to_string(v)) return v;
  throw std::invalid_argument("unknown solver variant '" + std::string(name) + "'");
}

namespace {

bool uses_weighting(Variant v) { return v == Variant::Ifista || v == Variant::Efista; }

}  // namespace

Problem make_problem(const Psf& psf, const Image& b, const SolverConfig& cfg) {
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (cfg.lambda < 0.0) throw std::invalid_argument("lambda must be non-negative");
  if (cfg.max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  require_wavelet_shape(b.width(), b.height(), cfg.wavelet_levels);
  const int n = uses_weighting(cfg.variant) ? cfg.n : 1;
  binomial_filter_weights(n);  // range check

  Problem problem{psf, b, 1.0, std::nullopt, 1.0, {}};
  const bool symmetric = psf.doubly_symmetric();
  std::optional<SpectralDiag> spectrum;
  if (symmetric) {
    spectrum = spectral_decompose(psf, cfg.eta, b.width(), b.height());
    problem.lambda_max_AtA = *std::max_element(spectrum->mu.begin(), spectrum->mu.end()) / cfg.eta;
  } else {
    problem.lambda_max_AtA = power_iteration_AtA(psf, b.width(), b.height());
  }
  // eta * lambda_max may land a few ulps above 1 for a unit-sum kernel.
  if (cfg.eta * problem.lambda_max_AtA > 1.0 + 1e-9) {
    std::ostringstream msg;
    msg << "eta = " << cfg.eta << " exceeds 1/lambda_max(A^T A) = " << 1.0 / problem.lambda_max_AtA;
    throw std::invalid_argument(msg.str());
  }

  if (n > 1) {
    if (cfg.spectral_path && spectrum) {
      problem.filter = build_filter(*spectrum, n);
      problem.default_p = lambda_max_W(*problem.filter);
    } else {
      if (cfg.spectral_path)
        problem.warnings.push_back("PSF is not doubly symmetric; using the n-step W_n path");
      // phi is decreasing in mu with limit n at mu = 0.
      problem.default_p = spectrum ? weighting_eigenvalue(
                                         *std::min_element(spectrum->mu.begin(), spectrum->mu.end()), n)
                                   : static_cast<double>(n);
    }
  }
  return problem;
}

EffectiveParams effective_params(const SolverConfig& cfg, const Problem& problem) {
  EffectiveParams e;
  e.momentum = cfg.variant != Variant::Ista;
  e.n = uses_weighting(cfg.variant) ? cfg.n : 1;
  e.p = cfg.variant == Variant::Efista ? cfg.p.value_or(problem.default_p) : 1.0;
  e.threshold = e.p * cfg.lambda * cfg.eta;
  return e;
}

double objective(const Image& x, const Image& b, const Psf& psf, double lambda, int levels) {
  const double f = data_term(psf, x, b);
  return lambda == 0.0 ? f : f + lambda * l1_norm_wavelet(x, levels);
}

double momentum_alpha(double alpha) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha * alpha)); }

Image momentum_extrapolate(const Image& x_new, const Image& x_old, double alpha, double alpha_new) {
  require_same_shape(x_new, x_old, "momentum_extrapolate");
  Image out(x_new.width(), x_new.height());
  kernels::active().extrapolate(out.data(), x_new.data(), x_old.data(), (alpha - 1.0) / alpha_new,
                                out.size());
  return out;
}

SolverState efista_step(const SolverState& state, const SolverConfig& cfg, const Problem& problem) {
  const EffectiveParams params = effective_params(cfg, problem);
  const auto& k = kernels::active();
  const Image& y = state.y;

  Image v;
  if (params.n == 1 || problem.filter) {
    Image g = gradient(problem.psf, y, problem.b);
    if (params.n > 1) g = problem.filter->apply(g);
    v = Image(y.width(), y.height());
    k.axpy(v.data(), y.data(), -cfg.eta, g.data(), v.size());
  } else {
    v = apply_weighted_gradient_nstep(problem.psf, y, problem.b, cfg.eta, params.n);
  }

  SolverState next;
  next.x = params.threshold > 0.0 ? prox_l1_wavelet(v, params.threshold, cfg.wavelet_levels)
                                  : std::move(v);
  next.iter = state.iter + 1;
  next.alpha = momentum_alpha(state.alpha);
  next.y = params.momentum ? momentum_extrapolate(next.x, state.x, state.alpha, next.alpha) : next.x;
  next.x_prev = state.x;
  return next;
}

SolveResult run_solver(const SolverConfig& cfg, const Image& b, const Psf& psf, const Image& x0,
                       const Image* truth) {
  return run_solver(cfg, make_problem(psf, b, cfg), x0, truth);
}

SolveResult run_solver(const SolverConfig& cfg, const Problem& problem, const Image& x0,
                       const Image* truth) {
  require_same_shape(x0, problem.b, "run_solver");
  if (truth != nullptr) require_same_shape(*truth, problem.b, "run_solver (truth)");
  SolveResult result;
  result.params = effective_params(cfg, problem);
  result.warnings = problem.warnings;
  if (cfg.variant == Variant::Efista && result.params.n > 1 &&
      (result.params.p < 1.0 || result.params.p > problem.default_p * (1.0 + 1e-12))) {
    std::ostringstream msg;
    msg << "p = " << result.params.p << " lies outside [1, lambda_max(W_n) = " << problem.default_p
        << "]";
    result.warnings.push_back(msg.str());
  }

  const auto start = std::chrono::steady_clock::now();
  const double f0 = objective(x0, problem.b, problem.psf, cfg.lambda, cfg.wavelet_levels);
  SolverState state = SolverState::initial(x0);
  double previous = f0;
  result.trace.records.reserve(static_cast<std::size_t>(cfg.max_iters));
  for (int it = 0; it < cfg.max_iters; ++it) {
    SolverState next = efista_step(state, cfg, problem);

    IterationRecord rec;
    rec.iter = next.iter;
    rec.data_term = data_term(problem.psf, next.x, problem.b);
    rec.regularizer =
        cfg.lambda == 0.0 ? 0.0 : cfg.lambda * l1_norm_wavelet(next.x, cfg.wavelet_levels);
    rec.objective = rec.data_term + rec.regularizer;

    // The run keeps the last iterate with a finite, bounded objective.
    if (!std::isfinite(rec.objective) || rec.objective > 1e6 * std::max(f0, 1e-300)) {
      result.status = RunStatus::Diverged;
      break;
    }
    state = std::move(next);
    rec.psnr = (truth != nullptr && cfg.record_psnr) ? psnr(state.x, *truth)
                                                     : std::numeric_limits<double>::quiet_NaN();
    rec.seconds = cfg.record_time ? std::chrono::duration<double>(
                                        std::chrono::steady_clock::now() - start)
                                        .count()
                                  : 0.0;
    result.trace.records.push_back(rec);
    if (cfg.rel_tol > 0.0 && std::fabs(rec.objective - previous) <= cfg.rel_tol * std::fabs(rec.objective)) {
      result.status = RunStatus::Converged;
      break;
    }
    previous = rec.objective;
  }
  result.x = std::move(state.x);
  return result;
}

bool objective_rising(const IterationTrace& trace, double rel_tol) {
  if (trace.records.empty()) return false;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.records) best = std::min(best, r.objective);
  return trace.records.back().objective > best * (1.0 + rel_tol);
}

double wnorm_sq(const Image& v, const WeightingFilter& filter) {
  if (v.width() != filter.width() || v.height() != filter.height())
    throw std::invalid_argument("wnorm_sq: dimension mismatch");
  const Image c = dct2(v);
  double s = 0.0;
  for (std::size_t f = 0; f < c.size(); ++f) s += c.data()[f] * c.data()[f] / filter.phi()[f];
  return s;
}

double surrogate_Q(const Image& x, const Image& z, const Problem& problem,
                   const SolverConfig& cfg) {
  const EffectiveParams params = effective_params(cfg, problem);
  const Image diff = x - z;
  double quad = 0.0;
  if (params.n == 1) {
    quad = dot(diff, diff);
  } else {
    if (!problem.filter) throw std::invalid_argument("surrogate_Q: W_n filter required for n > 1");
    quad = wnorm_sq(diff, *problem.filter);
  }
  const double fz = data_term(problem.psf, z, problem.b);
  const Image g = gradient(problem.psf, z, problem.b);
  const double reg =
      cfg.lambda == 0.0 ? 0.0 : params.p * cfg.lambda * l1_norm_wavelet(x, cfg.wavelet_levels);
  return fz + dot(diff, g) + quad / (2.0 * cfg.eta) + reg;
}

RateReport rate_check(const IterationTrace& trace, const Image& x0, const Image& x_star,
                      double objective_star, const WeightingFilter* filter, double eta) {
  RateReport report;
  report.constant = 2.0 / eta;
  report.convention =
      "F(x_k) - F(x*) <= (2/eta) * ||x0 - x*||^2_{W_n^-1} / (k+1)^2, checked for k > 1";
  const Image d = x0 - x_star;
  const double radius = filter != nullptr ? wnorm_sq(d, *filter) : dot(d, d);
  for (const auto& r : trace.records) {
    if (r.iter <= 1) continue;
    const double bound = report.constant * radius / ((r.iter + 1.0) * (r.iter + 1.0));
    const double gap = r.objective - objective_star;
    const double ratio = bound > 0.0 ? gap / bound : (gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (report.worst_iter == 0 || ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.worst_iter = r.iter;
    }
    if (gap > bound) {
      ++report.violations;
      report.passed = false;
    }
  }
  return report;
}

}  // namespace efista
