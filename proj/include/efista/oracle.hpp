#pragma once

// Brute-force dense references for tiny images (at most 16x16, i.e.
// 256x256 matrices). Nothing here routes through the fast paths it is used
// to validate, except densify_blur, which by definition materializes
// blur_apply and is itself cross-checked against direct_blur_matrix.

#include <Eigen/Dense>

#include <vector>

#include "efista/image.hpp"
#include "efista/linop.hpp"

namespace efista::oracle {

inline constexpr int kMaxPixels = 256;

struct DenseOperator {
  Eigen::MatrixXd entries;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

Eigen::VectorXd to_vector(const Image& x);
Image to_image(const Eigen::VectorXd& v, int width, int height);

/// Column j is blur_apply(psf, e_j).
DenseOperator densify_blur(const Psf& psf, int width, int height);
/// A assembled entry by entry from the correlation sum with half-sample
/// mirrored indices (independent of blur_apply).
DenseOperator direct_blur_matrix(const Psf& psf, int width, int height);

/// Literal sum_{i=1..n} C(n,i)(-1)^(i-1) (eta A^T A)^(i-1) by repeated
/// products. Throws NumericError if (I - eta A^T A)^n and
/// I - eta W_n A^T A differ by more than 1e-10 (max abs).
DenseOperator dense_Wn(const DenseOperator& A, double eta, int n);

/// CDF 9/7 analysis as an explicit matrix, built from the published
/// (near-orthonormal) filter taps with whole-sample symmetric extension
/// and composed level by level in the Mallat layout.
DenseOperator dense_wavelet_analysis(int width, int height, int levels);
/// true for coefficients in the coarsest approximation band.
std::vector<bool> approximation_mask(int width, int height, int levels);

double soft_threshold_scalar(double v, double gamma);

struct DenseState {
  Eigen::VectorXd x;
  Eigen::VectorXd x_prev;
  Eigen::VectorXd y;
  double alpha = 1.0;
};

struct DenseStepConfig {
  double eta = 1.0;
  double lambda = 0.0;
  double p = 1.0;
  bool momentum = true;
};

/// Everything one dense step needs, precomputed.
struct DenseProblem {
  DenseOperator A;
  Eigen::VectorXd b;
  DenseOperator W;          ///< identity for n = 1
  DenseOperator analysis;   ///< Phi
  DenseOperator synthesis;  ///< Phi^{-1}
  std::vector<bool> approx;
};

DenseProblem make_dense_problem(const Psf& psf, const Image& b, double eta, int n, int levels);

DenseState dense_initial(const Eigen::VectorXd& x0);
DenseState dense_solver_step(const DenseState& s, const DenseProblem& prob, const DenseStepConfig& cfg);

double dense_objective(const DenseProblem& prob, const Eigen::VectorXd& x, double lambda);

/// (A^T A + ridge I)^{-1} A^T b. Throws NumericError for a singular system.
Eigen::VectorXd normal_equations_solve(const DenseOperator& A, const Eigen::VectorXd& b,
                                       double ridge);

/// Largest eigenvalue of a symmetric matrix by power iteration.
double power_iteration(const Eigen::MatrixXd& sym, int max_iters = 100000, double rel_tol = 1e-14);

/// argmin_u 0.5||u - x||^2 + gamma ||M u||_1 by projected gradient on the
/// dual (box-constrained) problem.
Eigen::VectorXd prox_l1_analysis(const Eigen::VectorXd& x, const Eigen::MatrixXd& M, double gamma,
                                 int iters = 200000);

}  // namespace efista::oracle
