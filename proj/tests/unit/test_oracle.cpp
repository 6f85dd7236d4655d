#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "efista/errors.hpp"
#include "efista/oracle.hpp"
#include "efista/weighting.hpp"
#include "helpers.hpp"

using namespace efista;

TEST_CASE("dense blur matrix") {
  const auto I = oracle::direct_blur_matrix(Psf::identity(), 6, 5);
  CHECK(I.entries.isIdentity(0.0));
  const Psf g = make_gaussian_psf(5, 1.3);
  const auto A = oracle::direct_blur_matrix(g, 8, 8);
  CHECK((A.entries.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-14);
  CHECK((oracle::densify_blur(g, 8, 8).entries - A.entries).cwiseAbs().maxCoeff() <= 1e-14);
  for (int t = 0; t < 100; ++t) {
    const Image x = test::random_image(8, 8, t);
    CHECK((A.entries * oracle::to_vector(x) - oracle::to_vector(blur_apply(g, x))).cwiseAbs().maxCoeff() <=
          1e-14);
  }
  CHECK_THROWS(oracle::direct_blur_matrix(g, 32, 32));
}

TEST_CASE("dense W_n") {
  const Psf g = make_gaussian_psf(3, 1.0);
  const auto A = oracle::direct_blur_matrix(g, 8, 8);
  const Eigen::MatrixXd AtA = A.entries.transpose() * A.entries;
  CHECK(oracle::dense_Wn(A, 1.0, 1).entries.isIdentity(1e-15));
  const Eigen::MatrixXd W2 = 2.0 * Eigen::MatrixXd::Identity(64, 64) - 0.7 * AtA;
  CHECK((oracle::dense_Wn(A, 0.7, 2).entries - W2).cwiseAbs().maxCoeff() <= 1e-14);

  // Eigenvalues equal phi(mu) of the spectral filter.
  const WeightingFilter f = build_filter(spectral_decompose(g, 1.0, 8, 8), 8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(oracle::dense_Wn(A, 1.0, 8).entries);
  std::vector<double> dense(eig.eigenvalues().data(), eig.eigenvalues().data() + 64);
  std::vector<double> fast = f.phi();
  std::sort(dense.begin(), dense.end());
  std::sort(fast.begin(), fast.end());
  for (int i = 0; i < 64; ++i) CHECK(std::abs(dense[i] - fast[i]) <= 1e-10);
}

TEST_CASE("dense solver step reductions") {
  const Psf g = make_gaussian_psf(3, 1.0);
  const Image b = test::random_image(8, 8, 3);
  const auto prob = oracle::make_dense_problem(g, b, 1.0, 4, 3);
  const Eigen::VectorXd x0 = oracle::to_vector(test::random_image(8, 8, 4));

  // lambda = 0, no momentum: exactly four plain gradient steps.
  oracle::DenseState s = oracle::dense_solver_step(oracle::dense_initial(x0), prob, {1.0, 0.0, 1.0, false});
  Eigen::VectorXd x = x0;
  const Eigen::MatrixXd& A = prob.A.entries;
  for (int i = 0; i < 4; ++i) x -= A.transpose() * (A * x - prob.b);
  CHECK((s.x - x).cwiseAbs().maxCoeff() <= 1e-12);

  // n = 1, p = 1: textbook FISTA written out here.
  const auto p1 = oracle::make_dense_problem(g, b, 1.0, 1, 3);
  oracle::DenseState d = oracle::dense_initial(x0);
  Eigen::VectorXd xk = x0, xprev = x0, y = x0;
  double t = 1.0;
  for (int k = 0; k < 10; ++k) {
    d = oracle::dense_solver_step(d, p1, {1.0, 0.0, 1.0, true});
    const Eigen::VectorXd xn = y - A.transpose() * (A * y - p1.b);
    const double tn = (1 + std::sqrt(1 + 4 * t * t)) / 2;
    y = xn + ((t - 1) / tn) * (xn - xk);
    xk = xn;
    t = tn;
  }
  CHECK((d.x - xk).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("normal equations") {
  const Image b = test::random_image(6, 6, 5);
  const auto I = oracle::direct_blur_matrix(Psf::identity(), 6, 6);
  CHECK((oracle::normal_equations_solve(I, oracle::to_vector(b), 0.0) - oracle::to_vector(b)).norm() <= 1e-14);

  const Psf wc = Psf::from_taps(3, {0, 0.1, 0, 0.1, 0.6, 0.1, 0, 0.1, 0});
  const auto A = oracle::direct_blur_matrix(wc, 8, 8);
  const Eigen::VectorXd bv = oracle::to_vector(test::random_image(8, 8, 6));
  const Eigen::VectorXd xs = oracle::normal_equations_solve(A, bv, 0.0);
  CHECK((A.entries.transpose() * (A.entries * xs - bv)).norm() <= 1e-9);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(64);
  for (int k = 0; k < 5000; ++k) x -= A.entries.transpose() * (A.entries * x - bv);
  CHECK((x - xs).cwiseAbs().maxCoeff() <= 1e-6);

  Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(4, 4);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(oracle::normal_equations_solve({singular}, Eigen::VectorXd::Ones(4), 0.0), NumericError);
}

TEST_CASE("dense power iteration") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m.diagonal() << 1.0, 4.0, 2.5;
  CHECK(oracle::power_iteration(m) == doctest::Approx(4.0));
}

TEST_CASE("analysis prox oracle on an orthonormal transform") {
  // With M = I the exact prox is plain soft thresholding.
  const Eigen::VectorXd x = oracle::to_vector(test::random_image(4, 4, 7, -1, 1));
  const Eigen::VectorXd u = oracle::prox_l1_analysis(x, Eigen::MatrixXd::Identity(16, 16), 0.3);
  for (int i = 0; i < 16; ++i) CHECK(u[i] == doctest::Approx(oracle::soft_threshold_scalar(x[i], 0.3)).epsilon(1e-8));
}
