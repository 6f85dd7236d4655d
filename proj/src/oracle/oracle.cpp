#include "efista/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "efista/errors.hpp"

namespace efista::oracle {
namespace {

void require_oracle_scale(int width, int height) {
  if (width * height > kMaxPixels)
    throw std::invalid_argument("oracle limited to " + std::to_string(kMaxPixels) + " pixels");
}

int mirror_half(int i, int n) {
  // x[-1] = x[0], x[n] = x[n-1]; period 2n.
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

int mirror_whole(int i, int n) {
  // x[-1] = x[1], x[n] = x[n-2]; period 2n-2.
  if (n == 1) return 0;
  const int period = 2 * n - 2;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

// CDF 9/7 analysis filters normalized for sqrt(2) DC / Nyquist gain.
constexpr double kLow[5] = {0.852698679009404, 0.377402855612654, -0.110624404418420,
                            -0.023849465019380, 0.037828455506995};
constexpr double kHigh[4] = {0.788485616405665, -0.418092273222212, -0.040689417609558,
                             0.064538882628938};

Eigen::MatrixXd analysis_1d(int n) {
  const int m = n / 2;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < m; ++k) {
    for (int j = -4; j <= 4; ++j) T(k, mirror_whole(2 * k + j, n)) += kLow[std::abs(j)];
    for (int j = -3; j <= 3; ++j) T(m + k, mirror_whole(2 * k + 1 + j, n)) += kHigh[std::abs(j)];
  }
  return T;
}

}  // namespace

Eigen::VectorXd to_vector(const Image& x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

Image to_image(const Eigen::VectorXd& v, int width, int height) {
  Image out(width, height);
  Eigen::Map<Eigen::VectorXd>(out.data(), v.size()) = v;
  return out;
}

DenseOperator densify_blur(const Psf& psf, int width, int height) {
  require_oracle_scale(width, height);
  const int N = width * height;
  DenseOperator A{Eigen::MatrixXd(N, N)};
  for (int j = 0; j < N; ++j) {
    Image e(width, height, 0.0);
    e.data()[j] = 1.0;
    A.entries.col(j) = to_vector(blur_apply(psf, e));
  }
  return A;
}

DenseOperator direct_blur_matrix(const Psf& psf, int width, int height) {
  require_oracle_scale(width, height);
  const int N = width * height;
  const int r = psf.radius();
  DenseOperator A{Eigen::MatrixXd::Zero(N, N)};
  for (int i = 0; i < height; ++i)
    for (int j = 0; j < width; ++j)
      for (int u = 0; u < psf.size(); ++u)
        for (int v = 0; v < psf.size(); ++v) {
          const int si = mirror_half(i + u - r, height);
          const int sj = mirror_half(j + v - r, width);
          A.entries(i * width + j, si * width + sj) += psf(u, v);
        }
  return A;
}

DenseOperator dense_Wn(const DenseOperator& A, double eta, int n) {
  if (n < 1 || n > 16) throw std::invalid_argument("dense_Wn: n must be in [1, 16]");
  const Eigen::MatrixXd G = eta * (A.entries.transpose() * A.entries);
  const Eigen::Index N = G.rows();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(N, N);
  double binom = 1.0;
  for (int i = 1; i <= n; ++i) {
    binom = binom * (n - i + 1) / i;  // C(n, i)
    W += ((i % 2 == 1) ? binom : -binom) * power;
    power = power * G;
  }
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(N, N);
  const Eigen::MatrixXd step = Eigen::MatrixXd::Identity(N, N) - G;
  for (int i = 0; i < n; ++i) lhs = lhs * step;
  const Eigen::MatrixXd rhs = Eigen::MatrixXd::Identity(N, N) - W * G;
  const double err = (lhs - rhs).cwiseAbs().maxCoeff();
  if (err > 1e-10)
    throw NumericError("dense_Wn: (I - eta A^T A)^n != I - eta W_n A^T A (err " +
                       std::to_string(err) + ")");
  return {W};
}

DenseOperator dense_wavelet_analysis(int width, int height, int levels) {
  require_oracle_scale(width, height);
  if (levels < 1 || width % (1 << levels) != 0 || height % (1 << levels) != 0)
    throw std::invalid_argument("dense_wavelet_analysis: bad levels");
  const int N = width * height;
  Eigen::MatrixXd total = Eigen::MatrixXd::Identity(N, N);
  for (int l = 0; l < levels; ++l) {
    const int bw = width >> l;
    const int bh = height >> l;
    const Eigen::MatrixXd Tw = analysis_1d(bw);
    const Eigen::MatrixXd Th = analysis_1d(bh);
    Eigen::MatrixXd stage = Eigen::MatrixXd::Identity(N, N);
    for (int r = 0; r < bh; ++r)
      for (int c = 0; c < bw; ++c) {
        const int in = r * width + c;
        stage.col(in).setZero();
        for (int rr = 0; rr < bh; ++rr)
          for (int cc = 0; cc < bw; ++cc) stage(rr * width + cc, in) = Th(rr, r) * Tw(cc, c);
      }
    total = stage * total;
  }
  return {total};
}

std::vector<bool> approximation_mask(int width, int height, int levels) {
  std::vector<bool> mask(static_cast<std::size_t>(width) * height, false);
  for (int r = 0; r < (height >> levels); ++r)
    for (int c = 0; c < (width >> levels); ++c) mask[r * width + c] = true;
  return mask;
}

double soft_threshold_scalar(double v, double gamma) {
  if (v > gamma) return v - gamma;
  if (v < -gamma) return v + gamma;
  return 0.0;
}

DenseProblem make_dense_problem(const Psf& psf, const Image& b, double eta, int n, int levels) {
  DenseProblem p;
  p.A = direct_blur_matrix(psf, b.width(), b.height());
  p.b = to_vector(b);
  p.W = dense_Wn(p.A, eta, n);
  p.analysis = dense_wavelet_analysis(b.width(), b.height(), levels);
  p.synthesis = {p.analysis.entries.inverse()};
  p.approx = approximation_mask(b.width(), b.height(), levels);
  return p;
}

DenseState dense_initial(const Eigen::VectorXd& x0) { return {x0, x0, x0, 1.0}; }

DenseState dense_solver_step(const DenseState& s, const DenseProblem& prob,
                             const DenseStepConfig& cfg) {
  const Eigen::MatrixXd& A = prob.A.entries;
  const Eigen::VectorXd grad = A.transpose() * (A * s.y - prob.b);
  const Eigen::VectorXd v = s.y - cfg.eta * (prob.W.entries * grad);
  const double gamma = cfg.p * cfg.lambda * cfg.eta;

  DenseState next;
  if (gamma > 0.0) {
    Eigen::VectorXd c = prob.analysis.entries * v;
    for (Eigen::Index i = 0; i < c.size(); ++i)
      if (!prob.approx[i]) c(i) = soft_threshold_scalar(c(i), gamma);
    next.x = prob.synthesis.entries * c;
  } else {
    next.x = v;
  }
  next.alpha = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * s.alpha * s.alpha));
  next.y = cfg.momentum ? Eigen::VectorXd(next.x + ((s.alpha - 1.0) / next.alpha) * (next.x - s.x))
                        : next.x;
  next.x_prev = s.x;
  return next;
}

double dense_objective(const DenseProblem& prob, const Eigen::VectorXd& x, double lambda) {
  const double f = 0.5 * (prob.A.entries * x - prob.b).squaredNorm();
  const Eigen::VectorXd c = prob.analysis.entries * x;
  double l1 = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (!prob.approx[i]) l1 += std::fabs(c(i));
  return f + lambda * l1;
}

Eigen::VectorXd normal_equations_solve(const DenseOperator& A, const Eigen::VectorXd& b,
                                       double ridge) {
  const Eigen::MatrixXd M =
      A.entries.transpose() * A.entries + ridge * Eigen::MatrixXd::Identity(A.cols(), A.cols());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw NumericError("normal_equations_solve: singular system");
  return lu.solve(A.entries.transpose() * b);
}

double power_iteration(const Eigen::MatrixXd& sym, int max_iters, double rel_tol) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(sym.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += 0.01 * std::sin(1.0 + i);
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd w = sym * v;
    const double rq = v.dot(w);
    v = w.normalized();
    if (it > 0 && std::fabs(rq - est) <= rel_tol * std::fabs(rq)) return rq;
    est = rq;
  }
  throw NumericError("oracle power iteration did not converge");
}

Eigen::VectorXd prox_l1_analysis(const Eigen::VectorXd& x, const Eigen::MatrixXd& M, double gamma,
                                 int iters) {
  // min_{|z|_inf <= gamma} 0.5 ||x - M^T z||^2, then u = x - M^T z.
  const double L = power_iteration(M * M.transpose(), 100000, 1e-12);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(M.rows());
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd g = -M * (x - M.transpose() * z);
    z = (z - g / L).cwiseMax(-gamma).cwiseMin(gamma);
  }
  return x - M.transpose() * z;
}

}  // namespace efista::oracle
