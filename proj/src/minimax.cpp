#include "wfpca/minimax.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wfpca/estimator.hpp"
#include "wfpca/sampling.hpp"

namespace wfpca::minimax {

namespace {

using processes::KLSpec;
using processes::Mode;
using processes::Term;

double logdet_pd(const Eigen::MatrixXd& m, const char* what) {
  const auto eig = estimator::symmetric_eigen(m);
  const Eigen::Index n = eig.values.size();
  if (n == 0) return 0.0;
  if (!(eig.values(n - 1) > 0.0)) {
    throw NotPositiveDefinite(std::string(what) + " is not positive definite (min eigenvalue " +
                              std::to_string(eig.values(n - 1)) + ")");
  }
  return eig.values.array().log().sum();
}

void check_constraints(long long p, double alpha, int ell) {
  if (!is_dyadic(p)) throw DyadicGridError(p);
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (ell < 1) throw InvalidArgument("ell must be at least 1");
  const double p_min = std::max(std::pow(2.0 + std::numbers::sqrt2, 1.0 / (2.0 * alpha)), 4.0);
  if (static_cast<double>(p) < p_min) {
    throw InvalidArgument("p = " + std::to_string(p) + " is below the admissible minimum " + std::to_string(p_min));
  }
  if (2 * (ell + 1) >= p) throw InvalidArgument("need ell + 1 < p / 2");
}

double geometric_eigenvalue(int j) { return std::pow(5.0, -j); }

}  // namespace

double grid_sine_gram(long long p, int j, int jp) {
  if (p < 4) throw InvalidArgument("grid sine gram needs p >= 4");
  if (j < 1 || jp < 1 || 2LL * j >= p || 2LL * jp >= p) {
    throw InvalidArgument("sine indices must satisfy 1 <= j < p/2");
  }
  const Mode a = Mode::sine(j);
  const Mode b = Mode::sine(jp);
  double acc = 0.0;
  for (long long k = 0; k < p; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(p);
    acc += a(t) * b(t);
  }
  return acc;
}

ObsCovariance observation_covariance(const KLSpec& spec, long long p, double sigma2, double grid_offset) {
  if (p < 1) throw InvalidArgument("observation covariance needs p >= 1");
  if (!(sigma2 >= 0.0)) throw InvalidArgument("noise variance must be nonnegative");
  std::vector<double> points(static_cast<std::size_t>(p));
  for (long long k = 0; k < p; ++k) {
    points[static_cast<std::size_t>(k)] = (static_cast<double>(k) + grid_offset) / static_cast<double>(p);
  }
  const Eigen::MatrixXd psi = sampling::mode_matrix(spec, points);
  Eigen::MatrixXd weighted = psi;
  for (Eigen::Index j = 0; j < psi.cols(); ++j) weighted.col(j) *= spec.eigenvalues[static_cast<std::size_t>(j)];
  ObsCovariance out;
  out.sigma2 = sigma2;
  out.matrix = weighted * psi.transpose();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  out.matrix.diagonal().array() += sigma2;
  return out;
}

double hellinger_affinity(const ObsCovariance& g0, const ObsCovariance& g1, const std::optional<Eigen::VectorXd>& mu0,
                          const std::optional<Eigen::VectorXd>& mu1) {
  if (g0.matrix.rows() != g1.matrix.rows() || g0.matrix.rows() != g0.matrix.cols() ||
      g1.matrix.rows() != g1.matrix.cols()) {
    throw GridMismatch("observation covariances have different sizes");
  }
  const Eigen::MatrixXd mid = 0.5 * (g0.matrix + g1.matrix);
  const double ld0 = logdet_pd(g0.matrix, "first covariance");
  const double ld1 = logdet_pd(g1.matrix, "second covariance");
  const double ldm = logdet_pd(mid, "averaged covariance");
  double log_a = 0.25 * (ld0 + ld1) - 0.5 * ldm;

  if (mu0 || mu1) {
    const Eigen::Index p = mid.rows();
    const Eigen::VectorXd m0 = mu0.value_or(Eigen::VectorXd::Zero(p));
    const Eigen::VectorXd m1 = mu1.value_or(Eigen::VectorXd::Zero(p));
    if (m0.size() != p || m1.size() != p) throw GridMismatch("mean vectors do not match the covariance size");
    const Eigen::VectorXd d = m0 - m1;
    log_a -= 0.125 * d.dot(mid.ldlt().solve(d));
  }
  return std::min(1.0, std::exp(log_a));
}

double hellinger_sq(double affinity, long long n) {
  if (n < 1) throw InvalidArgument("sample size must be at least 1");
  if (!(affinity >= 0.0 && affinity <= 1.0)) throw InvalidArgument("affinity must lie in [0,1]");
  return 2.0 - 2.0 * std::pow(affinity, static_cast<double>(n));
}

HypothesisPair aliasing_hypotheses(long long p, double alpha, int ell) {
  check_constraints(p, alpha, ell);
  const double r = std::pow(static_cast<double>(p), -2.0 * alpha);
  const double keep = 1.0 - r;
  const double osc = std::sqrt(r * (2.0 - r));

  std::vector<double> lam;
  std::vector<Mode> modes;
  for (int j = 1; j < ell; ++j) {
    lam.push_back(geometric_eigenvalue(j));
    modes.push_back(Mode::sine(j));
  }
  const double base = geometric_eigenvalue(ell);

  auto lam0 = lam;
  auto modes0 = modes;
  lam0.push_back(base);
  modes0.push_back(Mode::constant());

  lam.push_back(base / (keep * keep));
  modes.push_back(Mode::mixture({Term{Term::Kind::Constant, 0, keep}, Term{Term::Kind::Sine, static_cast<int>(p), osc}}));

  return {KLSpec::make(std::move(lam0), std::move(modes0)), KLSpec::make(std::move(lam), std::move(modes))};
}

HypothesisPair rotation_hypotheses(int ell, double b) {
  if (ell < 1) throw InvalidArgument("ell must be at least 1");
  if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("rotation parameter b must lie in (0,1)");
  const double c = std::sqrt(1.0 - b * b);
  std::vector<double> lam;
  std::vector<Mode> modes0;
  std::vector<Mode> modes1;
  for (int j = 1; j <= ell + 1; ++j) {
    lam.push_back(geometric_eigenvalue(j));
    modes0.push_back(Mode::sine(j));
    if (j == ell) {
      modes1.push_back(Mode::mixture({Term{Term::Kind::Sine, ell, b}, Term{Term::Kind::Sine, ell + 1, -c}}));
    } else if (j == ell + 1) {
      modes1.push_back(Mode::mixture({Term{Term::Kind::Sine, ell + 1, b}, Term{Term::Kind::Sine, ell, c}}));
    } else {
      modes1.push_back(Mode::sine(j));
    }
  }
  return {KLSpec::make(lam, std::move(modes0)), KLSpec::make(lam, std::move(modes1))};
}

double verify_aliasing_indistinguishable(long long p, double alpha, double sigma2, int ell, long long n,
                                         double grid_offset) {
  if (!(sigma2 > 0.0)) throw InvalidArgument("noise variance must be positive");
  const auto pair = aliasing_hypotheses(p, alpha, ell);
  const auto g0 = observation_covariance(pair.h0, p, sigma2, grid_offset);
  const auto g1 = observation_covariance(pair.h1, p, sigma2, grid_offset);
  return hellinger_sq(hellinger_affinity(g0, g1), n);
}

}  // namespace wfpca::minimax
