#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wfpca/estimator.hpp"
#include "wfpca/metrics.hpp"

using namespace wfpca;
using namespace wfpca::estimator;
using processes::KernelSpec;

namespace {

const wavelet::ScalingBasis& coif2() {
  static const auto b = wavelet::cascade(wavelet::coiflet_filter(2), 12);
  return b;
}

Eigen::MatrixXd random_symmetric(int p, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) a(i, j) = a(j, i) = z(rng);
  }
  return a;
}

}  // namespace

TEST_CASE("single noiseless curve gives the rank-1 array y y^T / p") {
  const auto spec = processes::fourier_model(1.0);
  const auto s = sampling::simulate(spec, 1, sampling::GridDesign::make(16), 0.0, 4);
  const auto cov = empirical_coeff_covariance(s);
  const Eigen::VectorXd y = s.data.row(0).transpose();
  CHECK(cov.level == 4);
  CHECK(((cov.coeffs - y * y.transpose() / 16.0).array().abs() < 1e-14).all());

  const auto fine = metrics::fine_grid(256);
  const auto est = estimate_fpca(s, coif2(), 1, fine);
  CHECK(est[0].lambda_hat == doctest::Approx(y.squaredNorm() / 16.0));
  const Eigen::VectorXd u = y.normalized();
  CHECK(std::abs(std::abs(est[0].coeffs.dot(u)) - 1.0) < 1e-12);
}

TEST_CASE("debiasing subtracts sigma^2 / p on the diagonal") {
  const auto s = sampling::simulate(processes::aliasing_model(8, 1.0), 30, sampling::GridDesign::make(8), 0.1, 8);
  const auto raw = empirical_coeff_covariance(s, false);
  const auto deb = empirical_coeff_covariance(s, true);
  CHECK(deb.debiased);
  CHECK_FALSE(raw.debiased);
  const Eigen::MatrixXd diff = raw.coeffs - deb.coeffs;
  CHECK(((diff - 0.1 / 8.0 * Eigen::MatrixXd::Identity(8, 8)).array().abs() < 1e-15).all());
  CHECK((deb.coeffs.array() == deb.coeffs.transpose().array()).all());
}

TEST_CASE("pure noise coefficient arrays average to zero") {
  const long long p = 8;
  const int reps = 200;
  const auto spec = processes::KLSpec::make({1e-300}, {processes::Mode::constant()});
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(p, p);
  for (int r = 0; r < reps; ++r) {
    const auto s = sampling::simulate(spec, 20, sampling::GridDesign::make(p), 0.1, 99, r);
    const auto c = empirical_coeff_covariance(s).coeffs;
    sum += c;
    sq += c.cwiseProduct(c);
  }
  const Eigen::MatrixXd mean = sum / reps;
  const Eigen::MatrixXd var = (sq / reps - mean.cwiseProduct(mean)) * reps / (reps - 1.0);
  const Eigen::MatrixXd se = (var / reps).cwiseSqrt();
  CHECK((mean.cwiseAbs().array() <= 5.0 * se.array()).all());
}

TEST_CASE("population coefficient arrays") {
  const auto a = population_coeff_covariance(KernelSpec{processes::aliasing_model(8, 1.0)}, 8);
  for (int k = 0; k < 8; ++k) {
    for (int kp = 0; kp < 8; ++kp) {
      const double expect =
          (2 * 0.6 * std::sin(2 * std::numbers::pi * k / 8.0) * std::sin(2 * std::numbers::pi * kp / 8.0) + 0.25) / 8.0;
      CHECK(std::abs(a.coeffs(k, kp) - expect) < 1e-13);
    }
  }
  CHECK(std::holds_alternative<PopulationSource>(a.source));

  const auto bm = population_coeff_covariance(KernelSpec{processes::BrownianMotion{}}, 4);
  CHECK(bm.coeffs(0, 0) == 0.0);
  double trace = 0.0;
  for (int k = 0; k < 4; ++k) trace += (k / 4.0) / 4.0;
  CHECK(bm.coeffs.trace() == doctest::Approx(trace));

  // Population arrays are PSD up to rounding.
  const auto eig = symmetric_eigen(population_coeff_covariance(KernelSpec{processes::BrownianBridge{}}, 32).coeffs);
  CHECK(eig.values.minCoeff() > -1e-10);
}

TEST_CASE("eigendecomposition") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 5; ++i) d(i, i) = 5.0 - i;
  CoeffCovariance cov{d, 0, false, EmpiricalSource{}};
  const auto est = eigendecompose(cov, 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(est[static_cast<std::size_t>(i)].index == i + 1);
    CHECK(est[static_cast<std::size_t>(i)].lambda_hat == doctest::Approx(5.0 - i));
    CHECK(std::abs(est[static_cast<std::size_t>(i)].coeffs(i)) == doctest::Approx(1.0));
    CHECK(est[static_cast<std::size_t>(i)].coeffs(i) > 0.0);
  }
  CHECK_THROWS_AS(eigendecompose(cov, 6), InvalidArgument);
  CHECK_THROWS_AS(eigendecompose(cov, 0), InvalidArgument);

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_symmetric(8, rng);
    const auto eig = symmetric_eigen(a);
    Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(8, 8);
    for (int i = 0; i < 8; ++i) {
      CHECK(std::abs(eig.vectors.col(i).norm() - 1.0) < 1e-12);
      if (i > 0) CHECK(eig.values(i) <= eig.values(i - 1));
      rebuilt += eig.values(i) * eig.vectors.col(i) * eig.vectors.col(i).transpose();
    }
    CHECK((rebuilt - a).norm() < 1e-10);
  }
}

TEST_CASE("ties are reported") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(4, 4);
  d(0, 0) = 3.0;
  const auto eig = symmetric_eigen(d);
  CHECK_FALSE(eig.tied[0]);
  CHECK(eig.tied[1]);
  CHECK(eig.tied[2]);
  CHECK(eig.tied[3]);
}

TEST_CASE("population aliasing eigenvalues") {
  const auto spec = processes::aliasing_model(8, 1.0);
  const auto est = eigendecompose(population_coeff_covariance(KernelSpec{spec}, 8), 2);
  const double r = 1.0 / 64.0;
  CHECK(est[0].lambda_hat == doctest::Approx(0.60).epsilon(0.02));
  CHECK(est[1].lambda_hat == doctest::Approx(spec.eigenvalues[1] * (1 - r) * (1 - r)).epsilon(0.02));
  // The second eigenvector is flat on the grid.
  for (int k = 0; k < 8; ++k) CHECK(std::abs(est[1].coeffs(k) - 1.0 / std::sqrt(8.0)) < 1e-12);
}

TEST_CASE("reconstruction") {
  const auto& b = coif2();
  EigenEstimate flat;
  flat.coeffs = Eigen::VectorXd::Constant(32, 1.0 / std::sqrt(32.0));
  std::vector<double> pts;
  for (int i = 0; i <= 80; ++i) pts.push_back(0.1 + 0.01 * i);
  for (double v : reconstruct(flat, b, pts)) CHECK(v == doctest::Approx(1.0).epsilon(1e-2));

  EigenEstimate first;
  first.coeffs = Eigen::VectorXd::Zero(32);
  first.coeffs(0) = 1.0;
  const std::vector<double> far{0.5, 0.9};
  for (double v : reconstruct(first, b, far)) CHECK(v == 0.0);

  const std::vector<double> bad{0.5, 1.2};
  CHECK_THROWS_AS(reconstruct(flat, b, bad), InvalidArgument);
  const std::vector<double> neg{-0.1};
  CHECK_THROWS_AS(reconstruct(flat, b, neg), InvalidArgument);
}

TEST_CASE("population aliasing reconstruction sits near the constant") {
  const auto spec = processes::aliasing_model(8, 1.0);
  const auto fine = metrics::fine_grid();
  auto est = eigendecompose(population_coeff_covariance(KernelSpec{spec}, 8), 2);
  const auto psi = reconstruct(est[1], coif2(), fine);
  std::vector<double> truth(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) truth[i] = spec.modes[1](fine[i]);
  const auto aligned = metrics::align_sign(psi, truth);
  const double err = metrics::l2_error(psi, aligned.truth);
  CHECK(err == doctest::Approx(2.0 / 64.0).epsilon(0.1));
}

TEST_CASE("sign flips do not change aligned errors") {
  const auto spec = processes::fourier_model(1.0);
  const auto s = sampling::simulate(spec, 200, sampling::GridDesign::make(32), 0.1, 6);
  const auto fine = metrics::fine_grid();
  auto est = estimate_fpca(s, coif2(), 3, fine);
  for (std::size_t l = 0; l < est.size(); ++l) {
    std::vector<double> truth(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) truth[i] = spec.modes[l](fine[i]);
    auto flipped = est[l];
    flipped.coeffs = -flipped.coeffs;
    const auto neg = reconstruct(flipped, coif2(), fine);
    for (std::size_t i = 0; i < fine.size(); ++i) CHECK(neg[i] == -est[l].samples[i]);
    const double e1 = metrics::l2_error(est[l].samples, metrics::align_sign(est[l].samples, truth).truth);
    const double e2 = metrics::l2_error(neg, metrics::align_sign(neg, truth).truth);
    CHECK(e1 == e2);
  }
}

TEST_CASE("estimation is deterministic") {
  const auto s = sampling::simulate(processes::fourier_model(1.0), 100, sampling::GridDesign::make(16), 0.1, 12);
  const auto fine = metrics::fine_grid(512);
  const auto a = estimate_fpca(s, coif2(), 2, fine);
  const auto b = estimate_fpca(s, coif2(), 2, fine);
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(a[l].lambda_hat == b[l].lambda_hat);
    CHECK(a[l].samples == b[l].samples);
  }
}

TEST_CASE("coefficient array error shrinks like n^-1/2") {
  const auto spec = processes::aliasing_model(8, 1.0);
  const auto pop = population_coeff_covariance(KernelSpec{spec}, 8).coeffs;
  std::vector<metrics::Point> pts;
  for (long long n = 256; n <= 16384; n *= 2) {
    double acc = 0.0;
    const int reps = 10;
    for (int r = 0; r < reps; ++r) {
      const auto s = sampling::simulate(spec, n, sampling::GridDesign::make(8), 0.1, 555, r);
      acc += (empirical_coeff_covariance(s).coeffs - pop).norm();
    }
    pts.emplace_back(static_cast<double>(n), acc / reps);
  }
  const auto fit = metrics::loglog_slope(pts);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.3));
}

TEST_CASE("fourier model second eigenfunction regression baseline") {
  const auto spec = processes::fourier_model(1.0);
  const auto fine = metrics::fine_grid();
  std::vector<double> truth(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) truth[i] = spec.modes[1](fine[i]);
  double acc = 0.0;
  const int reps = 20;
  for (int r = 0; r < reps; ++r) {
    const auto s = sampling::simulate(spec, 4096, sampling::GridDesign::make(256), 0.1, 4242, r);
    const auto est = estimate_fpca(s, coif2(), 2, fine);
    acc += metrics::l2_error(est[1].samples, metrics::align_sign(est[1].samples, truth).truth);
  }
  CHECK(acc / reps < 0.05);
}

TEST_CASE("coefficient CSV export") {
  const auto c = population_coeff_covariance(KernelSpec{processes::BrownianMotion{}}, 4);
  CHECK_NOTHROW(write_coeff_csv(c, std::string(WFPCA_TEST_DATA_DIR) + "/coeffs.csv"));
  CHECK_THROWS_AS(write_coeff_csv(c, "/nonexistent-dir/c.csv"), IoError);
}
