#include "wfpca/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace wfpca::estimator {

namespace {

constexpr double kOrientTol = 1e-8;
constexpr double kTieTol = 1e-12;

void mirror_lower(Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) m(j, i) = m(i, j);
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("eigendecomposition needs a square array");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");

  const Eigen::Index p = a.rows();
  const Eigen::VectorXd& vals = solver.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return vals(x) > vals(y); });

  SymmetricEigen out;
  out.values.resize(p);
  out.vectors.resize(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = vals(src);
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    for (Eigen::Index k = 0; k < p; ++k) {
      if (std::abs(v(k)) > kOrientTol) {
        if (v(k) < 0.0) v = -v;
        break;
      }
    }
    out.vectors.col(i) = v;
  }

  const double scale = std::max(1.0, p > 0 ? out.values.cwiseAbs().maxCoeff() : 0.0);
  out.tied.assign(static_cast<std::size_t>(p), false);
  for (Eigen::Index i = 0; i + 1 < p; ++i) {
    if (out.values(i) - out.values(i + 1) <= kTieTol * scale) {
      out.tied[static_cast<std::size_t>(i)] = true;
      out.tied[static_cast<std::size_t>(i + 1)] = true;
    }
  }
  return out;
}

CoeffCovariance empirical_coeff_covariance(const sampling::SampleSet& sample, bool debias) {
  const long long p = sample.p();
  const long long n = sample.n();
  if (n < 1) throw InvalidArgument("empirical covariance needs at least one curve");
  CoeffCovariance cov;
  cov.level = log2_exact(p);
  cov.coeffs = Eigen::MatrixXd::Zero(p, p);
  const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(p));
  cov.coeffs.selfadjointView<Eigen::Lower>().rankUpdate(sample.data.transpose(), scale);
  mirror_lower(cov.coeffs);
  if (debias) cov.coeffs.diagonal().array() -= sample.sigma2 / static_cast<double>(p);
  cov.debiased = debias;
  cov.source = EmpiricalSource{n, sample.sigma2};
  return cov;
}

CoeffCovariance population_coeff_covariance(const processes::KernelSpec& spec, long long p) {
  const auto grid = sampling::GridDesign::make(p);
  CoeffCovariance cov;
  cov.level = log2_exact(p);
  cov.coeffs = sampling::exact_grid_covariance(spec, grid) / static_cast<double>(p);
  cov.debiased = true;
  cov.source = PopulationSource{spec.name()};
  return cov;
}

std::vector<EigenEstimate> eigendecompose(const CoeffCovariance& cov, int ell_max) {
  if (ell_max < 1 || ell_max > cov.p()) {
    throw InvalidArgument("ell_max must lie in 1.." + std::to_string(cov.p()));
  }
  const SymmetricEigen eig = symmetric_eigen(cov.coeffs);
  std::vector<EigenEstimate> out;
  out.reserve(static_cast<std::size_t>(ell_max));
  for (int l = 0; l < ell_max; ++l) {
    EigenEstimate e;
    e.index = l + 1;
    e.lambda_hat = eig.values(l);
    e.coeffs = eig.vectors.col(l);
    e.tied = eig.tied[static_cast<std::size_t>(l)];
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<double> reconstruct(const EigenEstimate& est, const wavelet::ScalingBasis& basis,
                                std::span<const double> eval_grid) {
  for (double t : eval_grid) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("evaluation points must lie in [0,1]");
  }
  return wavelet::synthesize(basis, std::span<const double>(est.coeffs.data(), static_cast<std::size_t>(est.coeffs.size())),
                             eval_grid);
}

std::vector<EigenEstimate> estimate_fpca(const sampling::SampleSet& sample, const wavelet::ScalingBasis& basis,
                                         int ell_max, std::span<const double> eval_grid, bool debias) {
  auto estimates = eigendecompose(empirical_coeff_covariance(sample, debias), ell_max);
  for (auto& e : estimates) e.samples = reconstruct(e, basis, eval_grid);
  return estimates;
}

void write_coeff_csv(const CoeffCovariance& cov, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << "k,kprime,value\n";
  char buf[64];
  for (Eigen::Index i = 0; i < cov.coeffs.rows(); ++i) {
    for (Eigen::Index j = 0; j < cov.coeffs.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", cov.coeffs(i, j));
      out << (i + 1) << ',' << (j + 1) << ',' << buf << '\n';
    }
  }
  if (!out) throw IoError(path, "write failed");
}

}  // namespace wfpca::estimator
