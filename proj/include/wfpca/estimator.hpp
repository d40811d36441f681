#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wfpca/processes.hpp"
#include "wfpca/sampling.hpp"
#include "wfpca/wavelet.hpp"

namespace wfpca::estimator {

struct EmpiricalSource {
  long long n = 0;
  double sigma2 = 0.0;
};

struct PopulationSource {
  std::string kernel;
};

/// Covariance in the scaling basis at level J = log2(p).
struct CoeffCovariance {
  Eigen::MatrixXd coeffs;
  int level = 0;
  bool debiased = false;
  std::variant<EmpiricalSource, PopulationSource> source;

  long long p() const { return coeffs.rows(); }
};

struct EigenEstimate {
  int index = 0;  // 1-based
  double lambda_hat = 0.0;
  Eigen::VectorXd coeffs;
  std::vector<double> samples;
  bool tied = false;  // eigenvalue numerically equal to a neighbour
};

/// Dense symmetric eigendecomposition, eigenvalues in decreasing order.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // column i pairs with values(i)
  std::vector<bool> tied;
};

/// Throws NumericalFailure if the solver does not converge. Equal eigenvalues
/// keep the solver's order; each vector is oriented so that its first
/// non-negligible entry is positive.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a);

/// (1/(np)) sum_i Y_i Y_i^T - (sigma^2/p) I. Set `debias` to false to keep the
/// noise contribution on the diagonal.
CoeffCovariance empirical_coeff_covariance(const sampling::SampleSet& sample, bool debias = true);

/// K(k/p, k'/p) / p.
CoeffCovariance population_coeff_covariance(const processes::KernelSpec& spec, long long p);

/// Top `ell_max` eigenpairs of the coefficient array.
std::vector<EigenEstimate> eigendecompose(const CoeffCovariance& cov, int ell_max);

/// psi(t) = sum_k g~_k phi_{J,k}(t) with g~ the reflected extension of g.
std::vector<double> reconstruct(const EigenEstimate& est, const wavelet::ScalingBasis& basis,
                                std::span<const double> eval_grid);

/// Empirical covariance, eigendecomposition and reconstruction on `eval_grid`.
std::vector<EigenEstimate> estimate_fpca(const sampling::SampleSet& sample, const wavelet::ScalingBasis& basis,
                                         int ell_max, std::span<const double> eval_grid, bool debias = true);

/// Writes "k,kprime,value" rows (1-based).
void write_coeff_csv(const CoeffCovariance& cov, const std::string& path);

}  // namespace wfpca::estimator
