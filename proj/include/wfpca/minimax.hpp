#pragma once

#include <Eigen/Dense>
#include <optional>

#include "wfpca/processes.hpp"

namespace wfpca::minimax {

/// sum_{k=1}^{p} a_j(t_k) a_j'(t_k) with a_j(x) = sqrt(2) sin(2 pi j x) and
/// t_k = (k-1)/p. Requires 1 <= j, j' < p/2.
double grid_sine_gram(long long p, int j, int jp);

/// G = sum_j lambda_j psi_j psi_j^T + sigma^2 I on the grid.
struct ObsCovariance {
  Eigen::MatrixXd matrix;
  double sigma2 = 0.0;
};

/// Observation covariance on t_k = (k - 1 + offset)/p. The design grid is
/// offset 0; other offsets probe what happens off the grid.
ObsCovariance observation_covariance(const processes::KLSpec& spec, long long p, double sigma2,
                                     double grid_offset = 0.0);

/// Hellinger affinity of N(mu0, G0) and N(mu1, G1) through log-determinants.
/// Means default to zero. Throws NotPositiveDefinite on a non-PD input.
double hellinger_affinity(const ObsCovariance& g0, const ObsCovariance& g1,
                          const std::optional<Eigen::VectorXd>& mu0 = std::nullopt,
                          const std::optional<Eigen::VectorXd>& mu1 = std::nullopt);

/// H^2 of n-fold products: 2 - 2 A^n.
double hellinger_sq(double affinity, long long n);

struct HypothesisPair {
  processes::KLSpec h0;
  processes::KLSpec h1;
};

/// Two processes that agree on modes 1..ell-1 (sines a_j with geometric
/// eigenvalues 5^{-j}) and differ in mode ell: the constant 1 versus
/// (1 - r) + sqrt(1 - (1 - r)^2) a_p with r = p^{-2 alpha}, whose eigenvalue
/// is inflated by (1 - r)^{-2}.
HypothesisPair aliasing_hypotheses(long long p, double alpha, int ell);

/// Sines a_1..a_{ell+1} with eigenvalues 5^{-j}; the alternative rotates
/// modes ell and ell+1 by b in (0, 1).
HypothesisPair rotation_hypotheses(int ell, double b);

/// H^2 between the n-fold observation laws of the aliasing pair.
double verify_aliasing_indistinguishable(long long p, double alpha, double sigma2, int ell, long long n = 1,
                                         double grid_offset = 0.0);

}  // namespace wfpca::minimax
