#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wfpca/metrics.hpp"
#include "wfpca/processes.hpp"
#include "wfpca/wavelet.hpp"

namespace wfpca::harness {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  /// Filter under test; defaults to coif2. Lets tests feed corrupted taps.
  std::optional<wavelet::FilterBank> filter;
  int cascade_depth = 12;
  int spectral_trials = 50;
  int bosq_trials = 1000;
  int debias_replicates = 500;
  std::uint64_t seed = 12345;
};

/// Largest |sum_k a_j(t_k) a_j'(t_k) - p 1{j=j'}| over 1 <= j, j' < p/2.
double trigo_max_deviation(std::span<const long long> ps);

struct QuadratureRate {
  std::vector<long long> ps;
  std::vector<double> errors;
  std::optional<metrics::SlopeFit> fit;  // empty when some error is zero
};

/// Max over interior pairs (k, k'), k = p/2 - 2, k' - k in {0, 1, 2}, of
/// |p <K, phi_{J,k} x phi_{J,k'}> - K(k/p, k'/p)|. The inner product is
/// computed by a composite rule on the tabulated scaling function: a 2-D sum
/// at step 2^-7 for general kernels, and a 1-D sum per mode at step 2^-8 for
/// KL kernels.
QuadratureRate quadrature_rate_check(const processes::KernelSpec& spec, const wavelet::ScalingBasis& basis,
                                     std::span<const long long> ps);

/// Largest L2 residual ||G psi - lambda psi|| over all eigenpairs of `trials`
/// random symmetric coefficient arrays at size p, where G is the integral
/// operator with kernel sum G_kk' phi_{J,k}(s) phi_{J,k'}(t) over the real line
/// and integrals are fine-grid sums.
double spectral_relation_residual(const wavelet::ScalingBasis& basis, long long p, int trials, std::uint64_t seed);

/// eta_l = 8 / (smallest gap to a neighbour)^2.
double bosq_eta(std::span<const double> eigs, int ell);

struct BosqSummary {
  int trials = 0;
  int violations = 0;
  double worst_ratio = 0.0;  // max of error / bound
};

/// Random symmetric perturbations of population coefficient arrays at
/// p in {8, 16, 32} for l in {1, 2}.
BosqSummary bosq_sampling(int trials, std::uint64_t seed);

struct DebiasSummary {
  long long entries = 0;
  long long outside = 0;  // entries whose mean is beyond 5 standard errors
  double worst_z = 0.0;
};

/// Pure-noise samples: mean of each debiased coefficient entry over replicates.
DebiasSummary debias_check(long long n, long long p, double sigma2, int replicates, std::uint64_t seed);

/// Every lemma-level check; the report lists measured values.
std::vector<CheckResult> verify(const VerifyOptions& options = {});

}  // namespace wfpca::harness
