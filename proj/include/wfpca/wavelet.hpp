#pragma once

#include <span>
#include <vector>

#include "wfpca/errors.hpp"

namespace wfpca::wavelet {

/// Low-pass filter of a compactly supported orthonormal scaling function.
///
/// Taps are stored in scaling-relation order, phi(x) = sqrt(2) * sum_k h_k
/// phi(2x - k), with `taps[i]` holding h_{first_index + i}. For coiflets the
/// first index is -2N, which centres phi so that its first moment vanishes.
struct FilterBank {
  int order = 0;
  int first_index = 0;
  std::vector<double> taps;
  double support_radius = 0.0;

  int last_index() const { return first_index + static_cast<int>(taps.size()) - 1; }

  /// Validates the normalization invariants and throws NumericalFailure when
  /// the taps do not describe an orthonormal scaling filter.
  static FilterBank make(int order, int first_index, std::vector<double> taps);

  /// Builds the filter without checking invariants. Used to probe how the
  /// downstream checks react to corrupted taps.
  static FilterBank unchecked(int order, int first_index, std::vector<double> taps);
};

/// Coiflet filter of the given order (1..5), from the published tap tables.
FilterBank coiflet_filter(int order);

/// Father function tabulated on the dyadic grid of step 2^-depth over its
/// support [first_index, last_index] of the filter.
class ScalingBasis {
 public:
  ScalingBasis(FilterBank filter, int depth, std::vector<double> samples);

  const FilterBank& filter() const { return filter_; }
  int depth() const { return depth_; }
  double step() const { return step_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  std::span<const double> samples() const { return samples_; }

  /// Abscissa of sample i.
  double abscissa(std::size_t i) const { return lo_ + static_cast<double>(i) * step_; }

  /// phi(x), linearly interpolated between samples; zero off the support.
  double phi(double x) const;

  /// phi_{J,k}(t) = 2^{J/2} phi(2^J t - k).
  double eval(int level, long long shift, double t) const;

 private:
  FilterBank filter_;
  int depth_;
  double step_;
  double lo_;
  double hi_;
  std::vector<double> samples_;
};

/// Evaluates the father function on the dyadic grid of step 2^-depth.
///
/// Integer values come from the eigenvector of the two-scale operator with
/// eigenvalue one, normalized to sum to one; finer levels follow from the
/// scaling relation. Throws NumericalFailure if no such eigenvector exists or
/// the scaling relation is violated by more than 1e-4 on the final grid.
ScalingBasis cascade(const FilterBank& filter, int depth = 12);

/// phi_{J,k}(t); zero outside the support.
double scaling_eval(const ScalingBasis& basis, int level, long long shift, double t);

/// Moments int t^r phi(t) dt for r = 0..r_max by composite trapezoid rule
/// over the cascade grid.
std::vector<double> moments(const ScalingBasis& basis, int r_max);

/// Number of consecutive vanishing moments r = 1, 2, ... with |moment| < tol.
int vanishing_moment_count(const ScalingBasis& basis, double tol = 1e-5, int r_max = 6);

/// Coefficients of the one-point quadrature projection: p^{-1/2} f(k/p).
std::vector<double> approx_projection(std::span<const double> samples, long long p);

/// Index into the half-sample symmetric extension of a length-p vector
/// (... x1 x0 | x0 x1 ... x_{p-1} | x_{p-1} x_{p-2} ...).
long long reflect_index(long long k, long long p);

/// Number of coefficients reflected on each side before synthesis.
int reflection_width(const ScalingBasis& basis);

/// Synthesizes sum_k c~_k phi_{J,k}(t) at every point, where c~ is the
/// symmetric extension of `coeffs` (length p = 2^J).
std::vector<double> synthesize(const ScalingBasis& basis, std::span<const double> coeffs,
                               std::span<const double> points);

}  // namespace wfpca::wavelet
