#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wfpca::metrics {

inline constexpr int kFineGridSize = 4096;

/// {j / size : 0 <= j < size}.
std::vector<double> fine_grid(int size = kFineGridSize);

struct ErrorRecord {
  std::string model;
  double alpha = 0.0;
  long long n = 0;  // 0 for population rows
  long long p = 0;
  long long replicate = 0;
  double mse_eigenfunction = 0.0;
  double rse_eigenvalue = 0.0;
  bool is_population = false;
};

struct AlignedTruth {
  std::vector<double> truth;
  bool ambiguous = false;  // inner product exactly zero; '+' was chosen
};

/// sign(<estimate, truth>) * truth, the inner product being the mean of
/// pointwise products. Throws GridMismatch on different lengths.
AlignedTruth align_sign(std::span<const double> estimate, std::span<const double> truth);

/// Mean of squared differences over the common grid.
double l2_error(std::span<const double> estimate, std::span<const double> aligned_truth);

/// ((lambda_hat - lambda_true) / lambda_true)^2.
double rse_eigenvalue(double lambda_hat, double lambda_true);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

using Point = std::pair<double, double>;

/// Least-squares fit of log y on log x over points[first, last).
SlopeFit loglog_slope(std::span<const Point> points,
                      std::optional<std::pair<std::size_t, std::size_t>> window = std::nullopt);

struct Plateau {
  std::optional<double> p_star;
  double theory = 0.0;  // n^{1/(2 alpha)}
};

/// First grid size from which the two-point log-log slope stays below alpha
/// in magnitude over two consecutive steps (or over the last step when only
/// one remains). `curve` must be sorted by p.
Plateau detect_plateau(std::span<const Point> curve, double alpha, long long n);

}  // namespace wfpca::metrics
