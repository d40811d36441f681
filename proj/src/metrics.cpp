#include "wfpca/metrics.hpp"

#include <cmath>

#include "wfpca/errors.hpp"

namespace wfpca::metrics {

std::vector<double> fine_grid(int size) {
  if (size < 1) throw InvalidArgument("fine grid needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(size));
  for (int j = 0; j < size; ++j) out[static_cast<std::size_t>(j)] = static_cast<double>(j) / size;
  return out;
}

AlignedTruth align_sign(std::span<const double> estimate, std::span<const double> truth) {
  if (estimate.size() != truth.size()) throw GridMismatch("estimate and truth sampled on different grids");
  double dot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) dot += estimate[i] * truth[i];
  AlignedTruth out{std::vector<double>(truth.begin(), truth.end()), dot == 0.0};
  if (dot < 0.0) {
    for (double& v : out.truth) v = -v;
  }
  return out;
}

double l2_error(std::span<const double> estimate, std::span<const double> aligned_truth) {
  if (estimate.size() != aligned_truth.size() || estimate.empty()) {
    throw GridMismatch("l2_error needs two samplings of the same nonempty grid");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = estimate[i] - aligned_truth[i];
    acc += d * d;
  }
  return acc / static_cast<double>(estimate.size());
}

double rse_eigenvalue(double lambda_hat, double lambda_true) {
  if (!(lambda_true > 0.0)) throw InvalidArgument("true eigenvalue must be positive");
  const double rel = (lambda_hat - lambda_true) / lambda_true;
  return rel * rel;
}

SlopeFit loglog_slope(std::span<const Point> points, std::optional<std::pair<std::size_t, std::size_t>> window) {
  std::size_t first = 0;
  std::size_t last = points.size();
  if (window) {
    first = window->first;
    last = window->second;
    if (first > last || last > points.size()) throw InvalidArgument("slope window out of range");
  }
  const std::size_t count = last - first;
  if (count < 3) throw InvalidArgument("slope fit needs at least three points");

  double sx = 0.0, sy = 0.0;
  std::vector<double> lx, ly;
  lx.reserve(count);
  ly.reserve(count);
  for (std::size_t i = first; i < last; ++i) {
    const auto [x, y] = points[i];
    if (!(x > 0.0) || !(y > 0.0)) throw InvalidArgument("log-log fit needs positive coordinates");
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
    sx += lx.back();
    sy += ly.back();
  }
  const double mx = sx / static_cast<double>(count);
  const double my = sy / static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = lx[i] - mx;
    const double dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InvalidArgument("slope fit needs distinct abscissae");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

Plateau detect_plateau(std::span<const Point> curve, double alpha, long long n) {
  if (!(alpha > 0.0)) throw InvalidArgument("plateau detection needs alpha > 0");
  if (n < 1) throw InvalidArgument("plateau detection needs n >= 1");
  Plateau out;
  out.theory = std::pow(static_cast<double>(n), 1.0 / (2.0 * alpha));
  if (curve.size() < 2) return out;

  std::vector<bool> flat(curve.size() - 1);
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const auto [x0, y0] = curve[i];
    const auto [x1, y1] = curve[i + 1];
    if (!(x0 > 0.0 && x1 > x0 && y0 > 0.0 && y1 > 0.0)) {
      throw InvalidArgument("plateau curve needs increasing positive p and positive values");
    }
    const double slope = std::log(y1 / y0) / std::log(x1 / x0);
    flat[i] = std::abs(slope) < alpha;
  }
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (flat[i] && (i + 1 == flat.size() || flat[i + 1])) {
      out.p_star = curve[i].first;
      break;
    }
  }
  return out;
}

}  // namespace wfpca::metrics
