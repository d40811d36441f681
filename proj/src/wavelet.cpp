#include "wfpca/wavelet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace wfpca::wavelet {

namespace {

// Coiflet reconstruction low-pass filters (PyWavelets / Daubechies tables),
// listed from index -2N upwards.
constexpr std::array<double, 6> kCoif1 = {
    -0.07273261951252645, 0.3378976624574818, 0.8525720202116004,
    0.3848648468648578,   -0.07273261951252645, -0.015655728135791993};

constexpr std::array<double, 12> kCoif2 = {
    0.01638733646320364,   -0.04146493678687178,   -0.0673725547237256,
    0.3861100668227629,    0.8127236354494135,     0.4170051844232391,
    -0.07648859907828076,  -0.05943441864643109,   0.02368017194684777,
    0.005611434819368834,  -0.0018232088709110323, -0.000720549445520347};

constexpr std::array<double, 18> kCoif3 = {
    -0.003793512864380802,  0.007782596425672746,   0.023452696142077168,
    -0.06577191128146936,   -0.06112339000297255,   0.40517690240911824,
    0.7937772226260872,     0.42848347637737,       -0.07179982161915484,
    -0.08230192710629983,   0.03455502757329774,    0.015880544863669452,
    -0.009007976136730624,  -0.0025745176881367972, 0.0011175187708306303,
    0.0004662169598204029,  -7.0983302506379e-05,   -3.459977319727278e-05};

constexpr std::array<double, 24> kCoif4 = {
    0.000892313902537003,   -0.001629492425226786,  -0.007346167936268051,
    0.01606894713157503,    0.02668230466960483,    -0.08126671024919373,
    -0.05607731960356926,   0.41530842700068227,    0.7822389344242826,
    0.43438603311435653,    -0.06662747236681717,   -0.09622042453595264,
    0.03933442260558915,    0.02508225333794961,    -0.015211728187697211,
    -0.0056582838001308835, 0.0037514346971460866,  0.0012665610789256603,
    -0.0005890202246332165, -0.0002599743371222568, 6.233885431278719e-05,
    3.1229861599195265e-05, -3.259647940030751e-06, -1.7849909144933469e-06};

constexpr std::array<double, 30> kCoif5 = {
    -0.000212081862067494,  0.0003585777411617577,  0.0021782943778456947,
    -0.00415931262757864,   -0.010131584846900276,  0.023408322118927783,
    0.028169744270532353,   -0.09192158806008609,   -0.052046670253554764,
    0.42157126673075435,    0.7742936228603274,     0.4379823066591634,
    -0.06203775157498196,   -0.10556315130733723,   0.041287530472117834,
    0.032674799467057355,   -0.019758391600965465,  -0.009159507338676163,
    0.006761520220620417,   0.0024315754425382886,  -0.0016616273039298788,
    -0.0006375589261258812, 0.0003018579416682448,  0.00014035632812373243,
    -4.12198619242655e-05,  -2.1270221672515614e-05, 3.7007277113394796e-06,
    2.0612203985788783e-06, -1.6237995172048338e-07, -9.604010112767894e-08};

template <std::size_t N>
std::vector<double> to_vector(const std::array<double, N>& a) {
  return {a.begin(), a.end()};
}

constexpr double kNormTol = 1e-10;

}  // namespace

FilterBank FilterBank::unchecked(int order, int first_index, std::vector<double> taps) {
  FilterBank f;
  f.order = order;
  f.first_index = first_index;
  f.support_radius = static_cast<double>(taps.size()) - 1.0;
  f.taps = std::move(taps);
  return f;
}

FilterBank FilterBank::make(int order, int first_index, std::vector<double> taps) {
  if (taps.size() < 2) throw NumericalFailure("filter needs at least two taps");
  const double sum = std::accumulate(taps.begin(), taps.end(), 0.0);
  const double energy = std::inner_product(taps.begin(), taps.end(), taps.begin(), 0.0);
  if (std::abs(sum - std::sqrt(2.0)) > kNormTol) {
    throw NumericalFailure("filter taps sum to " + std::to_string(sum) + ", expected sqrt(2)");
  }
  if (std::abs(energy - 1.0) > kNormTol) {
    throw NumericalFailure("filter energy " + std::to_string(energy) + ", expected 1");
  }
  return unchecked(order, first_index, std::move(taps));
}

FilterBank coiflet_filter(int order) {
  switch (order) {
    case 1: return FilterBank::make(1, -2, to_vector(kCoif1));
    case 2: return FilterBank::make(2, -4, to_vector(kCoif2));
    case 3: return FilterBank::make(3, -6, to_vector(kCoif3));
    case 4: return FilterBank::make(4, -8, to_vector(kCoif4));
    case 5: return FilterBank::make(5, -10, to_vector(kCoif5));
    default: throw UnsupportedOrder(order);
  }
}

ScalingBasis::ScalingBasis(FilterBank filter, int depth, std::vector<double> samples)
    : filter_(std::move(filter)),
      depth_(depth),
      step_(std::ldexp(1.0, -depth)),
      lo_(filter_.first_index),
      hi_(filter_.last_index()),
      samples_(std::move(samples)) {}

double ScalingBasis::phi(double x) const {
  if (!(x > lo_ && x < hi_)) return 0.0;
  const double u = (x - lo_) / step_;
  const auto i = static_cast<std::size_t>(u);
  if (i + 1 >= samples_.size()) return samples_.back();
  const double frac = u - static_cast<double>(i);
  return samples_[i] + frac * (samples_[i + 1] - samples_[i]);
}

double ScalingBasis::eval(int level, long long shift, double t) const {
  const double x = std::ldexp(t, level) - static_cast<double>(shift);
  return std::sqrt(std::ldexp(1.0, level)) * phi(x);
}

ScalingBasis cascade(const FilterBank& filter, int depth) {
  if (depth < 4) throw InvalidArgument("cascade depth must be at least 4");
  const int lo = filter.first_index;
  const int hi = filter.last_index();
  const int len = hi - lo;
  const double root2 = std::sqrt(2.0);
  auto tap = [&](int k) -> double {
    const int i = k - lo;
    return (i >= 0 && i <= len) ? filter.taps[static_cast<std::size_t>(i)] : 0.0;
  };

  // phi at the interior integers lo+1..hi-1: eigenvector of the two-scale
  // operator for eigenvalue 1 with unit sum.
  const int m = len - 1;
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(m + 1, m);
  for (int a = 0; a < m; ++a) {
    const int n = lo + 1 + a;
    for (int b = 0; b < m; ++b) {
      const int x = lo + 1 + b;
      system(a, b) = root2 * tap(2 * n - x);
    }
    system(a, a) -= 1.0;
  }
  system.row(m).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
  rhs(m) = 1.0;
  const Eigen::VectorXd integer_values = system.colPivHouseholderQr().solve(rhs);
  const double eig_residual = (system * integer_values - rhs).norm();
  if (!integer_values.allFinite() || eig_residual > 1e-8) {
    throw NumericalFailure("two-scale operator has no unit-sum fixed point (residual " +
                           std::to_string(eig_residual) + ")");
  }

  const long long scale = 1LL << depth;
  const std::size_t count = static_cast<std::size_t>(len) * static_cast<std::size_t>(scale) + 1;
  std::vector<double> samples(count, 0.0);
  for (int a = 0; a < m; ++a) {
    samples[static_cast<std::size_t>(a + 1) * static_cast<std::size_t>(scale)] = integer_values(a);
  }

  auto relation = [&](std::size_t i) {
    double acc = 0.0;
    for (int k = lo; k <= hi; ++k) {
      const long long idx = static_cast<long long>(lo - k) * scale + 2 * static_cast<long long>(i);
      if (idx < 0 || idx >= static_cast<long long>(count)) continue;
      acc += tap(k) * samples[static_cast<std::size_t>(idx)];
    }
    return root2 * acc;
  };

  for (int d = 1; d <= depth; ++d) {
    const std::size_t stride = static_cast<std::size_t>(1) << (depth - d);
    for (std::size_t i = stride; i < count; i += 2 * stride) samples[i] = relation(i);
  }

  double residual = 0.0;
  for (std::size_t i = 0; i < count; ++i) residual = std::max(residual, std::abs(samples[i] - relation(i)));
  if (residual > 1e-4 || !std::all_of(samples.begin(), samples.end(), [](double v) { return std::isfinite(v); })) {
    throw NumericalFailure("cascade did not converge: scaling-relation residual " + std::to_string(residual));
  }
  return ScalingBasis(filter, depth, std::move(samples));
}

double scaling_eval(const ScalingBasis& basis, int level, long long shift, double t) {
  return basis.eval(level, shift, t);
}

std::vector<double> moments(const ScalingBasis& basis, int r_max) {
  if (r_max < 0 || r_max > 6) throw InvalidArgument("moment order must lie in 0..6");
  const auto s = basis.samples();
  std::vector<double> out(static_cast<std::size_t>(r_max) + 1, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double w = (i == 0 || i + 1 == s.size()) ? 0.5 : 1.0;
    const double x = basis.abscissa(i);
    double xr = 1.0;
    for (int r = 0; r <= r_max; ++r) {
      out[static_cast<std::size_t>(r)] += w * xr * s[i];
      xr *= x;
    }
  }
  for (double& v : out) v *= basis.step();
  return out;
}

int vanishing_moment_count(const ScalingBasis& basis, double tol, int r_max) {
  const auto mom = moments(basis, r_max);
  int count = 0;
  for (int r = 1; r <= r_max; ++r) {
    if (std::abs(mom[static_cast<std::size_t>(r)]) >= tol) break;
    ++count;
  }
  return count;
}

std::vector<double> approx_projection(std::span<const double> samples, long long p) {
  if (!is_dyadic(p)) throw DyadicGridError(p);
  if (static_cast<long long>(samples.size()) != p) {
    throw InvalidArgument("expected " + std::to_string(p) + " samples, got " + std::to_string(samples.size()));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(p));
  std::vector<double> out(samples.size());
  std::transform(samples.begin(), samples.end(), out.begin(), [scale](double v) { return scale * v; });
  return out;
}

long long reflect_index(long long k, long long p) {
  const long long period = 2 * p;
  long long r = k % period;
  if (r < 0) r += period;
  return r < p ? r : period - 1 - r;
}

int reflection_width(const ScalingBasis& basis) {
  return static_cast<int>(std::ceil(basis.filter().support_radius)) + 1;
}

std::vector<double> synthesize(const ScalingBasis& basis, std::span<const double> coeffs,
                               std::span<const double> points) {
  const auto p = static_cast<long long>(coeffs.size());
  const int level = log2_exact(p);
  const long long width = reflection_width(basis);
  const double amp = std::sqrt(static_cast<double>(p));
  std::vector<double> out(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = std::ldexp(points[i], level);
    const long long k_min = std::max<long long>(static_cast<long long>(std::floor(x - basis.support_hi())), -width);
    const long long k_max = std::min<long long>(static_cast<long long>(std::ceil(x - basis.support_lo())), p - 1 + width);
    double acc = 0.0;
    for (long long k = k_min; k <= k_max; ++k) {
      const double v = basis.phi(x - static_cast<double>(k));
      if (v != 0.0) acc += coeffs[static_cast<std::size_t>(reflect_index(k, p))] * v;
    }
    out[i] = amp * acc;
  }
  return out;
}

}  // namespace wfpca::wavelet
