#include "wfpca/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "wfpca/estimator.hpp"
#include "wfpca/minimax.hpp"
#include "wfpca/sampling.hpp"

namespace wfpca::harness {

namespace {

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// phi at step 2^-q over its support, taken from the cascade table.
std::vector<double> subsample(const wavelet::ScalingBasis& basis, int q) {
  if (q > basis.depth()) throw InvalidArgument("subsampling finer than the cascade table");
  const std::size_t stride = std::size_t{1} << (basis.depth() - q);
  const auto s = basis.samples();
  std::vector<double> out;
  out.reserve(s.size() / stride + 1);
  for (std::size_t i = 0; i < s.size(); i += stride) out.push_back(s[i]);
  return out;
}

Eigen::MatrixXd random_symmetric(long long p, sampling::GaussianStream& rng) {
  Eigen::MatrixXd a(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) a(i, j) = rng.next();
  }
  return 0.5 * (a + a.transpose());
}

}  // namespace

double trigo_max_deviation(std::span<const long long> ps) {
  double worst = 0.0;
  for (long long p : ps) {
    for (int j = 1; 2LL * j < p; ++j) {
      for (int jp = 1; 2LL * jp < p; ++jp) {
        const double expect = j == jp ? static_cast<double>(p) : 0.0;
        worst = std::max(worst, std::abs(minimax::grid_sine_gram(p, j, jp) - expect));
      }
    }
  }
  return worst;
}

QuadratureRate quadrature_rate_check(const processes::KernelSpec& spec, const wavelet::ScalingBasis& basis,
                                     std::span<const long long> ps) {
  const auto* kl = std::get_if<processes::KLSpec>(&spec.kind);
  const int q = kl ? 8 : 7;
  const auto phi = subsample(basis, q);
  const double h = std::ldexp(1.0, -q);
  const double lo = basis.support_lo();
  const double hi = basis.support_hi();
  std::vector<double> xs(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) xs[i] = lo + static_cast<double>(i) * h;

  QuadratureRate out;
  for (long long p : ps) {
    if (!is_dyadic(p)) throw DyadicGridError(p);
    const long long k0 = p / 2 - 2;
    const double pd = static_cast<double>(p);
    if ((static_cast<double>(k0) + lo) / pd < 0.0 || (static_cast<double>(k0 + 2) + hi) / pd > 1.0) {
      throw InvalidArgument("p = " + std::to_string(p) + " too small for interior quadrature pairs");
    }

    // Per-shift mode integrals I_j(k) = int psi_j((x + k)/p) phi(x) dx.
    std::vector<std::vector<double>> modal;
    if (kl) {
      for (long long k = k0; k <= k0 + 2; ++k) {
        std::vector<double> ints(kl->size(), 0.0);
        for (std::size_t j = 0; j < kl->size(); ++j) {
          double acc = 0.0;
          for (std::size_t i = 0; i < phi.size(); ++i) {
            if (phi[i] != 0.0) acc += kl->modes[j]((xs[i] + static_cast<double>(k)) / pd) * phi[i];
          }
          ints[j] = acc * h;
        }
        modal.push_back(std::move(ints));
      }
    }

    double worst = 0.0;
    for (long long dk = 0; dk <= 2; ++dk) {
      const long long k = k0;
      const long long kp = k0 + dk;
      double exact = 0.0;
      if (kl) {
        for (std::size_t j = 0; j < kl->size(); ++j) {
          exact += kl->eigenvalues[j] * modal[0][j] * modal[static_cast<std::size_t>(dk)][j];
        }
      } else {
        for (std::size_t i = 0; i < phi.size(); ++i) {
          if (phi[i] == 0.0) continue;
          const double s = (xs[i] + static_cast<double>(k)) / pd;
          double row = 0.0;
          for (std::size_t m = 0; m < phi.size(); ++m) {
            if (phi[m] == 0.0) continue;
            row += processes::kernel_eval(spec, s, (xs[m] + static_cast<double>(kp)) / pd) * phi[m];
          }
          exact += row * phi[i];
        }
        exact *= h * h;
      }
      const double approx = processes::kernel_eval(spec, static_cast<double>(k) / pd, static_cast<double>(kp) / pd);
      worst = std::max(worst, std::abs(exact - approx));
    }
    out.ps.push_back(p);
    out.errors.push_back(worst);
  }

  if (out.ps.size() >= 3 && std::all_of(out.errors.begin(), out.errors.end(), [](double e) { return e > 0.0; })) {
    std::vector<metrics::Point> pts;
    for (std::size_t i = 0; i < out.ps.size(); ++i) pts.emplace_back(static_cast<double>(out.ps[i]), out.errors[i]);
    out.fit = metrics::loglog_slope(pts);
  }
  return out;
}

double spectral_relation_residual(const wavelet::ScalingBasis& basis, long long p, int trials, std::uint64_t seed) {
  if (!is_dyadic(p)) throw DyadicGridError(p);
  const int q = std::min(basis.depth(), 10);
  const auto phi = subsample(basis, q);
  const long long per = 1LL << q;
  const long long lo = static_cast<long long>(basis.support_lo());
  const long long hi = static_cast<long long>(basis.support_hi());
  // t = u / (p 2^q) for u in [lo 2^q, (p - 1 + hi) 2^q].
  const long long u0 = lo * per;
  const long long u1 = (p - 1 + hi) * per;
  const Eigen::Index rows = static_cast<Eigen::Index>(u1 - u0 + 1);
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(rows, p);
  const double amp = std::sqrt(static_cast<double>(p));
  for (long long k = 0; k < p; ++k) {
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const long long u = (k + lo) * per + static_cast<long long>(i);
      big(static_cast<Eigen::Index>(u - u0), static_cast<Eigen::Index>(k)) = amp * phi[i];
    }
  }
  const double h = 1.0 / (static_cast<double>(p) * static_cast<double>(per));

  sampling::GaussianStream rng(seed, static_cast<std::uint64_t>(p), 0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd g = random_symmetric(p, rng);
    const auto eig = estimator::symmetric_eigen(g);
    for (Eigen::Index l = 0; l < p; ++l) {
      const Eigen::VectorXd psi = big * eig.vectors.col(l);
      const Eigen::VectorXd projected = h * (big.transpose() * psi);
      const Eigen::VectorXd applied = big * (g * projected);
      const double res = std::sqrt(h * (applied - eig.values(l) * psi).squaredNorm());
      worst = std::max(worst, res);
    }
  }
  return worst;
}

double bosq_eta(std::span<const double> eigs, int ell) { return 8.0 * processes::inverse_eigengap(eigs, ell); }

BosqSummary bosq_sampling(int trials, std::uint64_t seed) {
  struct Base {
    Eigen::MatrixXd gamma;
    estimator::SymmetricEigen eig;
  };
  std::vector<Base> bases;
  for (long long p : {8LL, 16LL, 32LL}) {
    const std::vector<processes::KernelSpec> kernels{
        processes::KernelSpec{processes::aliasing_model(p, 1.0)},
        processes::KernelSpec{processes::fourier_model(1.0)},
        processes::KernelSpec{processes::BrownianMotion{}},
    };
    for (const auto& k : kernels) {
      Base b;
      b.gamma = estimator::population_coeff_covariance(k, p).coeffs;
      b.eig = estimator::symmetric_eigen(b.gamma);
      bases.push_back(std::move(b));
    }
  }

  sampling::GaussianStream rng(seed, 0xb05c, 0);
  BosqSummary out;
  for (int t = 0; t < trials; ++t) {
    const Base& b = bases[static_cast<std::size_t>(t) % bases.size()];
    const int ell = 1 + (t / static_cast<int>(bases.size())) % 2;
    const long long p = b.gamma.rows();
    const double scale = std::pow(10.0, -5.0 + 4.0 * rng.uniform());
    const Eigen::MatrixXd e = scale * random_symmetric(p, rng);
    const auto pert = estimator::symmetric_eigen(b.gamma + e);
    const double op_norm = estimator::symmetric_eigen(e).values.cwiseAbs().maxCoeff();

    const std::vector<double> eigs(b.eig.values.data(), b.eig.values.data() + b.eig.values.size());
    const double bound = std::sqrt(bosq_eta(eigs, ell)) * op_norm;
    const Eigen::VectorXd g = b.eig.vectors.col(ell - 1);
    const Eigen::VectorXd gh = pert.vectors.col(ell - 1);
    const double sign = gh.dot(g) < 0.0 ? -1.0 : 1.0;
    const double err = (gh - sign * g).norm();
    ++out.trials;
    if (err > bound * (1.0 + 1e-6)) ++out.violations;
    if (bound > 0.0) out.worst_ratio = std::max(out.worst_ratio, err / bound);
  }
  return out;
}

DebiasSummary debias_check(long long n, long long p, double sigma2, int replicates, std::uint64_t seed) {
  if (replicates < 2) throw InvalidArgument("debias check needs at least two replicates");
  const auto none = processes::KLSpec::make({}, {});
  const auto grid = sampling::GridDesign::make(p);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd sumsq = Eigen::MatrixXd::Zero(p, p);
  for (int r = 0; r < replicates; ++r) {
    const auto sample = sampling::simulate(none, n, grid, sigma2, seed, static_cast<std::uint64_t>(r));
    const auto cov = estimator::empirical_coeff_covariance(sample);
    sum += cov.coeffs;
    sumsq += cov.coeffs.cwiseProduct(cov.coeffs);
  }
  const double rd = replicates;
  DebiasSummary out;
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double mean = sum(i, j) / rd;
      const double var = (sumsq(i, j) - rd * mean * mean) / (rd - 1.0);
      const double se = std::sqrt(std::max(var, 0.0) / rd);
      const double z = se > 0.0 ? std::abs(mean) / se : (mean == 0.0 ? 0.0 : INFINITY);
      ++out.entries;
      if (z > 5.0) ++out.outside;
      out.worst_z = std::max(out.worst_z, z);
    }
  }
  return out;
}

std::vector<CheckResult> verify(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  const wavelet::FilterBank filter = opt.filter ? *opt.filter : wavelet::coiflet_filter(2);

  {
    const std::vector<long long> ps{8, 16, 32, 64};
    const double dev = trigo_max_deviation(ps);
    out.push_back({"trigo_gram", dev <= 1e-9, "max deviation " + fmt("%.3e", dev) + " for p in {8,16,32,64}"});
  }

  std::optional<wavelet::ScalingBasis> basis;
  std::string cascade_error;
  try {
    basis = wavelet::cascade(filter, opt.cascade_depth);
  } catch (const Error& e) {
    cascade_error = e.what();
  }

  if (basis) {
    const auto mom = wavelet::moments(*basis, 6);
    const int attained = wavelet::vanishing_moment_count(*basis);
    const int required = std::max(1, 2 * filter.order - 1);
    const bool ok = std::abs(mom[0] - 1.0) <= 1e-9 && attained >= required;
    out.push_back({"vanishing_moments", ok,
                   "M0 = " + fmt("%.12f", mom[0]) + ", vanishing moments " + std::to_string(attained) +
                       " (need >= " + std::to_string(required) + "), M" + std::to_string(attained + 1) + " = " +
                       fmt("%.4e", mom[static_cast<std::size_t>(std::min(attained + 1, 6))])});
  } else {
    out.push_back({"vanishing_moments", false, "cascade failed: " + cascade_error});
  }

  if (basis) {
    double diff = 0.0;
    std::string detail;
    try {
      const auto finer = wavelet::cascade(filter, opt.cascade_depth + 1);
      const auto a = basis->samples();
      const auto b = finer.samples();
      for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[2 * i]));
      // Partition of unity: sum_k phi(x - k) = 1 on the dyadic grid of [0, 1).
      double pu = 0.0;
      const std::size_t per = std::size_t{1} << basis->depth();
      for (std::size_t r = 0; r < per; r += 7) {
        double acc = 0.0;
        for (std::size_t i = r; i < a.size(); i += per) acc += a[i];
        pu = std::max(pu, std::abs(acc - 1.0));
      }
      detail = "depth " + std::to_string(basis->depth()) + " vs " + std::to_string(basis->depth() + 1) +
               " max diff " + fmt("%.3e", diff) + ", partition-of-unity error " + fmt("%.3e", pu);
      out.push_back({"cascade_consistency", diff <= 1e-10 && pu <= 1e-10, detail});
    } catch (const Error& e) {
      out.push_back({"cascade_consistency", false, e.what()});
    }
  } else {
    out.push_back({"cascade_consistency", false, "cascade failed: " + cascade_error});
  }

  if (basis) {
    double worst = 0.0;
    for (long long p : {4LL, 8LL, 16LL}) {
      worst = std::max(worst, spectral_relation_residual(*basis, p, opt.spectral_trials, opt.seed));
    }
    out.push_back({"spectral_relation", worst <= 1e-3,
                   "max residual " + fmt("%.3e", worst) + " over " + std::to_string(opt.spectral_trials) +
                       " random arrays at p in {4,8,16}"});
  } else {
    out.push_back({"spectral_relation", false, "cascade failed: " + cascade_error});
  }

  if (basis) {
    const std::vector<long long> ps{16, 32, 64, 128, 256};
    const auto bm = quadrature_rate_check(processes::KernelSpec{processes::BrownianMotion{}}, *basis, ps);
    const bool bm_ok = bm.fit && bm.fit->slope <= -0.8;
    out.push_back({"quadrature_rate_bm", bm_ok,
                   bm.fit ? "slope " + fmt("%.3f", bm.fit->slope) + " over p in {16..256}" : "no fit"});

    const auto constant = processes::KLSpec::make({0.7}, {processes::Mode::constant()});
    const auto cq = quadrature_rate_check(processes::KernelSpec{constant}, *basis, ps);
    const double cmax = *std::max_element(cq.errors.begin(), cq.errors.end());
    out.push_back({"quadrature_constant", cmax <= 1e-12, "max error " + fmt("%.3e", cmax) + " for K = 0.7"});

    const auto f1 = quadrature_rate_check(processes::KernelSpec{processes::fourier_model(1.0)}, *basis, ps);
    const auto f2 = quadrature_rate_check(processes::KernelSpec{processes::fourier_model(2.0)}, *basis, ps);
    const bool f_ok = f1.fit && f2.fit && f2.fit->slope < f1.fit->slope;
    out.push_back({"quadrature_fourier_order", f_ok,
                   f_ok ? "slope alpha=1 " + fmt("%.3f", f1.fit->slope) + ", alpha=2 " + fmt("%.3f", f2.fit->slope)
                        : "no fit"});
  } else {
    out.push_back({"quadrature_rate_bm", false, "cascade failed: " + cascade_error});
  }

  {
    double worst = 0.0;
    double identity_err = 0.0;
    for (long long p : {8LL, 16LL, 32LL}) {
      for (double alpha : {1.0, 1.5}) {
        worst = std::max(worst, minimax::verify_aliasing_indistinguishable(p, alpha, 0.1, 2));
        const auto pair = minimax::aliasing_hypotheses(p, alpha, 2);
        const auto& a = pair.h0.modes[1];
        const auto& b = pair.h1.modes[1];
        const double dist = inner(a, a) + inner(b, b) - 2.0 * inner(a, b);
        const double r = std::pow(static_cast<double>(p), -2.0 * alpha);
        identity_err = std::max(identity_err, std::abs(dist - 2.0 * r) / r);
      }
    }
    const double off = minimax::verify_aliasing_indistinguishable(8, 1.0, 0.1, 2, 1, 0.25);
    out.push_back({"aliasing_indistinguishable", worst <= 1e-10 && identity_err <= 1e-9 && off > 0.0,
                   "max H^2 on grid " + fmt("%.3e", worst) + ", relative L2 identity error " +
                       fmt("%.3e", identity_err) + ", H^2 off grid (p=8, offset 1/4) " + fmt("%.3e", off)});
  }

  {
    const auto b = bosq_sampling(opt.bosq_trials, opt.seed);
    out.push_back({"bosq_bound", b.violations == 0,
                   std::to_string(b.violations) + " violations in " + std::to_string(b.trials) +
                       " trials, worst error/bound " + fmt("%.4f", b.worst_ratio)});
  }

  {
    const auto d = debias_check(50, 8, 0.1, opt.debias_replicates, opt.seed);
    out.push_back({"debias", d.outside == 0,
                   std::to_string(d.outside) + " of " + std::to_string(d.entries) +
                       " entries beyond 5 standard errors, worst |z| " + fmt("%.2f", d.worst_z)});
  }
  return out;
}

}  // namespace wfpca::harness
