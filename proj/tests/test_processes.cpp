#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wfpca/processes.hpp"

using namespace wfpca;
using namespace wfpca::processes;

TEST_CASE("modes: closed-form inner products and construction errors") {
  CHECK(inner(Mode::sine(1), Mode::sine(1)) == 1.0);
  CHECK(inner(Mode::sine(1), Mode::cosine(1)) == 0.0);
  CHECK(inner(Mode::constant(), Mode::sine(3)) == 0.0);
  const auto mix = Mode::mixture({{Term::Kind::Sine, 2, 0.6}, {Term::Kind::Cosine, 5, 0.8}});
  CHECK(inner(mix, mix) == doctest::Approx(1.0));
  // Repeated atoms are merged.
  const auto merged = Mode::mixture({{Term::Kind::Sine, 2, 0.5}, {Term::Kind::Sine, 2, 0.5}});
  CHECK(merged.terms().size() == 1);
  CHECK(merged(0.125) == doctest::Approx(std::numbers::sqrt2));
  CHECK_THROWS_AS(Mode::sine(0), InvalidArgument);
}

TEST_CASE("KLSpec::make validates the spectrum and the modes") {
  CHECK_NOTHROW(KLSpec::make({2.0, 1.0}, {Mode::sine(1), Mode::cosine(1)}));
  CHECK_THROWS_AS(KLSpec::make({1.0, 1.0}, {Mode::sine(1), Mode::cosine(1)}), InvalidArgument);
  CHECK_THROWS_AS(KLSpec::make({1.0, -1.0}, {Mode::sine(1), Mode::cosine(1)}), InvalidArgument);
  CHECK_THROWS_AS(KLSpec::make({2.0, 1.0}, {Mode::sine(1), Mode::sine(1)}), InvalidArgument);
  CHECK_THROWS_AS(KLSpec::make({1.0}, {Mode::mixture({{Term::Kind::Sine, 1, 2.0}})}), InvalidArgument);
  CHECK_THROWS_AS(KLSpec::make({1.0}, {}), InvalidArgument);
}

TEST_CASE("fourier model constants") {
  const auto f1 = fourier_model(1.0);
  REQUIRE(f1.size() == 1001);
  double norm = 0.0;
  for (int k = 1; k <= 1000; ++k) norm += 1.0 / (static_cast<double>(k) * k);
  CHECK(f1.eigenvalues[0] == doctest::Approx(1.0 / norm).epsilon(1e-14));
  CHECK(f1.eigenvalues[0] == doctest::Approx(0.60830).epsilon(1e-5));
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const auto f = fourier_model(alpha);
    double total = 0.0;
    for (int k = 0; k < 1000; ++k) total += f.eigenvalues[static_cast<std::size_t>(k)];
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  CHECK(std::abs(f1.modes[1](0.25)) < 1e-15);
  CHECK(f1.modes[0](0.3) == 1.0);
  CHECK(f1.modes[1](0.0) == doctest::Approx(std::numbers::sqrt2));
  CHECK(f1.modes[2](0.25) == doctest::Approx(std::numbers::sqrt2));
  CHECK_THROWS_AS(fourier_model(0.0), InvalidArgument);
}

TEST_CASE("aliasing model constants") {
  const auto a = aliasing_model(8, 1.0);
  const double r = 1.0 / 64.0;
  for (int j = 0; j < 8; ++j) CHECK(a.modes[1](j / 8.0) == doctest::Approx(0.984375).epsilon(1e-14));
  const auto one = Mode::constant();
  const double dist = inner(a.modes[1], a.modes[1]) + 1.0 - 2.0 * inner(a.modes[1], one);
  CHECK(dist == doctest::Approx(0.03125).epsilon(1e-12));
  for (long long p : {4LL, 8LL, 64LL, 1024LL}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      const auto m = aliasing_model(p, alpha);
      const double rr = std::pow(static_cast<double>(p), -2.0 * alpha);
      CHECK(m.eigenvalues[1] * (1.0 - rr) * (1.0 - rr) == doctest::Approx(0.25).epsilon(1e-15));
      CHECK(m.eigenvalues[0] == 0.60);
    }
  }
  CHECK(a.eigenvalues[1] == doctest::Approx(0.25 / ((1 - r) * (1 - r))));
  CHECK_THROWS_AS(aliasing_model(12, 1.0), DyadicGridError);
  CHECK_THROWS_AS(aliasing_model(2, 1.0), InvalidArgument);
}

TEST_CASE("mode Gram on a 4096-point grid is the identity") {
  std::vector<KLSpec> specs{fourier_model(1.0), aliasing_model(8, 1.0), aliasing_model(1024, 1.5)};
  for (const auto& spec : specs) {
    const std::size_t m = std::min<std::size_t>(spec.size(), 60);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i; j < m; ++j) {
        double acc = 0.0;
        for (int k = 0; k < 4096; ++k) acc += spec.modes[i](k / 4096.0) * spec.modes[j](k / 4096.0);
        acc /= 4096.0;
        CHECK(std::abs(acc - (i == j ? 1.0 : 0.0)) < 1e-6);
      }
    }
  }
}

TEST_CASE("classical eigenvalues") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(classical_eigenvalue(KernelSpec{BrownianMotion{}}, 1) == doctest::Approx(4.0 / pi2));
  CHECK(classical_eigenvalue(KernelSpec{BrownianMotion{}}, 1) == doctest::Approx(0.405285).epsilon(1e-6));
  CHECK(classical_eigenvalue(KernelSpec{BrownianBridge{}}, 1) == doctest::Approx(0.101321).epsilon(1e-6));
  const double ratio = classical_eigenvalue(KernelSpec{BrownianMotion{}}, 2) /
                       classical_eigenvalue(KernelSpec{BrownianMotion{}}, 1);
  CHECK(ratio == doctest::Approx(1.0 / 9.0));
  CHECK_THROWS_AS(classical_eigenvalue(KernelSpec{FractionalBm{0.3}}, 1), NotAvailable);
  CHECK_THROWS_AS(classical_eigenvalue(KernelSpec{IntegratedBm{1}}, 1), NotAvailable);
  CHECK_THROWS_AS(classical_eigenvalue(KernelSpec{BrownianMotion{}}, 0), InvalidArgument);
}

TEST_CASE("kernel evaluation") {
  CHECK(kernel_eval(KernelSpec{BrownianMotion{}}, 0.3, 0.7) == 0.3);
  CHECK(kernel_eval(KernelSpec{BrownianBridge{}}, 0.5, 0.5) == 0.25);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double s = u(rng), t = u(rng);
    CHECK(std::abs(kernel_eval(KernelSpec{FractionalBm{0.5}}, s, t) - std::min(s, t)) < 1e-12);
    // Once-integrated BM: int_0^min (s-u)(t-u) du = a^2 b / 2 - a^3 / 6, a = min, b = max.
    const double a = std::min(s, t), b = std::max(s, t);
    CHECK(kernel_eval(KernelSpec{IntegratedBm{1}}, s, t) == doctest::Approx(a * a * b / 2 - a * a * a / 6).epsilon(1e-9));
  }
}

TEST_CASE("kernels are symmetric") {
  const std::vector<KernelSpec> specs{KernelSpec{BrownianMotion{}},   KernelSpec{BrownianBridge{}},
                                      KernelSpec{FractionalBm{0.3}},  KernelSpec{IntegratedBm{2}},
                                      KernelSpec{fourier_model(1.0)}, KernelSpec{aliasing_model(16, 1.0)}};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& k : specs) {
    for (int i = 0; i < 10; ++i) {
      const double s = u(rng), t = u(rng);
      CHECK(kernel_eval(k, s, t) == kernel_eval(k, t, s));
    }
  }
}

TEST_CASE("KL kernel matches a term-by-term sum") {
  const auto a = aliasing_model(8, 1.0);
  const auto f = fourier_model(1.5);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double s = u(rng), t = u(rng);
    const double r = 1.0 / 64.0;
    const double psi2s = (1 - r) + std::sqrt(r * (2 - r)) * std::numbers::sqrt2 * std::sin(2 * std::numbers::pi * 8 * s);
    const double psi2t = (1 - r) + std::sqrt(r * (2 - r)) * std::numbers::sqrt2 * std::sin(2 * std::numbers::pi * 8 * t);
    const double expect = 0.6 * 2.0 * std::sin(2 * std::numbers::pi * s) * std::sin(2 * std::numbers::pi * t) +
                          a.eigenvalues[1] * psi2s * psi2t;
    CHECK(std::abs(kernel_eval(KernelSpec{a}, s, t) - expect) < 1e-12);

    double sum = f.eigenvalues[0];
    for (int k = 2; k <= 1001; ++k) {
      const int fr = k / 2;
      const double arg_s = 2 * std::numbers::pi * fr * s;
      const double arg_t = 2 * std::numbers::pi * fr * t;
      sum += f.eigenvalues[static_cast<std::size_t>(k - 1)] * 2.0 *
             (k % 2 == 0 ? std::cos(arg_s) * std::cos(arg_t) : std::sin(arg_s) * std::sin(arg_t));
    }
    CHECK(std::abs(kernel_eval(KernelSpec{f}, s, t) - sum) < 1e-12);
  }
}

TEST_CASE("relative eigengap") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<double> bm;
  for (int j = 1; j <= 101; ++j) bm.push_back(1.0 / (pi2 * (j - 0.5) * (j - 0.5)));
  CHECK(relative_eigengap(bm, 1) == doctest::Approx(9.0 / 64.0));
  double worst = 0.0;
  for (int l = 1; l <= 100; ++l) worst = std::max(worst, relative_eigengap(bm, l) / (l * l));
  CHECK(worst < 1.0);

  for (double q : {0.3, 0.5, 0.8}) {
    std::vector<double> geo;
    for (int j = 1; j <= 30; ++j) geo.push_back(std::pow(q, j));
    for (int l = 2; l <= 29; ++l) CHECK(relative_eigengap(geo, l) == doctest::Approx(q / ((1 - q) * (1 - q))));
  }

  // Exponential decay: constant in l.
  std::vector<double> ex;
  for (int j = 1; j <= 100; ++j) ex.push_back(2.0 * std::exp(-0.7 * j));
  for (int l = 2; l <= 99; ++l) CHECK(relative_eigengap(ex, l) == doctest::Approx(relative_eigengap(ex, 2)));

  // Grows as lambda_2 approaches lambda_1.
  double prev = 0.0;
  for (double l2 : {0.5, 0.7, 0.9, 0.99}) {
    const std::vector<double> e{1.0, l2, 0.1};
    const double r = relative_eigengap(e, 1);
    CHECK(r > prev);
    prev = r;
  }

  const std::vector<double> tie{1.0, 0.5, 0.5};
  CHECK_THROWS_AS(relative_eigengap(tie, 2), DegenerateSpectrum);
  CHECK_THROWS_AS(relative_eigengap(tie, 4), InvalidArgument);
  CHECK_THROWS_AS(relative_eigengap(tie, 0), InvalidArgument);
}

TEST_CASE("inverse eigengap") {
  const std::vector<double> two{0.6, 0.25};
  CHECK(inverse_eigengap(two, 1) == doctest::Approx(8.1633).epsilon(1e-4));
  const auto a = aliasing_model(8, 1.0);
  CHECK(inverse_eigengap(a.eigenvalues, 2) == doctest::Approx(15.03).epsilon(1e-3));
  const double q = 0.4;
  std::vector<double> geo;
  for (int j = 1; j <= 5; ++j) geo.push_back(std::pow(q, j));
  const double left = 1.0 / std::pow(q - q * q, 2);
  const double right = 1.0 / std::pow(q * q - q * q * q, 2);
  CHECK(inverse_eigengap(geo, 2) == doctest::Approx(std::max(left, right)));
  const std::vector<double> tie{1.0, 1.0};
  CHECK_THROWS_AS(inverse_eigengap(tie, 1), DegenerateSpectrum);
}

TEST_CASE("regularity from KL decay") {
  auto r = kl_regularity(1.0, 0.0);
  CHECK(r.alpha == 1.0);
  CHECK(r.m == 0);
  CHECK(r.beta == 1.0);
  r = kl_regularity(2.5, 0.25);
  CHECK(r.alpha == 2.0);
  CHECK(r.m == 1);
  CHECK(r.beta == 1.0);
  r = kl_regularity(1.7, 0.1);
  CHECK(r.alpha == doctest::Approx(1.5));
  CHECK(r.m == 1);
  CHECK(r.beta == doctest::Approx(0.5));
  CHECK_THROWS_AS(kl_regularity(1.0, 0.5), RegularityViolation);
  CHECK_THROWS_AS(kl_regularity(1.0, -0.1), InvalidArgument);
}
