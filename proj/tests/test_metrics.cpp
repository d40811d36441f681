#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wfpca/errors.hpp"
#include "wfpca/metrics.hpp"
#include "wfpca/processes.hpp"

using namespace wfpca;
using namespace wfpca::metrics;

namespace {

std::vector<double> sample(const processes::Mode& m, const std::vector<double>& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = m(grid[i]);
  return out;
}

}  // namespace

TEST_CASE("fine grid") {
  const auto g = fine_grid();
  REQUIRE(g.size() == 4096);
  CHECK(g[0] == 0.0);
  CHECK(g[4095] == 4095.0 / 4096.0);
}

TEST_CASE("sign alignment") {
  const auto grid = fine_grid();
  const auto psi = sample(processes::Mode::sine(2), grid);
  std::vector<double> noisy(psi);
  for (auto& v : noisy) v *= 0.9;
  auto a = align_sign(noisy, psi);
  CHECK_FALSE(a.ambiguous);
  CHECK(a.truth == psi);

  std::vector<double> neg(psi);
  for (auto& v : neg) v = -v;
  a = align_sign(neg, psi);
  CHECK(l2_error(neg, a.truth) == 0.0);

  const std::vector<double> u{1, 1, -1, -1}, v{1, -1, 1, -1};
  a = align_sign(u, v);
  CHECK(a.ambiguous);
  CHECK(a.truth == v);
  CHECK(l2_error(u, a.truth) == 2.0);

  CHECK_THROWS_AS(align_sign(std::vector<double>(3, 1.0), std::vector<double>(4, 1.0)), GridMismatch);
}

TEST_CASE("sign alignment invariance") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z;
  const auto grid = fine_grid(512);
  const auto psi = sample(processes::Mode::sine(1), grid);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> est(psi.size()), neg(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
      est[i] = (trial % 2 ? -1.0 : 1.0) * psi[i] + 0.3 * z(rng);
      neg[i] = -est[i];
    }
    CHECK(l2_error(est, align_sign(est, psi).truth) == l2_error(neg, align_sign(neg, psi).truth));
  }
}

TEST_CASE("l2 error") {
  const auto grid = fine_grid();
  const auto psi = sample(processes::Mode::sine(3), grid);
  CHECK(l2_error(psi, psi) == 0.0);
  std::vector<double> shifted(psi);
  for (auto& v : shifted) v += 0.2;
  CHECK(l2_error(shifted, psi) == doctest::Approx(0.04).epsilon(1e-12));

  const auto alias = processes::aliasing_model(8, 1.0);
  const std::vector<double> one(grid.size(), 1.0);
  const auto psi2 = sample(alias.modes[1], grid);
  CHECK(std::abs(l2_error(one, align_sign(one, psi2).truth) - 0.03125) < 1e-4);

  // Trigonometric pairs with closed-form distances.
  const auto a = sample(processes::Mode::sine(1), grid);
  const auto b = sample(processes::Mode::mixture({{processes::Term::Kind::Sine, 1, 0.6},
                                                  {processes::Term::Kind::Cosine, 4, 0.8}}),
                        grid);
  CHECK(std::abs(l2_error(a, b) - (0.4 * 0.4 + 0.8 * 0.8)) < 1.0 / 4096);

  CHECK_THROWS_AS(l2_error(std::vector<double>{}, std::vector<double>{}), GridMismatch);
  CHECK_THROWS_AS(l2_error(std::vector<double>(2, 0.0), std::vector<double>(3, 0.0)), GridMismatch);
}

TEST_CASE("relative squared eigenvalue error") {
  CHECK(rse_eigenvalue(0.7, 0.7) == 0.0);
  CHECK(rse_eigenvalue(1.1, 1.0) == doctest::Approx(0.01));
  CHECK(rse_eigenvalue(0.0, 2.0) == 1.0);
  CHECK_THROWS_AS(rse_eigenvalue(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(rse_eigenvalue(1.0, -1.0), InvalidArgument);
}

TEST_CASE("log-log slope recovers planted exponents") {
  for (int i = -9; i <= -1; ++i) {
    const double e = 0.5 * i;
    std::vector<Point> pts;
    for (double x = 8; x <= 1024; x *= 2) pts.emplace_back(x, 2.5 * std::pow(x, e));
    const auto fit = loglog_slope(pts);
    CHECK(std::abs(fit.slope - e) < 1e-10);
    CHECK(std::abs(fit.intercept - std::log(2.5)) < 1e-9);
    CHECK(fit.r2 == doctest::Approx(1.0));
  }
  std::vector<Point> flat{{1, 3}, {2, 3}, {4, 3}, {8, 3}};
  CHECK(std::abs(loglog_slope(flat).slope) < 1e-15);

  std::vector<Point> kinked{{1, 1}, {2, 1}, {4, 1}, {8, 1.0 / 64}, {16, 1.0 / 4096}};
  CHECK(loglog_slope(kinked, std::pair<std::size_t, std::size_t>{2, 5}).slope == doctest::Approx(-6.0));

  std::vector<Point> two{{1, 1}, {2, 2}};
  CHECK_THROWS_AS(loglog_slope(two), InvalidArgument);
  std::vector<Point> bad{{1, 1}, {2, 0}, {4, 1}};
  CHECK_THROWS_AS(loglog_slope(bad), InvalidArgument);
  CHECK_THROWS_AS(loglog_slope(kinked, std::pair<std::size_t, std::size_t>{3, 7}), InvalidArgument);
}

TEST_CASE("plateau detection") {
  std::vector<Point> kink;
  for (double p = 8; p <= 1024; p *= 2) kink.emplace_back(p, std::max(std::pow(p, -2.0), 1e-3));
  const auto pl = detect_plateau(kink, 1.0, 1000);
  REQUIRE(pl.p_star.has_value());
  CHECK(*pl.p_star == 32.0);
  CHECK(pl.theory == doctest::Approx(std::sqrt(1000.0)));

  std::vector<Point> steep;
  for (double p = 8; p <= 1024; p *= 2) steep.emplace_back(p, std::pow(p, -2.0));
  CHECK_FALSE(detect_plateau(steep, 1.0, 4096).p_star.has_value());

  // A single shallow step followed by a steep one is not a plateau.
  std::vector<Point> blip{{8, 1.0}, {16, 0.9}, {32, 0.1}, {64, 0.01}, {128, 0.009}, {256, 0.0085}};
  const auto b = detect_plateau(blip, 1.0, 4096);
  REQUIRE(b.p_star.has_value());
  CHECK(*b.p_star == 64.0);
  CHECK(detect_plateau(steep, 1.5, 4096).theory == doctest::Approx(std::pow(4096.0, 1.0 / 3.0)));
}
