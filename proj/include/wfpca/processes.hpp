#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wfpca/errors.hpp"

namespace wfpca::processes {

/// One orthonormal trigonometric atom on [0,1]: 1, sqrt(2) sin(2 pi f t) or
/// sqrt(2) cos(2 pi f t), scaled by `weight`.
struct Term {
  enum class Kind { Constant, Sine, Cosine };
  Kind kind = Kind::Constant;
  int frequency = 0;
  double weight = 1.0;
};

/// Eigenfunction descriptor: a finite weighted sum of distinct atoms.
class Mode {
 public:
  static Mode constant();
  static Mode sine(int frequency);
  static Mode cosine(int frequency);
  static Mode mixture(std::vector<Term> terms);

  double operator()(double t) const;
  const std::vector<Term>& terms() const { return terms_; }

  /// Closed-form L2([0,1]) inner product.
  friend double inner(const Mode& a, const Mode& b);

 private:
  explicit Mode(std::vector<Term> terms);
  std::vector<Term> terms_;
};

/// Holder metadata (alpha, L); L is unknown for most closed-form models.
struct Holder {
  double alpha = 0.0;
  std::optional<double> lipschitz;
};

/// Finite Karhunen-Loeve description sum_j sqrt(lambda_j) xi_j psi_j.
struct KLSpec {
  std::vector<double> eigenvalues;
  std::vector<Mode> modes;
  std::optional<Holder> holder;

  /// Checks strictly decreasing positive eigenvalues and orthonormal modes.
  static KLSpec make(std::vector<double> eigenvalues, std::vector<Mode> modes,
                     std::optional<Holder> holder = std::nullopt);

  std::size_t size() const { return eigenvalues.size(); }
};

struct BrownianMotion {};
struct BrownianBridge {};
struct FractionalBm {
  double hurst = 0.5;
};
struct IntegratedBm {
  int folds = 1;
};

struct KernelSpec {
  std::variant<BrownianMotion, BrownianBridge, FractionalBm, IntegratedBm, KLSpec> kind;

  std::string name() const;
};

/// Fourier basis model with lambda_k = c k^{-(1+alpha)}, normalized so the
/// first 1000 eigenvalues sum to one.
KLSpec fourier_model(double alpha, int terms = 1001);

/// Two-mode process whose second eigenfunction oscillates at the grid
/// frequency p and is therefore seen as a constant on the design grid.
KLSpec aliasing_model(long long p, double alpha);

/// Closed-form eigenvalue lambda_j (j >= 1) of Brownian motion or bridge.
double classical_eigenvalue(const KernelSpec& spec, int j);

/// K(s, t).
double kernel_eval(const KernelSpec& spec, double s, double t);

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol);

/// r_l: max over neighbours of lambda_l lambda_{l+k} / (lambda_l - lambda_{l+k})^2.
/// `ell` is 1-based. A missing right neighbour counts as zero.
double relative_eigengap(std::span<const double> eigs, int ell);

/// eta_l: max over neighbours of (lambda_l - lambda_{l+k})^{-2}.
double inverse_eigengap(std::span<const double> eigs, int ell);

struct KlRegularity {
  double alpha = 0.0;
  int m = 0;
  double beta = 0.0;
};

/// alpha = gamma - 2 varsigma, m = max{k in Z : k < alpha}, beta = alpha - m.
KlRegularity kl_regularity(double gamma, double varsigma);

// ---------------------------------------------------------------------------

namespace detail {
template <typename F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace wfpca::processes
