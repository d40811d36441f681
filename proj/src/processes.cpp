#include "wfpca/processes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace wfpca::processes {

namespace {

constexpr double kNormTol = 1e-9;

double atom(const Term& term, double t) {
  switch (term.kind) {
    case Term::Kind::Constant: return 1.0;
    case Term::Kind::Sine: return std::numbers::sqrt2 * std::sin(2.0 * std::numbers::pi * term.frequency * t);
    case Term::Kind::Cosine: return std::numbers::sqrt2 * std::cos(2.0 * std::numbers::pi * term.frequency * t);
  }
  return 0.0;
}

bool same_atom(const Term& a, const Term& b) {
  return a.kind == b.kind && (a.kind == Term::Kind::Constant || a.frequency == b.frequency);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Mode::Mode(std::vector<Term> terms) : terms_(std::move(terms)) {}

Mode Mode::constant() { return Mode({Term{Term::Kind::Constant, 0, 1.0}}); }

Mode Mode::sine(int frequency) { return mixture({Term{Term::Kind::Sine, frequency, 1.0}}); }

Mode Mode::cosine(int frequency) { return mixture({Term{Term::Kind::Cosine, frequency, 1.0}}); }

Mode Mode::mixture(std::vector<Term> terms) {
  std::vector<Term> merged;
  for (Term t : terms) {
    if (t.kind != Term::Kind::Constant && t.frequency < 1) {
      throw InvalidArgument("trigonometric atoms need frequency >= 1");
    }
    if (t.kind == Term::Kind::Constant) t.frequency = 0;
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) { return same_atom(m, t); });
    if (it == merged.end()) {
      merged.push_back(t);
    } else {
      it->weight += t.weight;
    }
  }
  return Mode(std::move(merged));
}

double Mode::operator()(double t) const {
  double acc = 0.0;
  for (const Term& term : terms_) acc += term.weight * atom(term, t);
  return acc;
}

double inner(const Mode& a, const Mode& b) {
  double acc = 0.0;
  for (const Term& x : a.terms_) {
    for (const Term& y : b.terms_) {
      if (same_atom(x, y)) acc += x.weight * y.weight;
    }
  }
  return acc;
}

KLSpec KLSpec::make(std::vector<double> eigenvalues, std::vector<Mode> modes, std::optional<Holder> holder) {
  if (eigenvalues.size() != modes.size()) {
    throw InvalidArgument("KL specification needs one mode per eigenvalue");
  }
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    if (!(eigenvalues[j] > 0.0) || !std::isfinite(eigenvalues[j])) {
      throw InvalidArgument("KL eigenvalues must be positive and finite");
    }
    if (j > 0 && !(eigenvalues[j] < eigenvalues[j - 1])) {
      throw InvalidArgument("KL eigenvalues must be strictly decreasing");
    }
  }
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (std::abs(inner(modes[i], modes[i]) - 1.0) > kNormTol) {
      throw InvalidArgument("KL mode " + std::to_string(i + 1) + " is not unit norm");
    }
    for (std::size_t j = i + 1; j < modes.size(); ++j) {
      if (std::abs(inner(modes[i], modes[j])) > kNormTol) {
        throw InvalidArgument("KL modes " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                              " are not orthogonal");
      }
    }
  }
  return KLSpec{std::move(eigenvalues), std::move(modes), holder};
}

std::string KernelSpec::name() const {
  return std::visit(Overloaded{
                        [](const BrownianMotion&) { return std::string("brownian_motion"); },
                        [](const BrownianBridge&) { return std::string("brownian_bridge"); },
                        [](const FractionalBm&) { return std::string("fbm"); },
                        [](const IntegratedBm&) { return std::string("integrated_bm"); },
                        [](const KLSpec&) { return std::string("kl"); },
                    },
                    kind);
}

KLSpec fourier_model(double alpha, int terms) {
  if (!(alpha > 0.0)) throw InvalidArgument("fourier model needs alpha > 0");
  if (terms < 1) throw InvalidArgument("fourier model needs at least one term");
  const int normalized = std::min(terms, 1000);
  double total = 0.0;
  for (int k = 1; k <= normalized; ++k) total += std::pow(static_cast<double>(k), -(1.0 + alpha));
  const double c = 1.0 / total;

  std::vector<double> eigenvalues;
  std::vector<Mode> modes;
  eigenvalues.reserve(static_cast<std::size_t>(terms));
  modes.reserve(static_cast<std::size_t>(terms));
  for (int k = 1; k <= terms; ++k) {
    eigenvalues.push_back(c * std::pow(static_cast<double>(k), -(1.0 + alpha)));
    if (k == 1) {
      modes.push_back(Mode::constant());
    } else if (k % 2 == 0) {
      modes.push_back(Mode::cosine(k / 2));
    } else {
      modes.push_back(Mode::sine(k / 2));
    }
  }
  return KLSpec::make(std::move(eigenvalues), std::move(modes), Holder{alpha, std::nullopt});
}

KLSpec aliasing_model(long long p, double alpha) {
  if (!is_dyadic(p)) throw DyadicGridError(p);
  if (p < 4) throw InvalidArgument("aliasing model needs p >= 4");
  if (!(alpha > 0.0)) throw InvalidArgument("aliasing model needs alpha > 0");
  const double r = std::pow(static_cast<double>(p), -2.0 * alpha);
  const double keep = 1.0 - r;
  const double osc = std::sqrt(r * (2.0 - r));
  Mode first = Mode::sine(1);
  Mode second = Mode::mixture({Term{Term::Kind::Constant, 0, keep},
                               Term{Term::Kind::Sine, static_cast<int>(p), osc}});
  return KLSpec::make({0.60, 0.25 / (keep * keep)}, {first, second}, Holder{alpha, std::nullopt});
}

double classical_eigenvalue(const KernelSpec& spec, int j) {
  if (j < 1) throw InvalidArgument("eigenvalue index starts at 1");
  const double inv_pi2 = 1.0 / (std::numbers::pi * std::numbers::pi);
  if (std::holds_alternative<BrownianMotion>(spec.kind)) {
    const double d = j - 0.5;
    return inv_pi2 / (d * d);
  }
  if (std::holds_alternative<BrownianBridge>(spec.kind)) {
    return inv_pi2 / (static_cast<double>(j) * j);
  }
  throw NotAvailable("no closed-form spectrum for kernel " + spec.name());
}

double kernel_eval(const KernelSpec& spec, double s, double t) {
  return std::visit(
      Overloaded{
          [&](const BrownianMotion&) { return std::min(s, t); },
          [&](const BrownianBridge&) { return std::min(s, t) - s * t; },
          [&](const FractionalBm& f) {
            const double h2 = 2.0 * f.hurst;
            return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(s - t), h2));
          },
          [&](const IntegratedBm& b) {
            double fact = 1.0;
            for (int i = 2; i <= b.folds; ++i) fact *= i;
            const double norm = 1.0 / (fact * fact);
            // Order the arguments so the integrand is bitwise symmetric.
            const double lo = std::min(s, t);
            const double hi = std::max(s, t);
            auto integrand = [&](double u) {
              return std::pow(lo - u, b.folds) * std::pow(hi - u, b.folds) * norm;
            };
            return adaptive_simpson(integrand, 0.0, lo, 1e-10);
          },
          [&](const KLSpec& kl) {
            double acc = 0.0;
            for (std::size_t j = 0; j < kl.size(); ++j) acc += kl.eigenvalues[j] * (kl.modes[j](s) * kl.modes[j](t));
            return acc;
          },
      },
      spec.kind);
}

namespace {

// Returns (lambda_l, left neighbour or nullopt, right neighbour or 0).
std::tuple<double, std::optional<double>, double> neighbours(std::span<const double> eigs, int ell) {
  if (ell < 1 || static_cast<std::size_t>(ell) > eigs.size()) {
    throw InvalidArgument("eigen index " + std::to_string(ell) + " out of range");
  }
  const auto i = static_cast<std::size_t>(ell - 1);
  std::optional<double> left;
  if (i > 0) left = eigs[i - 1];
  const double right = (i + 1 < eigs.size()) ? eigs[i + 1] : 0.0;
  const double lam = eigs[i];
  if ((left && *left == lam) || right == lam) {
    throw DegenerateSpectrum("eigenvalue " + std::to_string(ell) + " is not separated from its neighbours");
  }
  return {lam, left, right};
}

}  // namespace

double relative_eigengap(std::span<const double> eigs, int ell) {
  const auto [lam, left, right] = neighbours(eigs, ell);
  auto ratio = [lam = lam](double other) {
    const double gap = lam - other;
    return lam * other / (gap * gap);
  };
  double r = ratio(right);
  if (left) r = std::max(r, ratio(*left));
  return r;
}

double inverse_eigengap(std::span<const double> eigs, int ell) {
  const auto [lam, left, right] = neighbours(eigs, ell);
  auto inv_sq = [lam = lam](double other) {
    const double gap = lam - other;
    return 1.0 / (gap * gap);
  };
  double eta = inv_sq(right);
  if (left) eta = std::max(eta, inv_sq(*left));
  return eta;
}

KlRegularity kl_regularity(double gamma, double varsigma) {
  if (varsigma < 0.0) throw InvalidArgument("varsigma must be nonnegative");
  double alpha = gamma - 2.0 * varsigma;
  if (!(alpha > 0.0)) {
    throw RegularityViolation("gamma - 2 varsigma = " + std::to_string(alpha) + " must be positive");
  }
  const double nearest = std::round(alpha);
  if (std::abs(alpha - nearest) < 1e-12) alpha = nearest;
  const int m = static_cast<int>(std::ceil(alpha)) - 1;
  return KlRegularity{alpha, m, alpha - m};
}

}  // namespace wfpca::processes
