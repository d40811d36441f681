// Command-line front end: experiment sweeps, lemma checks, slope readouts and
// raw sample export.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "wfpca/config.hpp"
#include "wfpca/errors.hpp"
#include "wfpca/processes.hpp"
#include "wfpca/report.hpp"
#include "wfpca/runner.hpp"
#include "wfpca/sampling.hpp"
#include "wfpca/verify.hpp"

namespace {

using namespace wfpca;

int cmd_run(const std::string& config_path, bool paper_scale) {
  auto cfg = harness::load_config(config_path);
  if (paper_scale) cfg.apply_paper_scale();
  cfg.validate();
  const auto table = harness::run(cfg);
  harness::write_csv(table.rows, cfg.output);

  const std::filesystem::path out(cfg.output);
  const auto stem = (out.parent_path() / out.stem()).string();
  for (auto kind : {harness::FigureKind::MseVsN, harness::FigureKind::MseVsP, harness::FigureKind::MeanMseVsP,
                    harness::FigureKind::RseVsP, harness::FigureKind::MeanRseVsP}) {
    try {
      harness::emit_svg(table.rows, kind, stem + "_" + harness::figure_name(kind) + ".svg");
    } catch (const EmptyTable&) {
    }
  }

  std::printf("%-9s %6s %7s %6s %4s %12s %10s %12s %10s\n", "model", "alpha", "n", "p", "reps", "mse", "se",
              "rse", "se");
  for (const auto& a : table.aggregates) {
    std::printf("%-9s %6g %7lld %6lld %4lld %12.4e %10.2e %12.4e %10.2e%s\n", a.model.c_str(), a.alpha, a.n, a.p,
                a.count, a.mean_mse, a.se_mse, a.mean_rse, a.se_rse, a.is_population ? "  population" : "");
  }
  std::printf("wrote %zu rows to %s\n", table.rows.size(), cfg.output.c_str());
  if (!table.complete) {
    std::fprintf(stderr, "run incomplete: %s\n", table.failure.c_str());
    return 1;
  }
  return 0;
}

int cmd_verify() {
  const auto results = harness::verify();
  int failures = 0;
  for (const auto& r : results) {
    std::printf("[%s] %-28s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    if (!r.passed) ++failures;
  }
  std::printf("%d of %zu checks failed\n", failures, results.size());
  return failures == 0 ? 0 : 1;
}

int cmd_slopes(const std::string& input, const std::string& figure) {
  const auto kind = harness::parse_figure(figure);
  const auto rows = harness::read_csv(input);
  for (const auto& s : harness::figure_series(rows, kind)) {
    if (s.points.size() < 3) {
      std::printf("%-40s (fewer than 3 points)\n", s.label.c_str());
      continue;
    }
    const auto fit = metrics::loglog_slope(s.points);
    std::printf("%-40s slope %8.4f  r2 %.4f  reference %g\n", s.label.c_str(), fit.slope, fit.r2,
                harness::reference_slope(kind, s.alpha));
  }
  return 0;
}

int cmd_simulate(const std::string& model, double alpha, long long n, long long p, double sigma2,
                 std::uint64_t seed, const std::string& out) {
  const auto m = harness::parse_model(model);
  const auto spec = m == harness::Model::Aliasing ? processes::aliasing_model(p, alpha)
                                                  : processes::fourier_model(alpha);
  const auto sample = sampling::simulate(spec, n, sampling::GridDesign::make(p), sigma2, seed);
  sampling::write_sample_csv(sample, out);
  std::printf("wrote %lld x %lld samples to %s\n", n, p, out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet-projection FPCA experiments"};
  app.require_subcommand(1);

  std::string config_path;
  bool paper_scale = false;
  auto* run = app.add_subcommand("run", "Run a Monte Carlo sweep from a config file");
  run->add_option("--config", config_path, "key=value config file")->required()->check(CLI::ExistingFile);
  run->add_flag("--paper-scale", paper_scale, "Use the full grid, sample sizes and 40 replicates");

  auto* verify = app.add_subcommand("verify", "Run every lemma-level check");

  std::string input;
  std::string figure = "mse_vs_p";
  auto* slopes = app.add_subcommand("slopes", "Fit log-log slopes of a results CSV");
  slopes->add_option("--input", input, "results CSV")->required()->check(CLI::ExistingFile);
  slopes->add_option("--figure", figure, "mse_vs_n, mse_vs_p, mean_mse_vs_p, rse_vs_p or mean_rse_vs_p");

  std::string model = "aliasing";
  double alpha = 1.0;
  long long n = 100;
  long long p = 64;
  double sigma2 = 0.1;
  std::uint64_t seed = 1;
  std::string out;
  auto* simulate = app.add_subcommand("simulate", "Write simulated curves as CSV");
  simulate->add_option("--model", model, "fourier or aliasing");
  simulate->add_option("--alpha", alpha, "smoothness index");
  simulate->add_option("-n,--n", n, "number of curves");
  simulate->add_option("-p,--p", p, "grid size (power of two)");
  simulate->add_option("--sigma2", sigma2, "noise variance");
  simulate->add_option("--seed", seed, "random seed");
  simulate->add_option("--out", out, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, paper_scale);
    if (*verify) return cmd_verify();
    if (*slopes) return cmd_slopes(input, figure);
    if (*simulate) return cmd_simulate(model, alpha, n, p, sigma2, seed, out);
  } catch (const wfpca::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
