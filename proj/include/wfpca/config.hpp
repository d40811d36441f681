#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace wfpca::harness {

enum class Model { Fourier, Aliasing };

std::string model_name(Model m);
Model parse_model(const std::string& s);

struct ExperimentConfig {
  Model model = Model::Aliasing;
  std::vector<double> alphas{1.0};
  std::vector<long long> ps{8, 16, 32, 64, 128, 256};
  std::vector<long long> ns{256, 512, 1024, 2048, 4096};
  double sigma2 = 0.1;
  int replicates = 20;
  int ell = 2;
  int coiflet_order = 2;
  int cascade_depth = 12;
  std::uint64_t seed = 20240601;
  std::string output = "results.csv";
  bool debias = true;
  bool population_only = false;
  int threads = 0;  // 0: hardware concurrency
  int fine_grid = 4096;

  /// Throws ConfigError on an invalid combination.
  void validate() const;

  /// Grid, sample sizes, replicates and alphas of the full study.
  void apply_paper_scale();
};

/// key=value lines, '#' comments, comma-separated lists. Unknown keys are
/// rejected.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

}  // namespace wfpca::harness
