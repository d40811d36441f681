#pragma once

#include <string>
#include <vector>

#include "wfpca/config.hpp"
#include "wfpca/metrics.hpp"

namespace wfpca::harness {

/// Mean and Monte Carlo standard error over the rows of one cell.
struct Aggregate {
  std::string model;
  double alpha = 0.0;
  long long n = 0;
  long long p = 0;
  bool is_population = false;
  long long count = 0;
  double mean_mse = 0.0;
  double se_mse = 0.0;
  double mean_rse = 0.0;
  double se_rse = 0.0;
};

struct ResultTable {
  std::vector<metrics::ErrorRecord> rows;
  std::vector<Aggregate> aggregates;
  bool complete = true;
  std::string failure;
};

/// Groups rows by (model, alpha, n, p, is_population), in first-seen order.
std::vector<Aggregate> aggregate(const std::vector<metrics::ErrorRecord>& rows);

/// Population rows (n = 0) for every (alpha, p), then one row per replicate
/// for every (alpha, n, p). Replicates run on a worker pool; the table does
/// not depend on the number of threads.
ResultTable run(const ExperimentConfig& config);

}  // namespace wfpca::harness
