#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wfpca/processes.hpp"

namespace wfpca::sampling {

/// Regular design t_j = (j-1)/p, j = 1..p, with p a power of two.
struct GridDesign {
  long long p = 0;

  static GridDesign make(long long p);
  double point(long long index0) const { return static_cast<double>(index0) / static_cast<double>(p); }
  std::vector<double> points() const;
};

/// n noisy curves observed on a common grid; row i holds curve i.
struct SampleSet {
  Eigen::MatrixXd data;
  GridDesign grid;
  double sigma2 = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;

  long long n() const { return data.rows(); }
  long long p() const { return data.cols(); }
};

/// Seed for the stream of curve `curve` in replicate `replicate`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t replicate, std::uint64_t curve);

/// Standard normal draws by Marsaglia's polar method over a 64-bit
/// Mersenne twister. Streams with distinct keys are independent in practice
/// and can be consumed from any thread in any order.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t key);
  GaussianStream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t curve)
      : GaussianStream(stream_seed(seed, replicate, curve)) {}

  double next();
  double uniform();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// p x m matrix of mode values psi_k(t_j).
Eigen::MatrixXd mode_matrix(const processes::KLSpec& spec, std::span<const double> points);

/// Y_i(t_j) = sum_k sqrt(lambda_k) xi_{ik} psi_k(t_j) + eps_{ij}. Curve i draws
/// its scores and then its noise from stream (seed, replicate, i).
SampleSet simulate(const processes::KLSpec& spec, long long n, const GridDesign& grid, double sigma2,
                   std::uint64_t seed, std::uint64_t replicate = 0);

/// Same as above for kernel specifications; only the KL kind has a finite
/// expansion, other kinds throw Unsupported.
SampleSet simulate(const processes::KernelSpec& spec, long long n, const GridDesign& grid, double sigma2,
                   std::uint64_t seed, std::uint64_t replicate = 0);

/// K(t_j, t_k) on the design grid; exactly symmetric.
Eigen::MatrixXd exact_grid_covariance(const processes::KernelSpec& spec, const GridDesign& grid);

/// Writes "i,j,t,y" rows (1-based curve and grid indices).
void write_sample_csv(const SampleSet& sample, const std::string& path);

}  // namespace wfpca::sampling
