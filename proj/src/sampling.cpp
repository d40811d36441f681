#include "wfpca/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace wfpca::sampling {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr long long kRowBlock = 512;

}  // namespace

GridDesign GridDesign::make(long long p) {
  if (!is_dyadic(p)) throw DyadicGridError(p);
  return GridDesign{p};
}

std::vector<double> GridDesign::points() const {
  std::vector<double> out(static_cast<std::size_t>(p));
  for (long long j = 0; j < p; ++j) out[static_cast<std::size_t>(j)] = point(j);
  return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t replicate, std::uint64_t curve) {
  return splitmix64(splitmix64(splitmix64(seed) ^ replicate) ^ curve);
}

GaussianStream::GaussianStream(std::uint64_t key) : engine_(key) {}

double GaussianStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

Eigen::MatrixXd mode_matrix(const processes::KLSpec& spec, std::span<const double> points) {
  Eigen::MatrixXd psi(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(spec.size()));
  for (Eigen::Index k = 0; k < psi.cols(); ++k) {
    const auto& mode = spec.modes[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < psi.rows(); ++j) psi(j, k) = mode(points[static_cast<std::size_t>(j)]);
  }
  return psi;
}

SampleSet simulate(const processes::KLSpec& spec, long long n, const GridDesign& grid, double sigma2,
                   std::uint64_t seed, std::uint64_t replicate) {
  if (n < 1) throw InvalidArgument("simulate needs n >= 1");
  if (!(sigma2 >= 0.0)) throw InvalidArgument("noise variance must be nonnegative");
  const auto points = grid.points();
  const Eigen::Index m = static_cast<Eigen::Index>(spec.size());
  const Eigen::Index p = static_cast<Eigen::Index>(grid.p);
  Eigen::MatrixXd scaled_psi = mode_matrix(spec, points);
  for (Eigen::Index k = 0; k < m; ++k) scaled_psi.col(k) *= std::sqrt(spec.eigenvalues[static_cast<std::size_t>(k)]);
  const double sigma = std::sqrt(sigma2);

  SampleSet out;
  out.data.resize(n, p);
  out.grid = grid;
  out.sigma2 = sigma2;
  out.seed = seed;
  out.replicate = replicate;

  for (long long start = 0; start < n; start += kRowBlock) {
    const Eigen::Index rows = static_cast<Eigen::Index>(std::min(kRowBlock, n - start));
    Eigen::MatrixXd scores(rows, m);
    Eigen::MatrixXd noise(rows, p);
    for (Eigen::Index r = 0; r < rows; ++r) {
      GaussianStream stream(seed, replicate, static_cast<std::uint64_t>(start + r));
      for (Eigen::Index k = 0; k < m; ++k) scores(r, k) = stream.next();
      for (Eigen::Index j = 0; j < p; ++j) noise(r, j) = sigma * stream.next();
    }
    out.data.middleRows(start, rows).noalias() = scores * scaled_psi.transpose();
    out.data.middleRows(start, rows) += noise;
  }
  return out;
}

SampleSet simulate(const processes::KernelSpec& spec, long long n, const GridDesign& grid, double sigma2,
                   std::uint64_t seed, std::uint64_t replicate) {
  const auto* kl = std::get_if<processes::KLSpec>(&spec.kind);
  if (kl == nullptr) {
    throw Unsupported("kernel " + spec.name() + " has no finite Karhunen-Loeve expansion to simulate from");
  }
  return simulate(*kl, n, grid, sigma2, seed, replicate);
}

Eigen::MatrixXd exact_grid_covariance(const processes::KernelSpec& spec, const GridDesign& grid) {
  const auto points = grid.points();
  const Eigen::Index p = static_cast<Eigen::Index>(grid.p);
  Eigen::MatrixXd cov(p, p);
  if (const auto* kl = std::get_if<processes::KLSpec>(&spec.kind)) {
    Eigen::MatrixXd psi = mode_matrix(*kl, points);
    Eigen::MatrixXd weighted = psi;
    for (Eigen::Index k = 0; k < psi.cols(); ++k) weighted.col(k) *= kl->eigenvalues[static_cast<std::size_t>(k)];
    cov.noalias() = weighted * psi.transpose();
  } else {
    for (Eigen::Index j = 0; j < p; ++j) {
      for (Eigen::Index k = j; k < p; ++k) {
        cov(j, k) = processes::kernel_eval(spec, points[static_cast<std::size_t>(j)], points[static_cast<std::size_t>(k)]);
      }
    }
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = j + 1; k < p; ++k) cov(k, j) = cov(j, k);
  }
  return cov;
}

void write_sample_csv(const SampleSet& sample, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  out << "i,j,t,y\n";
  char buf[64];
  for (Eigen::Index i = 0; i < sample.data.rows(); ++i) {
    for (Eigen::Index j = 0; j < sample.data.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", sample.data(i, j));
      out << (i + 1) << ',' << (j + 1) << ',' << sample.grid.point(j) << ',' << buf << '\n';
    }
  }
  if (!out) throw IoError(path, "write failed");
}

}  // namespace wfpca::sampling
