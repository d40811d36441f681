#include "wfpca/runner.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <new>
#include <optional>
#include <thread>
#include <tuple>

#include "wfpca/estimator.hpp"
#include "wfpca/processes.hpp"
#include "wfpca/sampling.hpp"
#include "wfpca/wavelet.hpp"

namespace wfpca::harness {

namespace {

struct Truth {
  processes::KLSpec spec;
  std::vector<double> samples;
  double lambda = 0.0;
};

Truth make_truth(const ExperimentConfig& cfg, double alpha, long long p, std::span<const double> fine) {
  processes::KLSpec spec = cfg.model == Model::Aliasing ? processes::aliasing_model(p, alpha)
                                                        : processes::fourier_model(alpha);
  if (static_cast<std::size_t>(cfg.ell) > spec.size()) throw ConfigError("target index exceeds the model's modes");
  const auto& mode = spec.modes[static_cast<std::size_t>(cfg.ell - 1)];
  std::vector<double> samples(fine.size());
  for (std::size_t i = 0; i < fine.size(); ++i) samples[i] = mode(fine[i]);
  const double lambda = spec.eigenvalues[static_cast<std::size_t>(cfg.ell - 1)];
  return Truth{std::move(spec), std::move(samples), lambda};
}

std::uint64_t cell_seed(std::uint64_t base, double alpha, long long n, long long p) {
  const auto a = std::bit_cast<std::uint64_t>(alpha);
  return sampling::stream_seed(sampling::stream_seed(base, a, static_cast<std::uint64_t>(n)), 0x5eed,
                               static_cast<std::uint64_t>(p));
}

metrics::ErrorRecord score(const std::string& model, double alpha, long long n, long long p, long long replicate,
                           const estimator::EigenEstimate& est, const Truth& truth, bool population) {
  const auto aligned = metrics::align_sign(est.samples, truth.samples);
  metrics::ErrorRecord rec;
  rec.model = model;
  rec.alpha = alpha;
  rec.n = n;
  rec.p = p;
  rec.replicate = replicate;
  rec.mse_eigenfunction = metrics::l2_error(est.samples, aligned.truth);
  rec.rse_eigenvalue = metrics::rse_eigenvalue(est.lambda_hat, truth.lambda);
  rec.is_population = population;
  return rec;
}

struct Job {
  std::size_t truth_index;
  double alpha;
  long long n;
  long long p;
  long long replicate;
};

}  // namespace

std::vector<Aggregate> aggregate(const std::vector<metrics::ErrorRecord>& rows) {
  using Key = std::tuple<std::string, double, long long, long long, bool>;
  std::map<Key, std::size_t> index;
  std::vector<Aggregate> out;
  std::vector<std::vector<const metrics::ErrorRecord*>> members;
  for (const auto& r : rows) {
    const Key key{r.model, r.alpha, r.n, r.p, r.is_population};
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      Aggregate a;
      a.model = r.model;
      a.alpha = r.alpha;
      a.n = r.n;
      a.p = r.p;
      a.is_population = r.is_population;
      out.push_back(a);
      members.emplace_back();
    }
    members[it->second].push_back(&r);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& m = members[i];
    const double count = static_cast<double>(m.size());
    double smse = 0.0, srse = 0.0;
    for (const auto* r : m) {
      smse += r->mse_eigenfunction;
      srse += r->rse_eigenvalue;
    }
    out[i].count = static_cast<long long>(m.size());
    out[i].mean_mse = smse / count;
    out[i].mean_rse = srse / count;
    if (m.size() > 1) {
      double vmse = 0.0, vrse = 0.0;
      for (const auto* r : m) {
        vmse += (r->mse_eigenfunction - out[i].mean_mse) * (r->mse_eigenfunction - out[i].mean_mse);
        vrse += (r->rse_eigenvalue - out[i].mean_rse) * (r->rse_eigenvalue - out[i].mean_rse);
      }
      out[i].se_mse = std::sqrt(vmse / (count - 1.0) / count);
      out[i].se_rse = std::sqrt(vrse / (count - 1.0) / count);
    }
  }
  return out;
}

ResultTable run(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string model = model_name(cfg.model);
  const auto basis = wavelet::cascade(wavelet::coiflet_filter(cfg.coiflet_order), cfg.cascade_depth);
  const auto fine = metrics::fine_grid(cfg.fine_grid);

  ResultTable table;
  std::vector<Truth> truths;
  std::vector<Job> jobs;
  for (double alpha : cfg.alphas) {
    std::optional<std::size_t> shared;  // the Fourier model does not depend on p
    for (long long p : cfg.ps) {
      std::size_t ti;
      if (cfg.model == Model::Fourier && shared) {
        ti = *shared;
      } else {
        truths.push_back(make_truth(cfg, alpha, p, fine));
        ti = truths.size() - 1;
        if (cfg.model == Model::Fourier) shared = ti;
      }
      const Truth& truth = truths[ti];

      const auto pop = estimator::population_coeff_covariance(processes::KernelSpec{truth.spec}, p);
      auto est = estimator::eigendecompose(pop, cfg.ell).back();
      est.samples = estimator::reconstruct(est, basis, fine);
      table.rows.push_back(score(model, alpha, 0, p, 0, est, truth, true));

      if (cfg.population_only) continue;
      for (long long n : cfg.ns) {
        for (int r = 0; r < cfg.replicates; ++r) jobs.push_back(Job{ti, alpha, n, p, r});
      }
    }
  }

  std::vector<std::optional<metrics::ErrorRecord>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  std::string failure;

  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      try {
        const Truth& truth = truths[job.truth_index];
        const auto grid = sampling::GridDesign::make(job.p);
        const auto sample = sampling::simulate(truth.spec, job.n, grid, cfg.sigma2,
                                               cell_seed(cfg.seed, job.alpha, job.n, job.p),
                                               static_cast<std::uint64_t>(job.replicate));
        const auto est = estimator::estimate_fpca(sample, basis, cfg.ell, fine, cfg.debias).back();
        results[i] = score(model, job.alpha, job.n, job.p, job.replicate, est, truth, false);
      } catch (const std::bad_alloc&) {
        std::lock_guard lock(failure_mutex);
        failed = true;
        failure = "out of memory at n=" + std::to_string(job.n) + " p=" + std::to_string(job.p);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        failed = true;
        failure = e.what();
      }
    }
  };

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1))));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (auto& r : results) {
    if (r) table.rows.push_back(std::move(*r));
  }
  if (failed) {
    table.complete = false;
    table.failure = failure;
  }
  table.aggregates = aggregate(table.rows);
  return table;
}

}  // namespace wfpca::harness
