#include "hdlrt/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "hdlrt/block_test.hpp"
#include "hdlrt/eqcov_test.hpp"
#include "hdlrt/error.hpp"
#include "hdlrt/matrix_core.hpp"
#include "hdlrt/normal.hpp"

namespace hdlrt {

TestKind parse_test_kind(std::string_view name) {
  if (name == "block") return TestKind::Block;
  if (name == "corr" || name == "correlation") return TestKind::Correlation;
  if (name == "eqcov") return TestKind::EqCov;
  throw Error(ErrorCode::ParseError,
              "unknown test '" + std::string(name) + "' (expected block, corr, eqcov)");
}

std::string_view to_string(TestKind kind) {
  switch (kind) {
    case TestKind::Block: return "block";
    case TestKind::Correlation: return "corr";
    case TestKind::EqCov: return "eqcov";
  }
  return "unknown";
}

namespace {

[[noreturn]] void invalid_plan(const std::string& message) {
  throw Error(ErrorCode::InvalidPlan, message);
}

std::size_t total_n(const SimulationPlan& plan) {
  if (plan.test == TestKind::EqCov) {
    return std::accumulate(plan.group_sizes.begin(), plan.group_sizes.end(), std::size_t{0});
  }
  return plan.n;
}

}  // namespace

BlockPartition plan_partition(const SimulationPlan& plan) {
  if (plan.test == TestKind::Correlation) return BlockPartition::unit(plan.p);
  switch (plan.scenario) {
    case Scenario::S1:
      if (plan.p == 0 || plan.p % 3 != 0) {
        invalid_plan("scenario 1 needs p divisible by 3, got p = " + std::to_string(plan.p));
      }
      return BlockPartition::scenario1(plan.p);
    case Scenario::S2:
      if (plan.p < 4 || plan.p % 2 != 0) {
        invalid_plan("scenario 2 needs an even p >= 4, got p = " + std::to_string(plan.p));
      }
      return BlockPartition::scenario2(plan.p);
    case Scenario::Custom:
      if (!plan.partition) invalid_plan("custom scenario without a partition");
      if (plan.partition->p() != plan.p) {
        invalid_plan("partition covers " + std::to_string(plan.partition->p()) +
                     " variables but p = " + std::to_string(plan.p));
      }
      return *plan.partition;
  }
  invalid_plan("unknown scenario");
}

void validate_plan(const SimulationPlan& plan) {
  if (plan.reps == 0) invalid_plan("reps must be positive");
  if (!(plan.alpha > 0.0 && plan.alpha < 1.0)) invalid_plan("alpha must lie in (0, 1)");
  if (!(plan.delta >= 0.0 && plan.delta < 1.0)) invalid_plan("delta must lie in [0, 1)");
  if (plan.p < 2) invalid_plan("p must be at least 2");
  if (plan.test == TestKind::EqCov) {
    if (plan.group_sizes.size() < 2) invalid_plan("eqcov needs at least two groups");
    for (std::size_t nj : plan.group_sizes) {
      if (nj <= plan.p) {
        invalid_plan("every group needs n_j > p, got n_j = " + std::to_string(nj) +
                     ", p = " + std::to_string(plan.p));
      }
    }
    return;
  }
  if (plan.p >= plan.n) {
    invalid_plan("the test needs p < n, got p = " + std::to_string(plan.p) +
                 ", n = " + std::to_string(plan.n));
  }
  const auto part = plan_partition(plan);
  if (plan.test == TestKind::Block && part.q() < 2) invalid_plan("the block test needs q >= 2");
}

std::vector<double> Histogram::edges() const {
  std::vector<double> e(bins + 1);
  const double width = (upper - lower) / static_cast<double>(bins);
  for (std::size_t k = 0; k <= bins; ++k) e[k] = lower + width * static_cast<double>(k);
  return e;
}

std::size_t Histogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

Histogram make_histogram(std::span<const double> values, std::size_t bins, double lower,
                         double upper) {
  if (bins == 0) throw Error(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  Histogram h{lower, upper, bins, std::vector<std::size_t>(bins + 2, 0)};
  const double width = (upper - lower) / static_cast<double>(bins);
  for (double v : values) {
    if (v < lower) {
      ++h.counts.front();
    } else if (v >= upper) {
      ++h.counts.back();
    } else {
      auto k = static_cast<std::size_t>((v - lower) / width);
      k = std::min(k, bins - 1);
      ++h.counts[k + 1];
    }
  }
  return h;
}

double ks_statistic(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = normal_cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / m - f, f - static_cast<double>(i) / m});
  }
  return d;
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(0.002 * k);
  return grid;
}

namespace {

struct Replication {
  double z = 0.0;
  bool reject = false;
};

// Everything a replication needs that does not depend on the replication.
struct Prepared {
  SimulationPlan plan;
  std::size_t n_total = 0;
  std::optional<BlockPartition> partition;
  std::optional<SymmetricMatrix> root;
  double mu = 0.0;
  double sigma = 1.0;
};

Prepared prepare(const SimulationPlan& plan) {
  validate_plan(plan);
  Prepared prep{plan, total_n(plan), std::nullopt, std::nullopt, 0.0, 1.0};
  switch (plan.test) {
    case TestKind::Block: {
      prep.partition = plan_partition(plan);
      const auto c = block_constants(plan.n, *prep.partition);
      prep.mu = c.mu_n;
      prep.sigma = c.sigma_n;
      break;
    }
    case TestKind::Correlation: {
      const auto c = correlation_constants(plan.n, plan.p);
      prep.mu = c.mu_n;
      prep.sigma = c.sigma_n;
      break;
    }
    case TestKind::EqCov: {
      const auto c = eqcov_constants(plan.group_sizes, plan.p);
      prep.mu = c.mu_n;
      prep.sigma = c.scale();
      break;
    }
  }
  if (plan.delta > 0.0) prep.root = compound_symmetry_sqrt(plan.delta, plan.p);
  return prep;
}

Replication replicate(const Prepared& prep, std::uint64_t r) {
  const auto& plan = prep.plan;
  DataMatrix x = sample_entry_matrix(prep.n_total, plan.p, plan.dist, plan.seed, r);

  double statistic = 0.0;
  switch (plan.test) {
    case TestKind::Block:
      if (prep.root) x = apply_root(x, *prep.root);
      statistic = log_vn(x, *prep.partition);
      break;
    case TestKind::Correlation:
      if (prep.root) x = apply_root(x, *prep.root);
      statistic = log_det_correlation(x);
      break;
    case TestKind::EqCov: {
      std::vector<DataMatrix> groups;
      groups.reserve(plan.group_sizes.size());
      std::size_t offset = 0;
      for (std::size_t j = 0; j < plan.group_sizes.size(); ++j) {
        const std::size_t nj = plan.group_sizes[j];
        const auto v = x.matrix().values().subspan(offset * plan.p, nj * plan.p);
        DataMatrix g(nj, plan.p, std::vector<double>(v.begin(), v.end()));
        if (j == 0 && prep.root) g = apply_root(g, *prep.root);
        groups.push_back(std::move(g));
        offset += nj;
      }
      statistic = 2.0 * log_lambda2(GroupedSample(std::move(groups)));
      break;
    }
  }
  const auto report = make_report(statistic, prep.mu, prep.sigma, plan.alpha);
  return {report.z, report.reject};
}

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

SimulationResult run(const SimulationPlan& plan, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Prepared prep = prepare(plan);

  std::vector<Replication> out(plan.reps);
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::size_t failed_at = plan.reps;
  std::exception_ptr failure;

  auto worker = [&] {
    while (true) {
      const std::size_t r = next.fetch_add(1);
      if (r >= plan.reps) return;
      try {
        out[r] = replicate(prep, r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        // Report the lowest failing replication so errors are schedule-free too.
        if (r < failed_at) {
          failed_at = r;
          failure = std::current_exception();
        }
      }
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(options.threads), plan.reps));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  SimulationResult result;
  result.delta = plan.delta;
  result.reps = plan.reps;
  result.z_samples.reserve(plan.reps);
  for (const auto& rep : out) {
    result.z_samples.push_back(rep.z);
    if (rep.reject) ++result.rejections;
  }
  const double reps = static_cast<double>(plan.reps);
  result.rejection_rate = static_cast<double>(result.rejections) / reps;
  result.standard_error =
      std::sqrt(result.rejection_rate * (1.0 - result.rejection_rate) / reps);
  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

SimulationResult run_level(const SimulationPlan& plan, const RunOptions& options) {
  if (plan.delta != 0.0) invalid_plan("a level run needs delta = 0");
  return run(plan, options);
}

SimulationResult run_power(const SimulationPlan& plan, const RunOptions& options) {
  return run(plan, options);
}

std::vector<SimulationResult> run_power_curve(const SimulationPlan& plan,
                                              std::span<const double> deltas,
                                              const RunOptions& options) {
  std::vector<SimulationResult> results;
  results.reserve(deltas.size());
  for (double delta : deltas) {
    SimulationPlan at = plan;
    at.delta = delta;
    results.push_back(run_power(at, options));
  }
  return results;
}

SimulationResult run_histogram(const SimulationPlan& plan, std::size_t bins,
                               const RunOptions& options) {
  if (bins == 0) invalid_plan("histogram needs at least one bin");
  auto result = run_level(plan, options);
  result.histogram = make_histogram(result.z_samples, bins);
  result.ks = ks_statistic(result.z_samples);
  return result;
}

}  // namespace hdlrt
