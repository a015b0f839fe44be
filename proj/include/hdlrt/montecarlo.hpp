#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hdlrt/matrix.hpp"
#include "hdlrt/sampling.hpp"

namespace hdlrt {

enum class TestKind { Block, Correlation, EqCov };

// Block layouts used in the power study.
enum class Scenario {
  S1,      // q = 3 blocks of size p/3
  S2,      // q = p/2 blocks: p/2 - 1 singletons and one block of size p/2 + 1
  Custom,  // explicit partition
};

TestKind parse_test_kind(std::string_view name);
std::string_view to_string(TestKind kind);

struct SimulationPlan {
  TestKind test = TestKind::Block;
  std::size_t n = 0;                     // Block / Correlation
  std::vector<std::size_t> group_sizes;  // EqCov
  std::size_t p = 0;
  Scenario scenario = Scenario::S1;
  std::optional<BlockPartition> partition;  // Scenario::Custom
  double delta = 0.0;
  DistributionSpec dist;
  std::size_t reps = 1000;
  double alpha = 0.05;
  Seed seed{};
};

// Partition the plan's block test runs on. Throws InvalidPlan when the
// scenario does not fit p.
BlockPartition plan_partition(const SimulationPlan& plan);

// Throws InvalidPlan describing the first problem found.
void validate_plan(const SimulationPlan& plan);

// Equal-width bins over [lower, upper) plus an underflow bin (counts.front())
// and an overflow bin (counts.back()).
struct Histogram {
  double lower = -4.0;
  double upper = 4.0;
  std::size_t bins = 40;
  std::vector<std::size_t> counts;

  std::vector<double> edges() const;
  std::size_t total() const;
};

Histogram make_histogram(std::span<const double> values, std::size_t bins, double lower = -4.0,
                         double upper = 4.0);

// Kolmogorov-Smirnov distance between the empirical CDF of `values` and Phi.
double ks_statistic(std::span<const double> values);

struct SimulationResult {
  double delta = 0.0;
  std::size_t reps = 0;
  std::size_t rejections = 0;
  double rejection_rate = 0.0;
  double standard_error = 0.0;
  std::vector<double> z_samples;  // indexed by replication
  std::optional<Histogram> histogram;
  std::optional<double> ks;
  double runtime_seconds = 0.0;
};

struct RunOptions {
  // 0 selects std::thread::hardware_concurrency(). Never affects results.
  unsigned threads = 0;
};

// Null level: delta must be 0.
SimulationResult run_level(const SimulationPlan& plan, const RunOptions& options = {});

// Rejection rate with data drawn from (1 - delta) I + delta 1. For the
// equality-of-covariances test the alternative is applied to group 1 only.
SimulationResult run_power(const SimulationPlan& plan, const RunOptions& options = {});

// run_power over a grid of deltas; replication r uses stream r for every
// delta (common random numbers).
std::vector<SimulationResult> run_power_curve(const SimulationPlan& plan,
                                              std::span<const double> deltas,
                                              const RunOptions& options = {});

// Null run keeping z samples, histogram over [-4, 4] and the KS distance.
SimulationResult run_histogram(const SimulationPlan& plan, std::size_t bins = 40,
                               const RunOptions& options = {});

// Default power grid {0, 0.002, ..., 0.02}.
std::vector<double> default_delta_grid();

}  // namespace hdlrt
