#include <gtest/gtest.h>

#include <cmath>

#include "hdlrt/error.hpp"
#include "hdlrt/montecarlo.hpp"

namespace hdlrt {
namespace {

SimulationPlan small_block_plan() {
  SimulationPlan plan;
  plan.test = TestKind::Block;
  plan.n = 40;
  plan.p = 12;
  plan.scenario = Scenario::S1;
  plan.reps = 200;
  plan.seed = Seed{42};
  return plan;
}

void expect_same(const SimulationResult& a, const SimulationResult& b) {
  EXPECT_EQ(a.reps, b.reps);
  EXPECT_EQ(a.rejections, b.rejections);
  EXPECT_EQ(a.rejection_rate, b.rejection_rate);
  EXPECT_EQ(a.standard_error, b.standard_error);
  EXPECT_EQ(a.z_samples, b.z_samples);
}

TEST(RunLevel, SingleReplication) {
  auto plan = small_block_plan();
  plan.reps = 1;
  const auto r = run_level(plan);
  EXPECT_TRUE(r.rejection_rate == 0.0 || r.rejection_rate == 1.0);
  EXPECT_EQ(r.standard_error, 0.0);
  EXPECT_EQ(r.z_samples.size(), 1u);
}

TEST(RunLevel, ThreadCountDoesNotChangeResults) {
  for (TestKind kind : {TestKind::Block, TestKind::Correlation, TestKind::EqCov}) {
    auto plan = small_block_plan();
    plan.test = kind;
    plan.group_sizes = {30, 25, 20};
    plan.dist = DistributionSpec::standardized_t(15);
    const auto one = run_level(plan, RunOptions{1});
    const auto eight = run_level(plan, RunOptions{8});
    expect_same(one, eight);
  }
}

TEST(RunLevel, StandardErrorFormula) {
  const auto r = run_level(small_block_plan());
  EXPECT_DOUBLE_EQ(r.rejection_rate, static_cast<double>(r.rejections) / 200.0);
  EXPECT_DOUBLE_EQ(r.standard_error,
                   std::sqrt(r.rejection_rate * (1.0 - r.rejection_rate) / 200.0));
}

TEST(RunLevel, RejectsNonZeroDelta) {
  auto plan = small_block_plan();
  plan.delta = 0.1;
  EXPECT_THROW(run_level(plan), Error);
}

TEST(RunPower, ZeroDeltaEqualsLevel) {
  const auto plan = small_block_plan();
  expect_same(run_power(plan), run_level(plan));
}

TEST(RunPower, StrongAlternativeIsDetected) {
  auto plan = small_block_plan();
  plan.n = 100;
  plan.p = 60;
  plan.scenario = Scenario::S2;
  plan.delta = 0.1;
  plan.reps = 50;
  EXPECT_GE(run_power(plan).rejection_rate, 0.9);
}

TEST(RunPower, CurveUsesCommonStreams) {
  const auto plan = small_block_plan();
  const std::vector<double> deltas = {0.0, 0.05};
  const auto curve = run_power_curve(plan, deltas);
  ASSERT_EQ(curve.size(), 2u);
  expect_same(curve[0], run_level(plan));
  EXPECT_EQ(curve[1].delta, 0.05);
}

TEST(RunHistogram, MassEqualsReps) {
  auto plan = small_block_plan();
  const auto r = run_histogram(plan, 16);
  ASSERT_TRUE(r.histogram);
  ASSERT_TRUE(r.ks);
  EXPECT_EQ(r.histogram->total(), plan.reps);
  EXPECT_EQ(r.histogram->counts.size(), 18u);
  for (double z : r.z_samples) EXPECT_TRUE(std::isfinite(z));
  EXPECT_GE(*r.ks, 0.0);
  EXPECT_LE(*r.ks, 1.0);
}

TEST(Histogram, EdgesAndOverflow) {
  const std::vector<double> v = {-5.0, -4.0, -0.5, 0.0, 3.999, 4.0, 9.0};
  const auto h = make_histogram(v, 8);
  EXPECT_EQ(h.edges().front(), -4.0);
  EXPECT_EQ(h.edges().back(), 4.0);
  EXPECT_EQ(h.counts.front(), 1u);
  EXPECT_EQ(h.counts.back(), 2u);
  EXPECT_EQ(h.counts[1], 1u);   // [-4, -3)
  EXPECT_EQ(h.counts[4], 1u);   // [-1, 0)
  EXPECT_EQ(h.counts[5], 1u);   // [0, 1)
  EXPECT_EQ(h.counts[8], 1u);   // [3, 4)
  EXPECT_EQ(h.total(), v.size());
}

TEST(KsStatistic, SinglePointAtZero) {
  const std::vector<double> v = {0.0};
  EXPECT_DOUBLE_EQ(ks_statistic(v), 0.5);
}

TEST(ValidatePlan, Rejections) {
  auto bad = small_block_plan();
  bad.p = 10;  // not divisible by 3
  EXPECT_THROW(validate_plan(bad), Error);
  bad = small_block_plan();
  bad.scenario = Scenario::S2;
  bad.p = 11;
  EXPECT_THROW(validate_plan(bad), Error);
  bad = small_block_plan();
  bad.p = 42;
  bad.n = 40;
  EXPECT_THROW(validate_plan(bad), Error);
  bad = small_block_plan();
  bad.reps = 0;
  EXPECT_THROW(validate_plan(bad), Error);
  bad = small_block_plan();
  bad.test = TestKind::EqCov;
  bad.group_sizes = {30, 12};
  EXPECT_THROW(validate_plan(bad), Error);
  bad = small_block_plan();
  bad.scenario = Scenario::Custom;
  EXPECT_THROW(validate_plan(bad), Error);
  try {
    bad.alpha = 2.0;
    validate_plan(bad);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidPlan);
  }
}

TEST(PlanPartition, Scenarios) {
  auto plan = small_block_plan();
  plan.p = 60;
  EXPECT_EQ(plan_partition(plan).sizes(), (std::vector<std::size_t>{20, 20, 20}));
  plan.scenario = Scenario::S2;
  const auto s2 = plan_partition(plan);
  EXPECT_EQ(s2.q(), 30u);
  EXPECT_EQ(s2.size(29), 31u);
  plan.test = TestKind::Correlation;
  EXPECT_EQ(plan_partition(plan).q(), 60u);
}

// Splitting 2000 replications over two seeds agrees with one run within
// 3 pooled standard errors.
TEST(RunLevel, SplitAcrossSeeds) {
  auto plan = small_block_plan();
  plan.reps = 2000;
  const auto whole = run_level(plan);
  plan.reps = 1000;
  plan.seed = Seed{1001};
  const auto a = run_level(plan);
  plan.seed = Seed{1002};
  const auto b = run_level(plan);
  const double pooled = static_cast<double>(a.rejections + b.rejections) / 2000.0;
  const double rate = whole.rejection_rate;
  const double p_bar = (pooled + rate) / 2.0;
  const double se = std::sqrt(p_bar * (1.0 - p_bar) * (2.0 / 2000.0));
  EXPECT_LE(std::abs(pooled - rate), 3.0 * se);
}

TEST(DefaultDeltaGrid, Values) {
  const auto g = default_delta_grid();
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_NEAR(g.back(), 0.02, 1e-15);
}

TEST(ParseTestKind, Names) {
  EXPECT_EQ(parse_test_kind("block"), TestKind::Block);
  EXPECT_EQ(parse_test_kind("corr"), TestKind::Correlation);
  EXPECT_EQ(parse_test_kind("eqcov"), TestKind::EqCov);
  EXPECT_EQ(to_string(TestKind::EqCov), "eqcov");
  EXPECT_THROW(parse_test_kind("other"), Error);
}

}  // namespace
}  // namespace hdlrt
