#include "hdlrt/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "hdlrt/block_test.hpp"
#include "hdlrt/csv.hpp"
#include "hdlrt/eqcov_test.hpp"
#include "hdlrt/error.hpp"
#include "oracle/oracle.hpp"

namespace hdlrt::cli {

using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

json report_to_json(const TestReport& r) {
  return json{{"log_statistic", r.log_statistic},
              {"mu", r.mu},
              {"sigma", r.sigma},
              {"z", r.z},
              {"p_value", r.p_value},
              {"alpha", r.alpha},
              {"critical_value", r.critical_value},
              {"reject", r.reject},
              {"assumption_warnings", r.assumption_warnings}};
}

TestReport report_from_json(const json& j) {
  TestReport r;
  r.log_statistic = j.at("log_statistic").get<double>();
  r.mu = j.at("mu").get<double>();
  r.sigma = j.at("sigma").get<double>();
  r.z = j.at("z").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.critical_value = j.at("critical_value").get<double>();
  r.reject = j.at("reject").get<bool>();
  r.assumption_warnings = j.at("assumption_warnings").get<std::vector<std::string>>();
  return r;
}

std::string simulation_csv(const std::vector<SimulationResult>& results, std::uint64_t seed) {
  std::ostringstream os;
  os << "delta,reps,rejections,rate,se,seed\n";
  for (const auto& r : results) {
    os << format_double(r.delta) << ',' << r.reps << ',' << r.rejections << ','
       << format_double(r.rejection_rate) << ',' << format_double(r.standard_error) << ','
       << seed << '\n';
  }
  return os.str();
}

namespace {

enum class Format { Json, Csv };

struct Options {
  // test / debug
  std::vector<std::string> inputs;
  std::string partition;
  int scenario = 0;
  double alpha = 0.05;
  std::string route = "projection";
  // simulate
  std::string test = "block";
  std::size_t n = 0;
  std::size_t p = 0;
  std::string groups;
  std::string dist = "normal";
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  double delta = 0.0;
  std::vector<double> deltas;
  std::size_t bins = 40;
  unsigned threads = 0;
  bool timing = false;
  // output
  std::string output;
  std::string format = "json";
};

Format parse_format(const std::string& f) { return f == "csv" ? Format::Csv : Format::Json; }

DeterminantRoute parse_route(const std::string& r) {
  return r == "cholesky" ? DeterminantRoute::Cholesky : DeterminantRoute::Projection;
}

unsigned resolve_threads(const Options& o) {
  if (o.threads != 0) return o.threads;
  if (const char* env = std::getenv("HDLRT_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 0;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  // Accept the same syntax as partitions ("100,100,100" or "3x100").
  return BlockPartition::parse(text).sizes();
}

BlockPartition resolve_partition(const Options& o, std::size_t p) {
  if (!o.partition.empty()) {
    auto part = BlockPartition::parse(o.partition);
    if (part.p() != p) {
      throw Error(ErrorCode::InvalidDesign, "partition covers " + std::to_string(part.p()) +
                                                " variables but the data has p = " +
                                                std::to_string(p));
    }
    return part;
  }
  if (o.scenario == 1) return BlockPartition::scenario1(p);
  if (o.scenario == 2) return BlockPartition::scenario2(p);
  throw Error(ErrorCode::InvalidArgument, "give --partition or --scenario 1|2");
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot write '" + o.output + "'");
  file << text;
  if (!file) throw Error(ErrorCode::IoError, "failed writing '" + o.output + "'");
}

std::string report_csv(const TestReport& r) {
  std::ostringstream os;
  os << "log_statistic,mu,sigma,z,p_value,alpha,critical_value,reject\n"
     << format_double(r.log_statistic) << ',' << format_double(r.mu) << ','
     << format_double(r.sigma) << ',' << format_double(r.z) << ',' << format_double(r.p_value)
     << ',' << format_double(r.alpha) << ',' << format_double(r.critical_value) << ','
     << (r.reject ? "true" : "false") << '\n';
  return os.str();
}

void emit_report(const Options& o, std::ostream& out, std::ostream& err, const TestReport& r,
                 json extra) {
  for (const auto& w : r.assumption_warnings) err << "warning: " << w << '\n';
  if (parse_format(o.format) == Format::Csv) {
    emit(o, out, report_csv(r));
    return;
  }
  json j = std::move(extra);
  j.update(report_to_json(r));
  emit(o, out, j.dump(2) + "\n");
}

void cmd_test_block(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.inputs.size() != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one --input");
  const auto data = parse_csv(o.inputs.front());
  const auto part = resolve_partition(o, data.p());
  const auto report = block_test(data, part, o.alpha, parse_route(o.route));
  const auto c = block_constants(data.n(), part);
  emit_report(o, out, err, report,
              json{{"test", "block"},
                   {"n", data.n()},
                   {"p", data.p()},
                   {"partition", part.sizes()},
                   {"route", o.route},
                   {"constants", {{"mu_n", c.mu_n}, {"sigma_n", c.sigma_n}}}});
}

void cmd_test_corr(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.inputs.size() != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one --input");
  const auto data = parse_csv(o.inputs.front());
  const auto report = correlation_test(data, o.alpha);
  const auto c = correlation_constants(data.n(), data.p());
  emit_report(o, out, err, report,
              json{{"test", "corr"},
                   {"n", data.n()},
                   {"p", data.p()},
                   {"constants", {{"mu_n", c.mu_n}, {"sigma_n", c.sigma_n}}}});
}

void cmd_test_eqcov(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.inputs.size() < 2) {
    throw Error(ErrorCode::InvalidDesign, "equality of covariances needs at least two --input files");
  }
  std::vector<DataMatrix> groups;
  for (const auto& path : o.inputs) groups.push_back(parse_csv(path));
  const GroupedSample sample(std::move(groups));
  const auto route = o.route == "projection" ? DeterminantRoute::Projection
                                             : DeterminantRoute::Cholesky;
  const auto report = eqcov_test(sample, o.alpha, route);
  const auto sizes = sample.sizes();
  const auto c = eqcov_constants(sizes, sample.p());
  emit_report(o, out, err, report,
              json{{"test", "eqcov"},
                   {"n", sample.n()},
                   {"p", sample.p()},
                   {"group_sizes", sizes},
                   {"route", o.route},
                   {"constants", {{"mu_n", c.mu_n}, {"sigma_n", c.sigma_n}, {"scale", c.scale()}}}});
}

SimulationPlan make_plan(const Options& o) {
  SimulationPlan plan;
  plan.test = parse_test_kind(o.test);
  plan.p = o.p;
  plan.n = o.n;
  plan.dist = DistributionSpec::parse(o.dist);
  plan.reps = o.reps;
  plan.alpha = o.alpha;
  plan.seed = Seed{o.seed};
  plan.delta = o.delta;
  if (plan.test == TestKind::EqCov) {
    if (o.groups.empty()) throw Error(ErrorCode::InvalidPlan, "eqcov simulations need --groups");
    plan.group_sizes = parse_size_list(o.groups);
  } else if (plan.test == TestKind::Block) {
    if (!o.partition.empty()) {
      plan.scenario = Scenario::Custom;
      plan.partition = BlockPartition::parse(o.partition);
    } else if (o.scenario == 1 || o.scenario == 2) {
      plan.scenario = o.scenario == 1 ? Scenario::S1 : Scenario::S2;
    } else {
      throw Error(ErrorCode::InvalidPlan, "block simulations need --scenario 1|2 or --blocks");
    }
  }
  return plan;
}

json plan_json(const SimulationPlan& plan) {
  json j{{"test", std::string(to_string(plan.test))},
         {"p", plan.p},
         {"dist", plan.dist.name()},
         {"reps", plan.reps},
         {"alpha", plan.alpha},
         {"seed", plan.seed.value}};
  if (plan.test == TestKind::EqCov) {
    j["group_sizes"] = plan.group_sizes;
  } else {
    j["n"] = plan.n;
    j["partition"] = plan_partition(plan).sizes();
  }
  return j;
}

json result_json(const SimulationResult& r, bool timing) {
  json j{{"delta", r.delta},
         {"reps", r.reps},
         {"rejections", r.rejections},
         {"rate", r.rejection_rate},
         {"se", r.standard_error}};
  if (timing) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

void cmd_simulate(const std::string& mode, const Options& o, std::ostream& out) {
  auto plan = make_plan(o);
  const RunOptions run_options{resolve_threads(o)};
  const Format format = parse_format(o.format);

  if (mode == "hist") {
    plan.delta = 0.0;
    const auto r = run_histogram(plan, o.bins, run_options);
    if (format == Format::Csv) {
      std::ostringstream os;
      os << "replication,z\n";
      for (std::size_t k = 0; k < r.z_samples.size(); ++k) {
        os << k << ',' << format_double(r.z_samples[k]) << '\n';
      }
      emit(o, out, os.str());
      return;
    }
    json j{{"plan", plan_json(plan)}, {"results", json::array({result_json(r, o.timing)})}};
    j["ks"] = *r.ks;
    j["histogram"] = {{"edges", r.histogram->edges()},
                      {"underflow", r.histogram->counts.front()},
                      {"overflow", r.histogram->counts.back()},
                      {"counts", std::vector<std::size_t>(r.histogram->counts.begin() + 1,
                                                          r.histogram->counts.end() - 1)}};
    j["z_samples"] = r.z_samples;
    emit(o, out, j.dump(2) + "\n");
    return;
  }

  std::vector<SimulationResult> results;
  if (mode == "level") {
    if (plan.delta != 0.0) throw Error(ErrorCode::InvalidPlan, "simulate level runs at delta = 0");
    results.push_back(run_level(plan, run_options));
  } else {
    const auto deltas = o.deltas.empty() ? default_delta_grid() : o.deltas;
    results = run_power_curve(plan, deltas, run_options);
  }
  if (format == Format::Csv) {
    emit(o, out, simulation_csv(results, plan.seed.value));
    return;
  }
  json rows = json::array();
  for (const auto& r : results) rows.push_back(result_json(r, o.timing));
  emit(o, out, json{{"plan", plan_json(plan)}, {"results", rows}}.dump(2) + "\n");
}

void cmd_debug_trace(const Options& o, std::ostream& out) {
  if (o.inputs.size() != 1) throw Error(ErrorCode::InvalidArgument, "give exactly one --input");
  const auto data = parse_csv(o.inputs.front());
  const auto part = resolve_partition(o, data.p());
  const auto trace = oracle::martingale_trace(data, part);
  std::ostringstream os;
  os << "column,block,quad_form,block_quad_form,x,x_block,sigma1_term\n";
  for (std::size_t i = 0; i < data.p(); ++i) {
    os << i << ',' << part.block_of(i) << ',' << format_double(trace.quad_forms[i]) << ','
       << format_double(trace.block_quad_forms[i]) << ',';
    if (i >= trace.first_step) {
      const std::size_t k = i - trace.first_step;
      const double n = static_cast<double>(trace.n);
      const double full_df = n - static_cast<double>(i);
      const double block_df = full_df + static_cast<double>(part.start(part.block_of(i)));
      os << format_double(trace.x_terms[k]) << ',' << format_double(trace.x_block_terms[k]) << ','
         << format_double(2.0 * (1.0 / full_df - 1.0 / block_df));
    } else {
      os << ",,";
    }
    os << '\n';
  }
  emit(o, out, os.str());
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::RaggedRows:
      return kExitIo;
    default:
      return kExitAssumption;
  }
}

void add_output_options(CLI::App* cmd, Options& o) {
  cmd->add_option("-o,--output", o.output, "Output path (default: stdout)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

void add_simulation_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--test", o.test, "block | corr | eqcov")
      ->check(CLI::IsMember({"block", "corr", "correlation", "eqcov"}));
  cmd->add_option("--n", o.n, "Sample size (block, corr)");
  cmd->add_option("--p", o.p, "Dimension")->required();
  cmd->add_option("--scenario", o.scenario, "Block scenario 1 (q = 3) or 2 (q = p/2)")
      ->check(CLI::IsMember({1, 2}));
  cmd->add_option("--blocks,--partition", o.partition, "Explicit partition, e.g. 30x2 or 2,2,3");
  cmd->add_option("--groups", o.groups, "Group sizes for eqcov, e.g. 100,100,100 or 3x100");
  cmd->add_option("--dist", o.dist, "normal | t<df> | exp");
  cmd->add_option("--reps", o.reps, "Replications");
  cmd->add_option("--alpha", o.alpha, "Nominal level");
  cmd->add_option("--seed", o.seed, "64-bit seed");
  cmd->add_option("--threads", o.threads,
                  "Worker threads (default: $HDLRT_THREADS or all cores); never changes results");
  cmd->add_flag("--timing", o.timing, "Include runtime_seconds in JSON output");
  add_output_options(cmd, o);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"High-dimensional likelihood-ratio covariance tests", "hdlrt"};
  app.require_subcommand(1);
  Options o;

  auto* test = app.add_subcommand("test", "Run a test on CSV data");
  test->require_subcommand(1);
  auto* t_block = test->add_subcommand("block", "Block-diagonal covariance test");
  auto* t_corr = test->add_subcommand("corr", "Diagonal covariance test on the correlation determinant");
  auto* t_eqcov = test->add_subcommand("eqcov", "Equality of covariance matrices across groups");
  for (auto* cmd : {t_block, t_corr, t_eqcov}) {
    cmd->add_option("-i,--input", o.inputs, "CSV file (rows = observations)")->required();
    cmd->add_option("--alpha", o.alpha, "Nominal level");
    add_output_options(cmd, o);
  }
  for (auto* cmd : {t_block, t_eqcov}) {
    cmd->add_option("--route", o.route, "Determinant route")
        ->check(CLI::IsMember({"projection", "cholesky"}));
  }
  o.route = "";
  t_block->add_option("--partition,--blocks", o.partition, "Block sizes, e.g. 2,2,3 or 30x2");
  t_block->add_option("--scenario", o.scenario, "Partition from p: 1 (q = 3) or 2 (q = p/2)")
      ->check(CLI::IsMember({1, 2}));

  auto* sim = app.add_subcommand("simulate", "Monte Carlo experiments");
  sim->require_subcommand(1);
  auto* s_level = sim->add_subcommand("level", "Empirical level under the null");
  auto* s_power = sim->add_subcommand("power", "Rejection rates over a delta grid");
  auto* s_hist = sim->add_subcommand("hist", "Null z samples, histogram and KS distance");
  for (auto* cmd : {s_level, s_power, s_hist}) add_simulation_options(cmd, o);
  s_power->add_option("--deltas", o.deltas, "Comma-separated delta grid")->delimiter(',');
  s_hist->add_option("--bins", o.bins, "Histogram bins over [-4, 4]");

  auto* debug = app.add_subcommand("debug", "")->group("");
  debug->require_subcommand(1);
  auto* d_trace = debug->add_subcommand("trace", "Martingale-term diagnostics as CSV");
  d_trace->add_option("-i,--input", o.inputs, "CSV file")->required();
  d_trace->add_option("--partition,--blocks", o.partition, "Block sizes");
  d_trace->add_option("--scenario", o.scenario, "Partition from p")->check(CLI::IsMember({1, 2}));
  d_trace->add_option("-o,--output", o.output, "Output path (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (t_block->parsed()) {
      if (o.route.empty()) o.route = "projection";
      cmd_test_block(o, out, err);
    } else if (t_corr->parsed()) {
      cmd_test_corr(o, out, err);
    } else if (t_eqcov->parsed()) {
      if (o.route.empty()) o.route = "cholesky";
      cmd_test_eqcov(o, out, err);
    } else if (s_level->parsed()) {
      cmd_simulate("level", o, out);
    } else if (s_power->parsed()) {
      cmd_simulate("power", o, out);
    } else if (s_hist->parsed()) {
      cmd_simulate("hist", o, out);
    } else if (d_trace->parsed()) {
      cmd_debug_trace(o, out);
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace hdlrt::cli
