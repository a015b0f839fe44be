#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hdlrt/block_test.hpp"
#include "hdlrt/eqcov_test.hpp"
#include "hdlrt/error.hpp"
#include "hdlrt/montecarlo.hpp"

namespace py = pybind11;
using namespace hdlrt;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DataMatrix to_data(const Array& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a 2-d array (n, p)");
  const auto n = static_cast<std::size_t>(a.shape(0));
  const auto p = static_cast<std::size_t>(a.shape(1));
  return DataMatrix(n, p, std::vector<double>(a.data(), a.data() + n * p));
}

BlockPartition to_partition(const py::object& part) {
  if (py::isinstance<py::str>(part)) return BlockPartition::parse(part.cast<std::string>());
  return BlockPartition(part.cast<std::vector<std::size_t>>());
}

DeterminantRoute to_route(const std::string& route) {
  if (route == "projection") return DeterminantRoute::Projection;
  if (route == "cholesky") return DeterminantRoute::Cholesky;
  throw Error(ErrorCode::InvalidArgument, "route must be 'projection' or 'cholesky'");
}

GroupedSample to_groups(const std::vector<Array>& groups) {
  std::vector<DataMatrix> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(to_data(g));
  return GroupedSample(std::move(out));
}

py::dict result_dict(const SimulationResult& r) {
  py::dict d;
  d["delta"] = r.delta;
  d["reps"] = r.reps;
  d["rejections"] = r.rejections;
  d["rate"] = r.rejection_rate;
  d["se"] = r.standard_error;
  d["z"] = py::array_t<double>(static_cast<py::ssize_t>(r.z_samples.size()), r.z_samples.data());
  if (r.ks) d["ks"] = *r.ks;
  if (r.histogram) {
    d["edges"] = r.histogram->edges();
    d["counts"] = r.histogram->counts;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Likelihood-ratio tests for high-dimensional covariance structure";

  py::register_exception<Error>(m, "HdlrtError", PyExc_ValueError);

  py::class_<TestReport>(m, "TestReport")
      .def_readonly("log_statistic", &TestReport::log_statistic)
      .def_readonly("mu", &TestReport::mu)
      .def_readonly("sigma", &TestReport::sigma)
      .def_readonly("z", &TestReport::z)
      .def_readonly("p_value", &TestReport::p_value)
      .def_readonly("alpha", &TestReport::alpha)
      .def_readonly("critical_value", &TestReport::critical_value)
      .def_readonly("reject", &TestReport::reject)
      .def_readonly("assumption_warnings", &TestReport::assumption_warnings)
      .def("__repr__", [](const TestReport& r) {
        return "TestReport(z=" + std::to_string(r.z) + ", p_value=" + std::to_string(r.p_value) +
               ", reject=" + (r.reject ? "True" : "False") + ")";
      });

  m.def(
      "log_vn",
      [](const Array& x, const py::object& partition, const std::string& route) {
        return log_vn(to_data(x), to_partition(partition), to_route(route));
      },
      py::arg("x"), py::arg("partition"), py::arg("route") = "projection");

  m.def(
      "block_constants",
      [](std::size_t n, const py::object& partition) {
        const auto c = block_constants(n, to_partition(partition));
        return py::make_tuple(c.mu_n, c.sigma_n);
      },
      py::arg("n"), py::arg("partition"), "(mu_n, sigma_n) of the block test");

  m.def(
      "block_test",
      [](const Array& x, const py::object& partition, double alpha, const std::string& route) {
        return block_test(to_data(x), to_partition(partition), alpha, to_route(route));
      },
      py::arg("x"), py::arg("partition"), py::arg("alpha") = 0.05,
      py::arg("route") = "projection");

  m.def("log_det_correlation", [](const Array& x) { return log_det_correlation(to_data(x)); },
        py::arg("x"));

  m.def(
      "correlation_constants",
      [](std::size_t n, std::size_t p) {
        const auto c = correlation_constants(n, p);
        return py::make_tuple(c.mu_n, c.sigma_n);
      },
      py::arg("n"), py::arg("p"));

  m.def(
      "correlation_test",
      [](const Array& x, double alpha) { return correlation_test(to_data(x), alpha); },
      py::arg("x"), py::arg("alpha") = 0.05);

  m.def(
      "log_lambda",
      [](const std::vector<Array>& groups, const std::string& route) {
        return log_lambda2(to_groups(groups), to_route(route));
      },
      py::arg("groups"), py::arg("route") = "cholesky");

  m.def(
      "eqcov_test",
      [](const std::vector<Array>& groups, double alpha, const std::string& route) {
        return eqcov_test(to_groups(groups), alpha, to_route(route));
      },
      py::arg("groups"), py::arg("alpha") = 0.05, py::arg("route") = "cholesky");

  m.def(
      "simulate",
      [](const std::string& mode, const std::string& test, std::size_t p, std::size_t n,
         const std::vector<std::size_t>& groups, const py::object& partition, int scenario,
         const std::string& dist, std::size_t reps, double alpha, std::uint64_t seed,
         const std::vector<double>& deltas, std::size_t bins, unsigned threads) {
        SimulationPlan plan;
        plan.test = parse_test_kind(test);
        plan.n = n;
        plan.p = p;
        plan.group_sizes = groups;
        plan.dist = DistributionSpec::parse(dist);
        plan.reps = reps;
        plan.alpha = alpha;
        plan.seed = Seed{seed};
        if (!partition.is_none()) {
          plan.scenario = Scenario::Custom;
          plan.partition = to_partition(partition);
        } else {
          plan.scenario = scenario == 2 ? Scenario::S2 : Scenario::S1;
        }
        const RunOptions options{threads};
        std::vector<SimulationResult> results;
        {
          py::gil_scoped_release release;
          if (mode == "level") {
            results.push_back(run_level(plan, options));
          } else if (mode == "power") {
            results =
                run_power_curve(plan, deltas.empty() ? default_delta_grid() : deltas, options);
          } else if (mode == "hist") {
            results.push_back(run_histogram(plan, bins, options));
          } else {
            throw Error(ErrorCode::InvalidArgument, "mode must be level, power or hist");
          }
        }
        py::list out;
        for (const auto& r : results) out.append(result_dict(r));
        return out;
      },
      py::arg("mode"), py::arg("test"), py::arg("p"), py::arg("n") = 0,
      py::arg("groups") = std::vector<std::size_t>{}, py::arg("partition") = py::none(),
      py::arg("scenario") = 1, py::arg("dist") = "normal", py::arg("reps") = 1000,
      py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("deltas") = std::vector<double>{},
      py::arg("bins") = 40, py::arg("threads") = 0,
      "Monte Carlo level, power curve or null histogram; returns one dict per delta");
}
