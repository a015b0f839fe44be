#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hdlrt/montecarlo.hpp"
#include "hdlrt/report.hpp"

namespace hdlrt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitAssumption = 2;

// %.17g, so numbers round-trip exactly.
std::string format_double(double value);

nlohmann::json report_to_json(const TestReport& report);
TestReport report_from_json(const nlohmann::json& j);

// "delta,reps,rejections,rate,se,seed" plus one row per result.
std::string simulation_csv(const std::vector<SimulationResult>& results, std::uint64_t seed);

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hdlrt::cli
