#pragma once

#include <string>
#include <vector>

namespace hdlrt {

// Outcome of a one-sided (lower tail) standardized likelihood-ratio test.
//
// z = (log_statistic - mu) / sigma and p_value = Phi(z). The decision is made
// on the statistic's own scale, log_statistic <= critical_value with
// critical_value = sigma * u_alpha + mu, which is equivalent to
// p_value <= alpha away from rounding at the boundary.
struct TestReport {
  double log_statistic = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
  double z = 0.0;
  double p_value = 0.5;
  double alpha = 0.05;
  double critical_value = 0.0;
  bool reject = false;
  std::vector<std::string> assumption_warnings;
};

// Assemble a report from a statistic and its centering/scale.
TestReport make_report(double log_statistic, double mu, double sigma, double alpha);

// Throws InvalidAlpha unless 0 < alpha < 1.
void check_alpha(double alpha);

}  // namespace hdlrt
