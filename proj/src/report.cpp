#include "hdlrt/report.hpp"

#include <cmath>

#include "hdlrt/error.hpp"
#include "hdlrt/normal.hpp"

namespace hdlrt {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidAlpha,
                "alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
}

TestReport make_report(double log_statistic, double mu, double sigma, double alpha) {
  check_alpha(alpha);
  TestReport r;
  r.log_statistic = log_statistic;
  r.mu = mu;
  r.sigma = sigma;
  r.alpha = alpha;
  r.z = (log_statistic - mu) / sigma;
  r.p_value = normal_cdf(r.z);
  r.critical_value = sigma * normal_quantile(alpha) + mu;
  r.reject = log_statistic <= r.critical_value;
  return r;
}

}  // namespace hdlrt
