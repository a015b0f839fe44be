#include "hdlrt/sampling.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "hdlrt/error.hpp"
#include "hdlrt/matrix_core.hpp"

namespace hdlrt {

DistributionSpec DistributionSpec::standardized_t(int df) {
  if (df < 5) {
    throw Error(ErrorCode::InvalidArgument,
                "standardized t needs df >= 5 for a finite (4+delta)-th moment");
  }
  return {Kind::StandardizedT, df, 1.0};
}

DistributionSpec DistributionSpec::centered_exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::InvalidArgument, "exponential rate must be positive");
  }
  return {Kind::CenteredExponential, 0, rate};
}

DistributionSpec DistributionSpec::parse(std::string_view name) {
  if (name == "normal" || name == "gaussian") return standard_normal();
  if (name == "exp" || name == "exponential") return centered_exponential(1.0);
  if (name.size() > 1 && name.front() == 't') {
    int df = 0;
    const auto digits = name.substr(1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), df);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return standardized_t(df);
  }
  throw Error(ErrorCode::ParseError,
              "unknown distribution '" + std::string(name) + "' (expected normal, t<df>, exp)");
}

std::string DistributionSpec::name() const {
  switch (kind) {
    case Kind::StandardNormal: return "normal";
    case Kind::StandardizedT: return "t" + std::to_string(df);
    case Kind::CenteredExponential: return "exp";
  }
  return "unknown";
}

double DistributionSpec::fourth_moment() const {
  switch (kind) {
    case Kind::StandardNormal: return 3.0;
    case Kind::StandardizedT: return 3.0 * (df - 2.0) / (df - 4.0);
    case Kind::CenteredExponential: return 9.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

CounterRng::CounterRng(Seed seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed.value),
           static_cast<std::uint32_t>(seed.value >> 32)},
      stream_(stream) {}

CounterRng::Block CounterRng::philox(Block ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t CounterRng::next_u64() {
  if (buffered_ == 0) {
    const Block ctr = {static_cast<std::uint32_t>(block_index_),
                       static_cast<std::uint32_t>(block_index_ >> 32),
                       static_cast<std::uint32_t>(stream_),
                       static_cast<std::uint32_t>(stream_ >> 32)};
    buffer_ = philox(ctr, key_);
    ++block_index_;
    buffered_ = 2;
  }
  const int word = 2 - buffered_;
  --buffered_;
  return (static_cast<std::uint64_t>(buffer_[2 * word + 1]) << 32) | buffer_[2 * word];
}

double CounterRng::next_uniform() {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kScale;
}

double CounterRng::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  // Box-Muller; u1 lies in (0, 1) so the log is finite.
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

EntrySampler::EntrySampler(const DistributionSpec& dist, Seed seed, std::uint64_t stream)
    : dist_(dist), rng_(seed, stream) {
  if (dist_.kind == DistributionSpec::Kind::StandardizedT) {
    if (dist_.df < 5) throw Error(ErrorCode::InvalidArgument, "standardized t needs df >= 5");
    t_scale_ = std::sqrt((dist_.df - 2.0) / dist_.df);
  }
}

double EntrySampler::operator()() {
  switch (dist_.kind) {
    case DistributionSpec::Kind::StandardNormal:
      return rng_.next_normal();
    case DistributionSpec::Kind::StandardizedT: {
      const double z = rng_.next_normal();
      double chi2 = 0.0;
      for (int k = 0; k < dist_.df; ++k) {
        const double g = rng_.next_normal();
        chi2 += g * g;
      }
      return z / std::sqrt(chi2 / dist_.df) * t_scale_;
    }
    case DistributionSpec::Kind::CenteredExponential: {
      // Inverse CDF of Exp(rate), then centered and scaled to unit variance.
      const double e = -std::log1p(-rng_.next_uniform()) / dist_.rate;
      return (e - 1.0 / dist_.rate) * dist_.rate;
    }
  }
  return 0.0;
}

DataMatrix sample_entry_matrix(std::size_t n, std::size_t p, const DistributionSpec& dist,
                               Seed seed, std::uint64_t stream) {
  EntrySampler draw(dist, seed, stream);
  std::vector<double> values(n * p);
  for (double& v : values) v = draw();
  return DataMatrix(n, p, std::move(values));
}

DataMatrix apply_root(const DataMatrix& data, const SymmetricMatrix& root) {
  if (root.dim() != data.p()) {
    throw Error(ErrorCode::DimensionMismatch,
                "root is " + std::to_string(root.dim()) + "x" + std::to_string(root.dim()) +
                    " but data has p = " + std::to_string(data.p()));
  }
  return transform_observations(data, root.matrix());
}

}  // namespace hdlrt
