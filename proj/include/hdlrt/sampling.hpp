#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "hdlrt/matrix.hpp"

namespace hdlrt {

// Law of the i.i.d. entries of x. Every variant has mean 0 and variance 1.
struct DistributionSpec {
  enum class Kind { StandardNormal, StandardizedT, CenteredExponential };

  Kind kind = Kind::StandardNormal;
  int df = 0;        // StandardizedT only; >= 5 for a finite (4 + delta)-th moment
  double rate = 1.0; // CenteredExponential only

  static DistributionSpec standard_normal() { return {}; }
  static DistributionSpec standardized_t(int df);
  static DistributionSpec centered_exponential(double rate = 1.0);

  // "normal", "t<df>" (e.g. "t15") or "exp".
  static DistributionSpec parse(std::string_view name);
  std::string name() const;

  // E[x^4] of the standardized law; infinite moments are not representable.
  double fourth_moment() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

struct Seed {
  std::uint64_t value = 0;
};

// Philox4x32-10 counter-based generator. The 64-bit seed is the key and the
// stream id occupies the upper half of the 128-bit counter, so each
// (seed, stream) pair is an independent, schedule-free sequence.
class CounterRng {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  CounterRng(Seed seed, std::uint64_t stream);

  static Block philox(Block counter, Key key);

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double next_uniform();
  double next_normal();

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  Block buffer_{};
  int buffered_ = 0;  // 64-bit words left in buffer_
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Draws from a DistributionSpec on top of a CounterRng.
class EntrySampler {
 public:
  EntrySampler(const DistributionSpec& dist, Seed seed, std::uint64_t stream);
  double operator()();

 private:
  DistributionSpec dist_;
  CounterRng rng_;
  double t_scale_ = 1.0;
};

// n by p matrix of i.i.d. draws, filled row by row from stream `stream`.
DataMatrix sample_entry_matrix(std::size_t n, std::size_t p, const DistributionSpec& dist,
                               Seed seed, std::uint64_t stream);

// Each observation x_k mapped to root * x_k (data * root^T).
DataMatrix apply_root(const DataMatrix& data, const SymmetricMatrix& root);

}  // namespace hdlrt
