#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pnet {

/// Derives a substream seed from a master seed, a stream name, and an index.
/// All randomness in the project flows from one master seed through these
/// named substreams.
std::uint64_t substream_seed(std::uint64_t master, std::string_view name, std::uint64_t index = 0);

/// Deterministic random stream. Uniform and normal variates are generated by
/// explicit algorithms (not std distributions) so outputs are reproducible
/// for a given seed independent of the standard library.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; caches the second variate.
  double normal();

  /// +1 with probability p, else -1.
  int pm_one(double p) { return uniform01() < p ? 1 : -1; }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Streaming mean/variance accumulator with an order-independent merge.
class Welford {
 public:
  void add(double x);
  void merge(const Welford& other);
  long long count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error_of_mean() const;

 private:
  long long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace pnet
