#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace idlearn {

/// Seeded generator used for every random stream in the library. The engine
/// and the double conversion are both fully specified, so a given seed yields
/// the same stream on every platform.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/u53";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) built from the top 53 bits of one draw.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Inverse-CDF draw from a cumulative row; the last entry is treated as 1.
  int draw(std::span<const double> cdf) {
    const double u = uniform();
    const int last = static_cast<int>(cdf.size()) - 1;
    for (int k = 0; k < last; ++k) {
      if (u < cdf[k]) return k;
    }
    return last;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace idlearn
