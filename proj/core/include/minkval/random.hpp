#pragma once

#include <cstdint>
#include <random>

#include "minkval/body.hpp"
#include "minkval/zonal.hpp"

namespace minkval {

/// Seeded generator with a fixed mapping to doubles, so that sequences are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct RandomBodyOptions {
  int max_degree = 6;
  double amplitude = 0.15;  ///< coefficient of degree k drawn from [-amplitude, amplitude] / (k-1)^2
  bool even_only = false;
  int max_attempts = 1000;
};

/// 1 + sum_{k=2}^{max_degree} c_k P_k^n, rejection-sampled until the body is
/// C^2_+. Throws NumericError if max_attempts draws all fail.
RevolutionBody random_c2plus_body(Rng& rng, int n, const RandomBodyOptions& options = {});

/// Zonal function with coefficients uniform in [-1, 1] scaled by 1/(1+k)^2.
ZonalFunction random_zonal_function(Rng& rng, int n, int kmax);

}  // namespace minkval
