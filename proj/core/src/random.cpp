#include "minkval/random.hpp"

#include <vector>

#include "minkval/errors.hpp"

namespace minkval {

RevolutionBody random_c2plus_body(Rng& rng, int n, const RandomBodyOptions& options) {
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    std::vector<double> c(static_cast<std::size_t>(options.max_degree) + 1, 0.0);
    c[0] = 1.0;
    for (int k = 2; k <= options.max_degree; ++k) {
      const double draw = rng.uniform(-options.amplitude, options.amplitude);
      if (options.even_only && k % 2 == 1) continue;
      c[static_cast<std::size_t>(k)] = draw / ((k - 1.0) * (k - 1.0));
    }
    RevolutionBody body = RevolutionBody::from_series(ZonalFunction(n, std::move(c)));
    if (classify_support(body).cls == SupportClass::C2Plus) return body;
  }
  throw NumericError("random_c2plus_body: no C^2_+ sample found");
}

ZonalFunction random_zonal_function(Rng& rng, int n, int kmax) {
  std::vector<double> c(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) c[static_cast<std::size_t>(k)] = rng.uniform(-1.0, 1.0) / ((1.0 + k) * (1.0 + k));
  return ZonalFunction(n, std::move(c));
}

}  // namespace minkval
