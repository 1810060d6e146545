#include "minkval/legendre.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace minkval {

namespace {

constexpr int kExtremaGridCells = 4096;
constexpr double kExtremaTol = 1e-12;

void check_args(int n, int k, double t) {
  if (n < 3) throw std::domain_error("legendre: dimension n must be >= 3, got " + std::to_string(n));
  if (k < 0) throw std::domain_error("legendre: degree k must be >= 0");
  if (!(std::abs(t) <= 1.0)) throw std::domain_error("legendre: argument outside [-1, 1]");
}

// Recurrence without argument checks. Valid for any real n > 2.
double eval_unchecked(int n, int k, double t) {
  if (k == 0) return 1.0;
  if (k == 1) return t;
  if (t == 1.0) return 1.0;
  if (t == -1.0) return (k % 2 == 0) ? 1.0 : -1.0;
  double pm1 = 1.0;
  double p = t;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + n - 2.0) * t * p - j * pm1) / (j + n - 2.0);
    pm1 = p;
    p = next;
  }
  return p;
}

double derivative_unchecked(int n, int k, double t) {
  if (k == 0) return 0.0;
  if (k == 1) return 1.0;
  return static_cast<double>(k) * (k + n - 2.0) / (n - 1.0) * eval_unchecked(n + 2, k - 1, t);
}

double second_derivative_unchecked(int n, int k, double t) {
  if (k < 2) return 0.0;
  return static_cast<double>(k) * (k + n - 2.0) / (n - 1.0) *
         derivative_unchecked(n + 2, k - 1, t);
}

void fill_table(int n, double t, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = t;
  for (std::size_t j = 1; j + 1 < out.size(); ++j) {
    const double jj = static_cast<double>(j);
    out[j + 1] = ((2.0 * jj + n - 2.0) * t * out[j] - jj * out[j - 1]) / (jj + n - 2.0);
  }
}

// Root of the derivative inside [lo, hi] where it changes sign.
double bisect_critical(int n, int k, double lo, double hi) {
  double flo = derivative_unchecked(n, k, lo);
  while (hi - lo > kExtremaTol) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = derivative_unchecked(n, k, mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool mul_overflows(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return __builtin_mul_overflow(a, b, &out);
}

// binomial(m, r) with overflow detection; exact for every representable value.
std::uint64_t checked_binomial(std::uint64_t m, std::uint64_t r) {
  if (r > m) return 0;
  r = std::min(r, m - r);
  std::uint64_t result = 1;
  for (std::uint64_t j = 1; j <= r; ++j) {
    // result * (m - r + j) / j, reducing by gcd first to keep intermediates small.
    std::uint64_t num = m - r + j;
    std::uint64_t den = j;
    const std::uint64_t g1 = std::gcd(num, den);
    num /= g1;
    den /= g1;
    const std::uint64_t g2 = std::gcd(result, den);
    result /= g2;
    den /= g2;
    // den is now 1 because result * num is divisible by the original j.
    if (mul_overflows(result, num, result)) {
      throw std::overflow_error("harmonic_dimension: binomial coefficient overflows 64 bits");
    }
    result /= den;
  }
  return result;
}

}  // namespace

double legendre(int n, int k, double t) {
  check_args(n, k, t);
  return eval_unchecked(n, k, t);
}

double legendre_derivative(int n, int k, double t) {
  check_args(n, k, t);
  return derivative_unchecked(n, k, t);
}

double legendre_second_derivative(int n, int k, double t) {
  check_args(n, k, t);
  return second_derivative_unchecked(n, k, t);
}

void legendre_table(int n, double t, std::span<double> out) {
  check_args(n, 0, t);
  fill_table(n, t, out);
}

LegendreJetTable legendre_jet_table(int n, int kmax, double t) {
  check_args(n, kmax, t);
  const auto size = static_cast<std::size_t>(kmax) + 1;
  LegendreJetTable jet;
  jet.value.resize(size);
  jet.d1.assign(size, 0.0);
  jet.d2.assign(size, 0.0);
  fill_table(n, t, jet.value);

  std::vector<double> up2(size), up4(size);
  fill_table(n + 2, t, up2);
  fill_table(n + 4, t, up4);
  for (std::size_t k = 1; k < size; ++k) {
    const double kk = static_cast<double>(k);
    const double c1 = kk * (kk + n - 2.0) / (n - 1.0);
    jet.d1[k] = c1 * up2[k - 1];
    if (k >= 2) {
      const double c2 = (kk - 1.0) * (kk + n - 1.0) / (n + 1.0);
      jet.d2[k] = c1 * c2 * up4[k - 2];
    }
  }
  return jet;
}

LegendreEval::LegendreEval(int n, int k) : n_(n), k_(k) { check_args(n, k, 0.0); }

std::vector<double> relative_maxima_locations(int n, int k) {
  check_args(n, k, 0.0);
  if (k < 2) throw std::domain_error("relative_maxima: degree k must be >= 2");

  std::vector<double> locations;
  const double h = 1.0 / kExtremaGridCells;
  // Scan from t = 1 downwards; t = 1 itself is the global maximum, not a relative one.
  double hi = 1.0;
  double dhi = derivative_unchecked(n, k, hi);
  for (int j = kExtremaGridCells - 1; j >= 1; --j) {
    const double lo = j * h;
    const double dlo = derivative_unchecked(n, k, lo);
    if (dlo == 0.0) {
      locations.push_back(lo);
    } else if (dhi != 0.0 && (dlo > 0.0) != (dhi > 0.0)) {
      locations.push_back(bisect_critical(n, k, lo, hi));
    }
    hi = lo;
    dhi = dlo;
  }
  // P_k^n is even for even k, so t = 0 is a critical point.
  if (k % 2 == 0) locations.push_back(0.0);
  return locations;
}

std::vector<double> relative_maxima(int n, int k) {
  std::vector<double> values;
  for (double t : relative_maxima_locations(n, k)) {
    values.push_back(std::abs(eval_unchecked(n, k, t)));
  }
  return values;
}

__extension__ typedef unsigned __int128 uint128;

std::uint64_t harmonic_dimension(int n, int k) {
  check_args(n, k, 0.0);
  if (k == 0) return 1;
  // N(n,k) = (n+2k-2)/(n+k-2) * C(n+k-2, n-2); the division is exact.
  const auto m = static_cast<std::uint64_t>(n + k - 2);
  const std::uint64_t binom = checked_binomial(m, static_cast<std::uint64_t>(n - 2));
  const uint128 wide =
      static_cast<uint128>(binom) * static_cast<std::uint64_t>(n + 2 * k - 2);
  const uint128 value = wide / m;
  if (value > static_cast<uint128>(UINT64_MAX)) {
    throw std::overflow_error("harmonic_dimension: N(n,k) overflows 64 bits");
  }
  return static_cast<std::uint64_t>(value);
}

double harmonic_dimension_real(int n, int k) {
  check_args(n, k, 0.0);
  if (k == 0) return 1.0;
  double binom = 1.0;
  for (int j = 1; j <= n - 2; ++j) binom = binom * (k + j) / j;
  return binom * (n + 2.0 * k - 2.0) / (n + k - 2.0);
}

}  // namespace minkval
