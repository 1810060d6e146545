#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace minkval {

/// Legendre polynomials P_k^n of dimension n, normalized so that P_k^n(1) = 1.
///
/// P_k^n(u . e) spans the zonal part of the degree-k spherical harmonics on
/// S^{n-1}. Values come from the three-term recurrence
///   (k+n-2) P_{k+1} = (2k+n-2) t P_k - k P_{k-1},
/// derivatives from d/dt P_k^n = k(k+n-2)/(n-1) P_{k-1}^{n+2}.
///
/// All functions throw std::domain_error when n < 3, k < 0 or |t| > 1.
double legendre(int n, int k, double t);
double legendre_derivative(int n, int k, double t);
double legendre_second_derivative(int n, int k, double t);

/// Fills out[0..out.size()) with P_0^n(t), ..., P_{out.size()-1}^n(t).
void legendre_table(int n, double t, std::span<double> out);

/// Value, first and second derivative of P_k^n for every k up to kmax at one
/// point; used when a whole Legendre series and its derivatives are needed.
struct LegendreJetTable {
  std::vector<double> value;
  std::vector<double> d1;
  std::vector<double> d2;
};
LegendreJetTable legendre_jet_table(int n, int kmax, double t);

/// Fixed (n, k) evaluator.
class LegendreEval {
 public:
  LegendreEval(int n, int k);

  int dim() const noexcept { return n_; }
  int degree() const noexcept { return k_; }

  double operator()(double t) const { return legendre(n_, k_, t); }
  double derivative(double t) const { return legendre_derivative(n_, k_, t); }
  double second_derivative(double t) const {
    return legendre_second_derivative(n_, k_, t);
  }

 private:
  int n_;
  int k_;
};

/// Successive relative maxima nu_k^n[1] > nu_k^n[2] > ... of |P_k^n| as t
/// decreases from 1 to 0; floor(k/2) entries. Requires k >= 2.
///
/// Critical points are bracketed by derivative sign changes on a 4096-cell
/// grid of [0, 1] and refined by bisection to 1e-12.
std::vector<double> relative_maxima(int n, int k);

/// Same as relative_maxima() but returns the abscissae of the extrema.
std::vector<double> relative_maxima_locations(int n, int k);

/// Dimension N(n,k) of the space of degree-k spherical harmonics on S^{n-1},
/// in exact integer arithmetic. Throws std::overflow_error if the value does
/// not fit in 64 bits.
std::uint64_t harmonic_dimension(int n, int k);

/// N(n,k) in floating point; never overflows for the sizes used here.
double harmonic_dimension_real(int n, int k);

}  // namespace minkval
