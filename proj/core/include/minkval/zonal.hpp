#pragma once

#include <concepts>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "json.hpp"
#include "minkval/quadrature.hpp"

namespace minkval {

/// Working spectral truncation used when none is given.
inline constexpr int kDefaultKmax = 128;

/// A zonal function f(u) = sum_k coeffs[k] P_k^n(e . u) on S^{n-1}, truncated
/// at degree kmax. The coefficient basis is {P_k^n(e . u)}, so the multiplier
/// a_k^n[f] of f is coeffs[k] * omega_n / N(n,k). Zonal measures are stored the
/// same way, through their Legendre coefficients.
class ZonalFunction {
 public:
  ZonalFunction() = default;
  ZonalFunction(int n, std::vector<double> coeffs);

  static ZonalFunction zero(int n, int kmax);
  static ZonalFunction constant(int n, int kmax, double value);
  /// scale * P_k^n(e . u), truncated at kmax >= k.
  static ZonalFunction legendre_mode(int n, int kmax, int k, double scale = 1.0);
  /// Function with the given multipliers a_0, a_1, ...
  static ZonalFunction from_multipliers(int n, std::span<const double> multipliers);

  int dim() const noexcept { return n_; }
  int kmax() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double coeff(int k) const { return k <= kmax() ? coeffs_.at(static_cast<std::size_t>(k)) : 0.0; }

  /// a_k^n of this function: integral of f(u) P_k^n(e . u) over the sphere.
  double multiplier(int k) const;
  std::vector<double> multipliers() const;

  /// Profile value and derivatives at t = e . u.
  double operator()(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  /// True when every odd coefficient is below tol * max |coeff|.
  bool is_even(double tol = 1e-12) const;

  ZonalFunction truncated(int kmax) const;

  ZonalFunction& operator+=(const ZonalFunction& other);
  ZonalFunction& operator-=(const ZonalFunction& other);
  ZonalFunction& operator*=(double s);
  friend ZonalFunction operator+(ZonalFunction a, const ZonalFunction& b) { return a += b; }
  friend ZonalFunction operator-(ZonalFunction a, const ZonalFunction& b) { return a -= b; }
  friend ZonalFunction operator*(ZonalFunction a, double s) { return a *= s; }
  friend ZonalFunction operator*(double s, ZonalFunction a) { return a *= s; }

  nlohmann::ordered_json to_json() const;
  static ZonalFunction from_json(const nlohmann::json& j);

 private:
  int n_ = 3;
  std::vector<double> coeffs_;
};

/// Quadrature rule together with the Legendre table at its nodes, for fast
/// projection onto degrees 0..kmax. Immutable after construction.
class SpectralGrid {
 public:
  SpectralGrid(int n, int kmax, int nodes);

  /// Shared grid with default_node_count(kmax) nodes, cached per (n, kmax).
  static std::shared_ptr<const SpectralGrid> shared(int n, int kmax);

  int dim() const noexcept { return rule_.n; }
  int kmax() const noexcept { return kmax_; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  std::span<const double> nodes() const noexcept { return rule_.nodes; }

  /// Expansion of a function given by its values at nodes().
  ZonalFunction expand_values(std::span<const double> values) const;

  template <class F>
    requires std::invocable<F, double>
  ZonalFunction expand(F&& phi) const {
    std::vector<double> values(rule_.size());
    for (std::size_t j = 0; j < values.size(); ++j) values[j] = phi(rule_.nodes[j]);
    return expand_values(values);
  }

  /// Values of f at nodes().
  std::vector<double> evaluate(const ZonalFunction& f) const;

  /// Quadrature inner product int f g over the sphere from node values.
  double inner(std::span<const double> f_values, std::span<const double> g_values) const;

 private:
  int kmax_;
  QuadratureRule rule_;
  std::vector<double> table_;  // table_[j * (kmax+1) + k] = P_k^n(t_j)
  std::vector<double> norm_;   // N(n,k) / omega_n
};

/// Expansion c_k = N(n,k)/omega_n * a_k^n[phi] of a smooth profile.
template <class F>
  requires std::invocable<F, double>
ZonalFunction expand(int n, F&& phi, int kmax = kDefaultKmax) {
  return SpectralGrid::shared(n, kmax)->expand(std::forward<F>(phi));
}

/// Expansion of a profile with a kink at t = 0, using the split rule.
ZonalFunction expand_kinked(int n, const std::function<double(double)>& phi, int kmax = kDefaultKmax);

/// Convolution mu * f: coefficient-wise mu_k * a_k^n[f]. Truncation is the
/// smaller of the two. Throws std::invalid_argument on dimension mismatch.
ZonalFunction convolve(const ZonalFunction& mu, const ZonalFunction& f);

/// Multiplier (1-k)(k+n-1)/(n-1) of box_n = Id + Laplacian/(n-1).
double box_multiplier(int n, int k);
ZonalFunction box_n(const ZonalFunction& f);

/// Sobolev norm from (1+k^2)^s-weighted L2 norms of the projections.
/// Requires an even function; throws std::invalid_argument otherwise.
double sobolev_norm(const ZonalFunction& f, int s);

/// L2 norm over the sphere from the coefficients (Parseval).
double l2_norm(const ZonalFunction& f);

/// Generalized spherical Radon transform R_t: multipliers P_k^n(t).
ZonalFunction radon_t(const ZonalFunction& f, double t);

/// Multipliers a_k^n[C] = a_k^n[|e . u|] of the cosine transform, k = 0..kmax,
/// computed by split quadrature. Odd entries are zero.
std::vector<double> cosine_multipliers(int n, int kmax);

/// Closed form matching cosine_multipliers(): a_0 = 2 omega_{n-1}/(n-1) and
/// for even k >= 2
///   a_k = (-1)^{(k-2)/2} a_0 * 1*3*...*(k-3) / ((n+1)(n+3)...(n+k-1)).
double cosine_multiplier_closed_form(int n, int k);

ZonalFunction cosine_transform(const ZonalFunction& f);

/// Expansion of the segment support function |e . u|.
ZonalFunction segment_function(int n, int kmax = kDefaultKmax);

}  // namespace minkval
