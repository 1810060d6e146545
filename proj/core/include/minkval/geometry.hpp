#pragma once

#include <span>
#include <vector>

#include "json.hpp"
#include "minkval/body.hpp"
#include "minkval/valuation.hpp"

namespace minkval {

/// V(K1, K[i], B[n-1-i]) = (1/n) int h(K1, u) s_i(K, u) du.
double mixed_volume(const RevolutionBody& k1, const RevolutionBody& k, int i, int kmax = kDefaultKmax);

/// V(K1, K2, ..., Kn) with the last n-1 bodies entering through their mixed
/// area density.
double mixed_volume(const RevolutionBody& k1, std::span<const RevolutionBody> rest, int kmax = kDefaultKmax);

/// V_i(K) = binom(n, i) / kappa_{n-i} V(K[i], B[n-i]), 0 <= i <= n.
double intrinsic_volume(const RevolutionBody& k, int i, int kmax = kDefaultKmax);

/// Phi_i K as a body; throws std::invalid_argument if it is not a support
/// function.
RevolutionBody image_body(const MinkowskiValuation& val, const RevolutionBody& k);

/// psi_i(K) = V_{i+1}(Phi_i K) / V_{i+1}(K)^i.
double psi_ratio(const MinkowskiValuation& val, const RevolutionBody& k);

struct ClassReduction {
  double lhs = 0.0;  ///< V_{i+1}(Phi K) / V_{i+1}(K)^i
  double rhs = 0.0;  ///< V_{i+1}(Phi^2 K) / V_{i+1}(Phi K)^i
  double residual = 0.0;
  double identity_lhs = 0.0;  ///< V(Phi K, Phi K[i], B[n-i-1])
  double identity_rhs = 0.0;  ///< V(Phi^2 K, K[i], B[n-i-1])
  double identity_residual = 0.0;
  double homothety_distance = 0.0;  ///< coefficient distance of Phi^2 K and K at equal mean width
  bool homothetic = false;          ///< homothety_distance < kHomothetyTolerance

  nlohmann::ordered_json to_json() const;
};

inline constexpr double kHomothetyTolerance = 1e-8;

ClassReduction class_reduction_check(const MinkowskiValuation& val, const RevolutionBody& k);

struct Degree1Report {
  double area_residual = 0.0;  ///< V_2(Phi_1 K) - a_0^2 V_2(K)
  std::vector<double> schneider_margins;  ///< a_0 - |a_k box_k|, k = 2..
  double min_schneider_margin = 0.0;
  bool strengthened_checked = false;
  double strengthened_residual = 0.0;

  nlohmann::ordered_json to_json() const;
};

/// Checks for i = 1. The strengthened inequality is evaluated only for
/// body-generated valuations. Schneider margins are reported up to kmax_margins.
Degree1Report degree1_check(const MinkowskiValuation& val, const RevolutionBody& k, int kmax_margins = 50);

}  // namespace minkval
