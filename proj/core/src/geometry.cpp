#include "minkval/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "minkval/quadrature.hpp"

namespace minkval {

namespace {

double binomial(int m, int r) {
  if (r < 0 || r > m) return 0.0;
  double value = 1.0;
  for (int j = 1; j <= r; ++j) value = value * (m - r + j) / j;
  return value;
}

}  // namespace

double mixed_volume(const RevolutionBody& k1, const RevolutionBody& k, int i, int kmax) {
  const int n = k.dim();
  if (k1.dim() != n) throw std::invalid_argument("mixed_volume: dimension mismatch");
  const auto grid = SpectralGrid::shared(n, kmax);
  const QuadratureRule& rule = grid->rule();
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double t = rule.nodes[j];
    sum += rule.weights[j] * k1.profile(t) * area_density_at(k, i, t);
  }
  return sum / n;
}

double mixed_volume(const RevolutionBody& k1, std::span<const RevolutionBody> rest, int kmax) {
  const int n = k1.dim();
  const auto grid = SpectralGrid::shared(n, kmax);
  const QuadratureRule& rule = grid->rule();
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double t = rule.nodes[j];
    sum += rule.weights[j] * k1.profile(t) * mixed_area_density(rest, t);
  }
  return sum / n;
}

double intrinsic_volume(const RevolutionBody& k, int i, int kmax) {
  const int n = k.dim();
  if (i < 0 || i > n) throw std::invalid_argument("intrinsic_volume: order must be in [0, n]");
  if (i == 0) return 1.0;
  // V(K[i], B[n-i]) = V(K, K[i-1], B[n-i]).
  return binomial(n, i) / ball_volume(n - i) * mixed_volume(k, k, i - 1, kmax);
}

RevolutionBody image_body(const MinkowskiValuation& val, const RevolutionBody& k) {
  ApplyResult r = apply(val, k);
  if (!r.valid()) {
    throw std::invalid_argument("Phi K is not a support function (margin " + std::to_string(r.validity.margin()) +
                                ")");
  }
  return RevolutionBody::from_series(std::move(r.support));
}

double psi_ratio(const MinkowskiValuation& val, const RevolutionBody& k) {
  const int i = val.degree();
  const RevolutionBody phi_k = image_body(val, k);
  return intrinsic_volume(phi_k, i + 1, val.kmax()) / std::pow(intrinsic_volume(k, i + 1, val.kmax()), i);
}

nlohmann::ordered_json ClassReduction::to_json() const {
  nlohmann::ordered_json j;
  j["lhs"] = lhs;
  j["rhs"] = rhs;
  j["residual"] = residual;
  j["identity_lhs"] = identity_lhs;
  j["identity_rhs"] = identity_rhs;
  j["identity_residual"] = identity_residual;
  j["homothety_distance"] = homothety_distance;
  j["homothetic"] = homothetic;
  return j;
}

ClassReduction class_reduction_check(const MinkowskiValuation& val, const RevolutionBody& k) {
  const int i = val.degree();
  const int kmax = val.kmax();
  const RevolutionBody phi_k = image_body(val, k);
  const RevolutionBody phi2_k = image_body(val, phi_k);

  const double v_k = intrinsic_volume(k, i + 1, kmax);
  const double v_phi = intrinsic_volume(phi_k, i + 1, kmax);
  const double v_phi2 = intrinsic_volume(phi2_k, i + 1, kmax);

  ClassReduction r;
  r.lhs = v_phi / std::pow(v_k, i);
  r.rhs = v_phi2 / std::pow(v_phi, i);
  r.residual = r.lhs - r.rhs;
  r.identity_lhs = mixed_volume(phi_k, phi_k, i, kmax);
  r.identity_rhs = mixed_volume(phi2_k, k, i, kmax);
  r.identity_residual = r.identity_lhs - r.identity_rhs;

  ZonalFunction a = phi2_k.expansion(kmax);
  ZonalFunction b = k.expansion(kmax);
  a *= 1.0 / a.coeff(0);
  b *= 1.0 / b.coeff(0);
  // Translations along the axis do not affect homothety.
  ZonalFunction d = a - b;
  double dist = 0.0;
  for (int j = 0; j <= d.kmax(); ++j) {
    if (j != 1) dist = std::max(dist, std::abs(d.coeff(j)));
  }
  r.homothety_distance = dist;
  r.homothetic = dist < kHomothetyTolerance;
  return r;
}

nlohmann::ordered_json Degree1Report::to_json() const {
  nlohmann::ordered_json j;
  j["area_residual"] = area_residual;
  j["min_schneider_margin"] = min_schneider_margin;
  j["schneider_margins"] = schneider_margins;
  j["strengthened_checked"] = strengthened_checked;
  j["strengthened_residual"] = strengthened_residual;
  return j;
}

Degree1Report degree1_check(const MinkowskiValuation& val, const RevolutionBody& k, int kmax_margins) {
  if (val.degree() != 1) throw std::invalid_argument("degree1_check: valuation must have degree 1");
  const int n = val.dim();
  const int kmax = val.kmax();
  const double a0 = val.generator().multiplier(0);
  const RevolutionBody ball = RevolutionBody::ball(n);

  // Phi_1 K may fail to be convex for a non-monotone generator; the mixed
  // volumes below are still defined through its profile.
  const RevolutionBody phi_k = RevolutionBody::from_series(apply_spectrum(val, k.expansion(kmax)));

  Degree1Report r;
  r.area_residual = intrinsic_volume(phi_k, 2, kmax) - a0 * a0 * intrinsic_volume(k, 2, kmax);

  r.min_schneider_margin = a0;
  for (int j = 2; j <= std::min(kmax_margins, kmax); ++j) {
    const double m = a0 - std::abs(val.generator().multiplier(j) * box_multiplier(n, j));
    r.schneider_margins.push_back(m);
    r.min_schneider_margin = std::min(r.min_schneider_margin, m);
  }

  if (val.body_generated()) {
    r.strengthened_checked = true;
    const double v_phi = mixed_volume(phi_k, phi_k, 1, kmax);
    const double v_k2 = mixed_volume(k, k, 1, kmax);
    const double v_k1 = mixed_volume(k, ball, 0, kmax);
    const double c = a0 * a0 / ((n - 1.0) * (n - 1.0));
    r.strengthened_residual = v_phi - c * v_k2 - c * n * (n - 2.0) / sphere_area(n) * v_k1 * v_k1;
  }
  return r;
}

}  // namespace minkval
