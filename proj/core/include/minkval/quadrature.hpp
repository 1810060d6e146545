#pragma once

#include <concepts>
#include <cstddef>
#include <vector>

#include "minkval/legendre.hpp"

namespace minkval {

/// Surface area omega_n of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

/// Volume kappa_n of the unit ball in R^n (kappa_0 = 1).
double ball_volume(int n);

/// Nodes and weights on [-1, 1] for the weight (1-x)^alpha (1+x)^beta.
struct GaussJacobiRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// m-point Gauss-Jacobi rule. Nodes start from the eigenvalues of the Jacobi
/// matrix and are polished by Newton on the orthonormal recurrence; weights use
/// the Christoffel formula. Throws NumericError if Newton fails to converge.
GaussJacobiRule gauss_jacobi(int m, double alpha, double beta);

/// Zonal integration rule on S^{n-1}: sum_j weights[j] * phi(nodes[j])
/// approximates omega_{n-1} * int_{-1}^{1} phi(t) (1-t^2)^{(n-3)/2} dt.
struct QuadratureRule {
  int n = 3;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss rule with m nodes for the weight (1-t^2)^{(n-3)/2}, weights scaled by
/// omega_{n-1}. Exact for polynomials of degree <= 2m-1; weights sum to omega_n.
QuadratureRule build_rule(int n, int m);

/// Rule for integrands with a kink at t = 0: an m-node Gauss-Jacobi rule on
/// each of [-1, 0] and [0, 1] (2m nodes total).
QuadratureRule build_split_rule(int n, int m);

template <class F>
  requires std::invocable<F, double>
double zonal_integral(const QuadratureRule& rule, F&& phi) {
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) sum += rule.weights[j] * phi(rule.nodes[j]);
  return sum;
}

/// a_k^n[phi] = omega_{n-1} int phi(t) P_k^n(t) (1-t^2)^{(n-3)/2} dt.
template <class F>
  requires std::invocable<F, double>
double multiplier(const QuadratureRule& rule, int k, F&& phi) {
  LegendreEval p(rule.n, k);
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double t = rule.nodes[j];
    sum += rule.weights[j] * phi(t) * p(t);
  }
  return sum;
}

/// Node count used for a spectral truncation kmax.
constexpr int default_node_count(int kmax) { return kmax + 32; }

}  // namespace minkval
