#include "minkval/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "minkval/errors.hpp"

namespace minkval {

namespace {

constexpr int kMaxNewton = 50;

// Recurrence coefficients of the monic Jacobi polynomials:
//   x p_k = p_{k+1} + diag(k) p_k + offdiag(k)^2 p_{k-1}.
double jacobi_diag(int k, double a, double b) {
  const double s = 2.0 * k + a + b;
  if (k == 0) return (b - a) / (a + b + 2.0);
  return (b * b - a * a) / (s * (s + 2.0));
}

double jacobi_offdiag(int k, double a, double b) {
  const double s = 2.0 * k + a + b;
  const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
  const double den = s * s * (s + 1.0) * (s - 1.0);
  return std::sqrt(num / den);
}

struct OrthonormalEval {
  double pm;       // p_m(x)
  double dpm;      // p_m'(x)
  double sum_sq;   // sum_{k<m} p_k(x)^2
};

OrthonormalEval orthonormal_eval(int m, double x, double a, double b, double mu0) {
  double p_prev = 0.0;
  double p = 1.0 / std::sqrt(mu0);
  double dp_prev = 0.0;
  double dp = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < m; ++k) {
    sum_sq += p * p;
    const double bk = (k == 0) ? 0.0 : jacobi_offdiag(k, a, b);
    const double bk1 = jacobi_offdiag(k + 1, a, b);
    const double ak = jacobi_diag(k, a, b);
    const double next = ((x - ak) * p - bk * p_prev) / bk1;
    const double dnext = (p + (x - ak) * dp - bk * dp_prev) / bk1;
    p_prev = p;
    p = next;
    dp_prev = dp;
    dp = dnext;
  }
  return {p, dp, sum_sq};
}

}  // namespace

double sphere_area(int n) {
  if (n < 1) throw std::domain_error("sphere_area: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) {
  if (n < 0) throw std::domain_error("ball_volume: n must be >= 0");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

GaussJacobiRule gauss_jacobi(int m, double alpha, double beta) {
  if (m < 1) throw std::invalid_argument("gauss_jacobi: node count must be >= 1");
  if (alpha <= -1.0 || beta <= -1.0) {
    throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
  }
  const double mu0 = std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));

  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int k = 0; k < m; ++k) diag(k) = jacobi_diag(k, alpha, beta);
  for (int k = 1; k < m; ++k) sub(k - 1) = jacobi_offdiag(k, alpha, beta);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("gauss_jacobi: tridiagonal eigensolver did not converge");
  }

  GaussJacobiRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int j = 0; j < m; ++j) {
    double x = solver.eigenvalues()(j);
    bool converged = false;
    for (int it = 0; it < kMaxNewton; ++it) {
      const auto e = orthonormal_eval(m, x, alpha, beta, mu0);
      const double step = e.pm / e.dpm;
      x -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
        converged = true;
        break;
      }
    }
    if (!converged || !(std::abs(x) < 1.0)) {
      throw NumericError("gauss_jacobi: Newton refinement of a node did not converge");
    }
    rule.nodes[j] = x;
    rule.weights[j] = 1.0 / orthonormal_eval(m, x, alpha, beta, mu0).sum_sq;
  }
  return rule;
}

QuadratureRule build_rule(int n, int m) {
  if (n < 3) throw std::domain_error("build_rule: dimension must be >= 3");
  const double a = 0.5 * (n - 3);
  const GaussJacobiRule gj = gauss_jacobi(m, a, a);
  const double scale = sphere_area(n - 1);
  QuadratureRule rule;
  rule.n = n;
  rule.nodes = gj.nodes;
  rule.weights = gj.weights;
  for (double& w : rule.weights) w *= scale;
  return rule;
}

QuadratureRule build_split_rule(int n, int m) {
  if (n < 3) throw std::domain_error("build_split_rule: dimension must be >= 3");
  // On [0, 1]: (1-t^2)^a = (1-t)^a (1+t)^a with the smooth factor (1+t)^a moved
  // into the weights; t = (1+x)/2 maps the Jacobi(a, 0) rule onto [0, 1].
  const double a = 0.5 * (n - 3);
  const GaussJacobiRule gj = gauss_jacobi(m, a, 0.0);
  const double scale = sphere_area(n - 1) * std::pow(2.0, -a - 1.0);

  QuadratureRule rule;
  rule.n = n;
  rule.nodes.resize(2 * static_cast<std::size_t>(m));
  rule.weights.resize(2 * static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double t = 0.5 * (1.0 + gj.nodes[j]);
    const double w = scale * gj.weights[j] * std::pow(1.0 + t, a);
    // Ascending node order: mirrored half first.
    rule.nodes[m - 1 - j] = -t;
    rule.weights[m - 1 - j] = w;
    rule.nodes[m + j] = t;
    rule.weights[m + j] = w;
  }
  return rule;
}

}  // namespace minkval
