#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "minkval/zonal.hpp"

namespace minkval {

enum class SupportClass { NotSupport, Support, C2Plus };

std::string to_string(SupportClass c);

/// Margins for classification: C2Plus needs min(g1, g2) > kC2PlusMargin,
/// Support needs min(g1, g2) > kSupportMargin.
inline constexpr double kC2PlusMargin = 1e-9;
inline constexpr double kSupportMargin = -1e-12;

/// Grid used by classify_support(): 4096 cells on [-1, 1], so t = 0 and both
/// endpoints are grid points.
inline constexpr int kClassifyCells = 4096;

struct ProfileJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Nonzero eigenvalues of the Hessian of the 1-homogeneous extension at a
/// direction u with t = u . e: g1 on the (n-2)-dimensional part of u-perp
/// orthogonal to e, g2 along the projection of e onto u-perp.
struct HessianEigenvalues {
  double g1 = 0.0;
  double g2 = 0.0;
};

struct SupportReport {
  SupportClass cls = SupportClass::NotSupport;
  double min_g1 = 0.0;
  double min_g2 = 0.0;
  double argmin_g1 = 0.0;
  double argmin_g2 = 0.0;

  double margin() const { return std::min(min_g1, min_g2); }
};

enum class Validation { Enforce, Skip };

/// A zonal body given by its support profile phi on [-1, 1], i.e.
/// h(x) = |x| phi(x . e / |x|). Profiles are sums of weighted closed-form
/// terms (ball, ellipsoid, Legendre series) plus a linear term c t, which is a
/// translation along the axis. Profiles always have bounded phi''.
///
/// Constructors other than from_series() validate the result and throw
/// std::invalid_argument when it is not a support function, unless
/// Validation::Skip is passed.
class RevolutionBody {
 public:
  static RevolutionBody ball(int n, double radius = 1.0);
  /// phi(t) = sqrt(a^2 t^2 + b^2 (1 - t^2)): semi-axis a along e, b across.
  static RevolutionBody ellipsoid(int n, double a, double b);
  /// phi = 1 + lambda P_k^n.
  static RevolutionBody perturbed_ball(int n, int k, double lambda,
                                       Validation validation = Validation::Enforce);
  /// Profile given by a Legendre series. No validation: this is also how
  /// arbitrary C^2 zonal functions enter multilinear formulas.
  static RevolutionBody from_series(ZonalFunction profile);
  /// Zonoid Z^mu: profile multipliers a_k[C] a_k[mu] for a non-negative zonal
  /// measure mu given by its multipliers.
  static RevolutionBody zonoid_from_multipliers(int n, std::span<const double> mu_multipliers,
                                                Validation validation = Validation::Enforce);
  /// Same with a signed measure mu.
  static RevolutionBody generalized_zonoid(int n, std::span<const double> mu_multipliers,
                                           Validation validation = Validation::Enforce);

  int dim() const noexcept { return n_; }

  ProfileJet jet(double t) const;
  double profile(double t) const { return jet(t).value; }
  double operator()(double t) const { return profile(t); }

  RevolutionBody scaled(double s) const;
  /// Translation by c e: adds c t to the profile.
  RevolutionBody translated(double c) const;
  friend RevolutionBody operator+(const RevolutionBody& a, const RevolutionBody& b);

  /// Legendre expansion of the profile up to kmax.
  ZonalFunction expansion(int kmax = kDefaultKmax) const;

  nlohmann::ordered_json to_json() const;
  /// Accepts {"kind": "ball"|"ellipsoid"|"perturbed_ball"|"zonoid"|
  /// "generalized_zonoid"|"series"|"composite", "n": ...}. A "segment" record
  /// throws UnsupportedProfile.
  static RevolutionBody from_json(const nlohmann::json& j);

 private:
  struct BallTerm {};
  struct EllipsoidTerm {
    double a;
    double b;
  };
  struct SeriesTerm {
    ZonalFunction series;
  };
  struct Term {
    double weight;
    std::variant<BallTerm, EllipsoidTerm, SeriesTerm> shape;
  };

  explicit RevolutionBody(int n) : n_(n) {}
  ProfileJet term_jet(const Term& term, double t) const;

  int n_;
  std::vector<Term> terms_;
  double translation_ = 0.0;
  nlohmann::ordered_json spec_;  // set by named constructors, cleared by composition
};

/// (g1, g2) = (phi - t phi', (1 - t^2) phi'' + phi - t phi').
HessianEigenvalues hessian_eigenvalues(const RevolutionBody& body, double t);

/// Evaluates g1, g2 on kClassifyCells + 1 grid points, refines both minima by
/// golden-section search and classifies the body.
SupportReport classify_support(const RevolutionBody& body);

/// Density s_i(K, .) of the area measure S_i(K, .) at t:
///   [C(n-2,i) g1^i + C(n-2,i-1) g1^{i-1} g2] / C(n-1,i).
double area_density_at(const RevolutionBody& body, int i, double t);

struct AreaDensity {
  int n = 3;
  int order = 0;
  ZonalFunction density;
};

/// s_i(K, .) expanded up to kmax from its values at the grid nodes.
AreaDensity area_density(const RevolutionBody& body, int i, int kmax = kDefaultKmax);

/// Values of s_i(K, .) at the nodes of a spectral grid.
std::vector<double> area_density_values(const RevolutionBody& body, int i, const SpectralGrid& grid);

/// Density of the mixed area measure S(K_1, ..., K_{n-1}, .) at t: the mixed
/// discriminant of the restricted Hessians, which share an eigenframe, equal
/// to perm(M)/(n-1)! for the matrix M of their eigenvalues.
double mixed_area_density(std::span<const RevolutionBody> bodies, double t);

/// Permanent of a square row-major matrix (Ryser's formula).
double permanent(std::span<const double> matrix, int size);

struct IntervalReport {
  int n = 3;
  int k = 2;
  double i_lower = 0.0;  ///< -1 / ((k(n+k-2) - 1) nu_k^n[1])
  double i_upper = 0.0;  ///< (n-1) / ((k-1)(n+k-1))
  double j_lower = -1.0;
  double j_upper = 0.0;  ///< 1 / nu_k^n[1]
  bool exact = false;    ///< the I bounds are the exact interval (k = 2)
};

/// Bounds for the lambda with 1 + lambda P_k^n a support function (I) and the
/// gamma with 1 + gamma P_k^n a surface area density (J). Requires k >= 2.
IntervalReport intervals(int n, int k);

struct Transition {
  double lower = 0.0;
  double upper = 0.0;
};

/// Empirical endpoints of {lambda : 1 + lambda P_k^n is a support function},
/// located by bisection on classify_support() to tol.
Transition support_transitions(int n, int k, double tol = 1e-10);

}  // namespace minkval
