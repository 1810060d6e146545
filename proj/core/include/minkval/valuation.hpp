#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "minkval/body.hpp"
#include "minkval/zonal.hpp"

namespace minkval {

/// Where a generating function came from. Body and segment generators are
/// support functions; spectrum generators are arbitrary zonal functions.
enum class GeneratorKind { Segment, Body, Spectrum, Projection };

std::string to_string(GeneratorKind kind);

/// Minkowski valuation Phi_i with h(Phi_i K, .) = S_i(K, .) * f.
///
/// The generator is stored at its original scale. normalized() returns the
/// valuation with a_0[f] = 1, which maps the unit ball to itself; the
/// iteration and linearization routines work with that copy.
class MinkowskiValuation {
 public:
  /// f = |e . u|, the support function of the segment [-e, e].
  static MinkowskiValuation from_segment(int n, int i, int kmax = kDefaultKmax);
  /// f = h(L, .) for a body of revolution L.
  static MinkowskiValuation from_body(const RevolutionBody& body, int i, int kmax = kDefaultKmax);
  /// Arbitrary generating function.
  static MinkowskiValuation from_spectrum(ZonalFunction f, int i);
  /// Projection body operator: i = n-1 and f = |e . u| / 2.
  static MinkowskiValuation projection_body(int n, int kmax = kDefaultKmax);

  int dim() const noexcept { return generator_.dim(); }
  int degree() const noexcept { return i_; }
  int kmax() const noexcept { return generator_.kmax(); }
  GeneratorKind kind() const noexcept { return kind_; }

  /// Generator at the scale it was given.
  const ZonalFunction& generator() const noexcept { return generator_; }
  /// a_0[f] of the original generator.
  double scale() const noexcept { return scale_; }
  bool is_normalized() const noexcept { return normalized_; }
  MinkowskiValuation normalized() const;

  /// Generator is the support function of a convex body (segment or body).
  bool body_generated() const noexcept { return kind_ != GeneratorKind::Spectrum; }
  /// Generator is a C^2_+ body. Used to decide whether k = 2 equality in the
  /// spectral gap is acceptable.
  bool generator_c2plus() const noexcept { return c2plus_; }

  nlohmann::ordered_json to_json() const;
  /// {"n": 4, "i": 2, "generator": {"kind": "segment"}}; any body record is
  /// accepted as generator, as is {"kind": "spectrum", "coeffs": [...]} and
  /// {"kind": "projection"}. Optional "kmax" and "normalize" fields.
  static MinkowskiValuation from_json(const nlohmann::json& j, int kmax = kDefaultKmax);

 private:
  MinkowskiValuation(ZonalFunction f, int i, GeneratorKind kind, nlohmann::ordered_json spec);

  ZonalFunction generator_;
  int i_ = 1;
  GeneratorKind kind_ = GeneratorKind::Spectrum;
  double scale_ = 1.0;
  bool normalized_ = false;
  bool c2plus_ = false;
  nlohmann::ordered_json spec_;
};

struct ApplyResult {
  ZonalFunction support;
  SupportReport validity;

  bool valid() const noexcept { return validity.cls != SupportClass::NotSupport; }
};

/// Support spectrum of Phi_i K, with a classification of the result. An
/// invalid result is returned, not thrown.
ApplyResult apply(const MinkowskiValuation& val, const RevolutionBody& body);
/// Same for a profile given as a Legendre series.
ApplyResult apply(const MinkowskiValuation& val, const ZonalFunction& profile);
/// Phi_i applied without classifying the result.
ZonalFunction apply_spectrum(const MinkowskiValuation& val, const ZonalFunction& profile);

struct GapRow {
  int k = 2;
  double a_k = 0.0;
  double gap_bound = 0.0;  ///< a_0 / ((k-1)(n+k-1))
  double contraction_bound = 0.0;  ///< a_0 (n-1) / (i (k-1)(k+n-1))
  double gap_margin = 0.0;
  double contraction_margin = 0.0;
  double linearization = 0.0;  ///< i box_k a_k / a_0
};

struct DecayFit {
  double slope = 0.0;  ///< least-squares slope of log|a_k| against log k
  int points = 0;
  double rho = 0.0;  ///< -slope
  bool condition3 = false;  ///< rho > 2 (diagnostic only)
};

struct GapReport {
  int n = 3;
  int i = 1;
  double a0 = 0.0;
  bool generator_c2plus = false;
  std::vector<GapRow> rows;
  bool gap_pass = false;
  bool contraction_pass = false;
  DecayFit decay;

  nlohmann::ordered_json to_json() const;
};

/// Relative tolerance separating strict margins from equality.
inline constexpr double kStrictMargin = 1e-10;

GapReport gap_check(const MinkowskiValuation& val, int kmax);
inline GapReport gap_check(const MinkowskiValuation& val) { return gap_check(val, val.kmax()); }

/// Log-log slope of |a_k| over even k in [k_lo, k_hi], skipping entries below
/// floor * a_0.
DecayFit decay_fit(const ZonalFunction& f, int k_lo = 8, int k_hi = 64, double floor = 1e-14);

/// [i box_k a_k[f] / a_0[f]]^m for k = 0..kmax.
std::vector<double> linearization_multipliers(const MinkowskiValuation& val, int m);

struct DerivativeCheck {
  double eps = 0.0;
  double sup_error = 0.0;
  double sup_reference = 0.0;
  double relative_error = 0.0;
  ZonalFunction finite_difference;
  ZonalFunction analytic;
};

/// Central difference of Phi_i at h in direction g against the mixed area
/// density formula i D(D^2 g, D^2 h[i-1], Id[n-1-i]) * f.
DerivativeCheck derivative_fd_check(const MinkowskiValuation& val, const RevolutionBody& h,
                                    const ZonalFunction& g, double eps);

enum class IterationMode { Phi, PhiSquared };

struct IterationStep {
  int step = 0;
  double sup_distance = 0.0;
  double l2_distance = 0.0;
  double beta = 0.0;  ///< mean width ratio before renormalization
  SupportClass cls = SupportClass::C2Plus;
  std::vector<double> coeffs;  ///< tracked degrees, after renormalization
};

struct IterationReport {
  int n = 3;
  int i = 1;
  IterationMode mode = IterationMode::PhiSquared;
  std::vector<int> degrees;  ///< degrees tracked in IterationStep::coeffs
  std::vector<IterationStep> steps;
  std::vector<double> fitted_ratios;     ///< per tracked degree, NaN when not measurable
  std::vector<double> predicted_ratios;  ///< linearization multipliers for the mode
  bool truncated = false;
  std::string diagnostic;
  ZonalFunction final_profile;

  double final_distance() const { return steps.empty() ? 0.0 : steps.back().sup_distance; }
  nlohmann::ordered_json to_json() const;
};

/// Iterates K <- Phi K (or Phi^2 K) with the normalized valuation, rescaling
/// every iterate to the mean width of the unit ball. Stops early, with
/// truncated set, if an iterate is not a support function.
IterationReport iterate(const MinkowskiValuation& val, const RevolutionBody& start, int steps,
                        IterationMode mode, std::vector<int> degrees = {2, 4, 6});

/// sup over [-1, 1] and L^2 distance of a profile to its constant part.
double sup_distance_to_ball(const ZonalFunction& h);
double l2_distance_to_ball(const ZonalFunction& h);

/// F_m(h) = Phi^{2m} h - (pi_0 Phi^{2m} h / pi_0 h) h, normalized valuation.
ZonalFunction fm_residual(const MinkowskiValuation& val, const ZonalFunction& h, int m);
/// G_m(h) = F_m(h) + pi_0 h.
ZonalFunction gm_map(const MinkowskiValuation& val, const ZonalFunction& h, int m);

/// Solves (i box T_f)^{2m} g - g = h for h without constant term. Throws
/// SingularResolvent when a multiplier is within 1e-8 of one, NumericError if
/// the round trip misses h by more than 1e-10.
ZonalFunction resolvent(const MinkowskiValuation& val, const ZonalFunction& h, int m);

}  // namespace minkval
