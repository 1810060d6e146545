#include "minkval/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "minkval/errors.hpp"
#include "minkval/quadrature.hpp"

namespace minkval {

namespace {

constexpr int kDistancePoints = 1024;

void check_degree(int n, int i) {
  if (i < 1 || i > n - 1) throw std::invalid_argument("valuation degree must be in [1, n-1]");
}

// s_i(K, .) * f on the grid of the generator.
ZonalFunction apply_body(const MinkowskiValuation& val, const RevolutionBody& body) {
  if (body.dim() != val.dim()) throw std::invalid_argument("apply: dimension mismatch");
  const auto grid = SpectralGrid::shared(val.dim(), val.kmax());
  const ZonalFunction density = grid->expand_values(area_density_values(body, val.degree(), *grid));
  return convolve(density, val.generator());
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Segment:
      return "segment";
    case GeneratorKind::Body:
      return "body";
    case GeneratorKind::Spectrum:
      return "spectrum";
    case GeneratorKind::Projection:
      return "projection";
  }
  return "unknown";
}

MinkowskiValuation::MinkowskiValuation(ZonalFunction f, int i, GeneratorKind kind, nlohmann::ordered_json spec)
    : generator_(std::move(f)), i_(i), kind_(kind), spec_(std::move(spec)) {
  check_degree(generator_.dim(), i);
  scale_ = generator_.multiplier(0);
  if (!(scale_ > 0.0)) throw std::invalid_argument("generator must have a_0[f] > 0");
}

MinkowskiValuation MinkowskiValuation::from_segment(int n, int i, int kmax) {
  return MinkowskiValuation(segment_function(n, kmax), i, GeneratorKind::Segment, {{"kind", "segment"}});
}

MinkowskiValuation MinkowskiValuation::from_body(const RevolutionBody& body, int i, int kmax) {
  const SupportReport report = classify_support(body);
  if (report.cls == SupportClass::NotSupport) {
    throw std::invalid_argument("from_body: generator is not a support function");
  }
  MinkowskiValuation val(body.expansion(kmax), i, GeneratorKind::Body, body.to_json());
  val.c2plus_ = report.cls == SupportClass::C2Plus;
  return val;
}

MinkowskiValuation MinkowskiValuation::from_spectrum(ZonalFunction f, int i) {
  nlohmann::ordered_json spec = {{"kind", "spectrum"}, {"coeffs", f.coeffs()}};
  return MinkowskiValuation(std::move(f), i, GeneratorKind::Spectrum, std::move(spec));
}

MinkowskiValuation MinkowskiValuation::projection_body(int n, int kmax) {
  return MinkowskiValuation(0.5 * segment_function(n, kmax), n - 1, GeneratorKind::Projection,
                            {{"kind", "projection"}});
}

MinkowskiValuation MinkowskiValuation::normalized() const {
  MinkowskiValuation val = *this;
  if (!normalized_) {
    val.generator_ *= 1.0 / scale_;
    val.normalized_ = true;
  }
  return val;
}

nlohmann::ordered_json MinkowskiValuation::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = dim();
  j["i"] = i_;
  j["kmax"] = kmax();
  j["generator"] = spec_;
  j["a0"] = scale_;
  j["normalized"] = normalized_;
  return j;
}

MinkowskiValuation MinkowskiValuation::from_json(const nlohmann::json& j, int kmax) {
  const int n = j.at("n").get<int>();
  kmax = j.value("kmax", kmax);
  const nlohmann::json& gen = j.at("generator");
  const std::string kind = gen.at("kind").get<std::string>();
  MinkowskiValuation val = [&]() {
    if (kind == "projection") {
      if (j.contains("i") && j.at("i").get<int>() != n - 1) {
        throw std::invalid_argument("projection generator requires i = n-1");
      }
      return projection_body(n, kmax);
    }
    const int i = j.at("i").get<int>();
    if (kind == "segment") return from_segment(n, i, kmax);
    if (kind == "spectrum") {
      return from_spectrum(ZonalFunction(n, gen.at("coeffs").get<std::vector<double>>()), i);
    }
    nlohmann::json body_spec = gen;
    if (!body_spec.contains("n")) body_spec["n"] = n;
    return from_body(RevolutionBody::from_json(body_spec), i, kmax);
  }();
  if (j.value("normalize", false)) val = val.normalized();
  return val;
}

ZonalFunction apply_spectrum(const MinkowskiValuation& val, const ZonalFunction& profile) {
  return apply_body(val, RevolutionBody::from_series(profile));
}

ApplyResult apply(const MinkowskiValuation& val, const RevolutionBody& body) {
  ZonalFunction support = apply_body(val, body);
  SupportReport validity = classify_support(RevolutionBody::from_series(support));
  return {std::move(support), validity};
}

ApplyResult apply(const MinkowskiValuation& val, const ZonalFunction& profile) {
  return apply(val, RevolutionBody::from_series(profile));
}

nlohmann::ordered_json GapReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["i"] = i;
  j["a0"] = a0;
  j["generator_c2plus"] = generator_c2plus;
  j["gap_pass"] = gap_pass;
  j["contraction_pass"] = contraction_pass;
  j["decay"] = {{"slope", decay.slope}, {"points", decay.points}, {"rho", decay.rho},
                {"condition3", decay.condition3}};
  nlohmann::ordered_json table = nlohmann::ordered_json::array();
  for (const GapRow& r : rows) {
    table.push_back({{"k", r.k},
                     {"a_k", r.a_k},
                     {"gap_bound", r.gap_bound},
                     {"contraction_bound", r.contraction_bound},
                     {"gap_margin", r.gap_margin},
                     {"contraction_margin", r.contraction_margin},
                     {"linearization", r.linearization}});
  }
  j["rows"] = table;
  return j;
}

DecayFit decay_fit(const ZonalFunction& f, int k_lo, int k_hi, double floor) {
  const double a0 = std::abs(f.multiplier(0));
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int k = k_lo + (k_lo % 2); k <= std::min(k_hi, f.kmax()); k += 2) {
    const double a = std::abs(f.multiplier(k));
    if (!(a > floor * a0)) continue;
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  DecayFit fit;
  fit.points = count;
  if (count < 2) {
    // Nothing measurable above the floor: the spectrum is effectively finite.
    fit.slope = -std::numeric_limits<double>::infinity();
  } else {
    fit.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }
  fit.rho = -fit.slope;
  fit.condition3 = fit.rho > 2.0;
  return fit;
}

GapReport gap_check(const MinkowskiValuation& val, int kmax) {
  const int n = val.dim();
  const int i = val.degree();
  kmax = std::min(kmax, val.kmax());
  GapReport report;
  report.n = n;
  report.i = i;
  report.a0 = val.generator().multiplier(0);
  report.generator_c2plus = val.generator_c2plus();
  report.gap_pass = true;
  report.contraction_pass = true;
  const double strict = kStrictMargin * report.a0;
  for (int k = 2; k <= kmax; ++k) {
    GapRow row;
    row.k = k;
    row.a_k = val.generator().multiplier(k);
    row.gap_bound = report.a0 / ((k - 1.0) * (n + k - 1.0));
    row.contraction_bound = report.a0 * (n - 1.0) / (i * (k - 1.0) * (k + n - 1.0));
    row.gap_margin = row.gap_bound - std::abs(row.a_k);
    row.contraction_margin = row.contraction_bound - std::abs(row.a_k);
    row.linearization = i * box_multiplier(n, k) * row.a_k / report.a0;
    const bool equality_ok = k == 2 && !report.generator_c2plus;
    if (equality_ok ? row.gap_margin < -strict : row.gap_margin <= strict) report.gap_pass = false;
    if (row.contraction_margin <= strict) report.contraction_pass = false;
    report.rows.push_back(row);
  }
  report.decay = decay_fit(val.generator());
  return report;
}

std::vector<double> linearization_multipliers(const MinkowskiValuation& val, int m) {
  if (m < 1) throw std::invalid_argument("linearization_multipliers: m must be >= 1");
  const double a0 = val.generator().multiplier(0);
  std::vector<double> mu(static_cast<std::size_t>(val.kmax()) + 1);
  for (int k = 0; k <= val.kmax(); ++k) {
    const double base = val.degree() * box_multiplier(val.dim(), k) * val.generator().multiplier(k) / a0;
    mu[static_cast<std::size_t>(k)] = std::pow(base, m);
  }
  return mu;
}

DerivativeCheck derivative_fd_check(const MinkowskiValuation& val, const RevolutionBody& h,
                                    const ZonalFunction& g, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("derivative_fd_check: eps must be positive");
  const int n = val.dim();
  const int i = val.degree();
  const RevolutionBody plus = h + RevolutionBody::from_series(eps * g);
  const RevolutionBody minus = h + RevolutionBody::from_series(-eps * g);
  if (classify_support(plus).cls == SupportClass::NotSupport ||
      classify_support(minus).cls == SupportClass::NotSupport) {
    throw std::invalid_argument("derivative_fd_check: perturbed body is not a support function");
  }
  DerivativeCheck check;
  check.eps = eps;
  check.finite_difference = (apply_body(val, plus) - apply_body(val, minus)) * (0.5 / eps);

  std::vector<RevolutionBody> slots;
  slots.push_back(RevolutionBody::from_series(g));
  for (int j = 0; j < i - 1; ++j) slots.push_back(h);
  for (int j = 0; j < n - 1 - i; ++j) slots.push_back(RevolutionBody::ball(n));
  const auto grid = SpectralGrid::shared(n, val.kmax());
  std::vector<double> values(grid->nodes().size());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = i * mixed_area_density(slots, grid->nodes()[j]);
  check.analytic = convolve(grid->expand_values(values), val.generator());

  const ZonalFunction diff = check.finite_difference - check.analytic;
  for (int p = 0; p <= kDistancePoints; ++p) {
    const double t = (2.0 * p - kDistancePoints) / kDistancePoints;
    check.sup_error = std::max(check.sup_error, std::abs(diff(t)));
    check.sup_reference = std::max(check.sup_reference, std::abs(check.analytic(t)));
  }
  check.relative_error = check.sup_reference > 0.0 ? check.sup_error / check.sup_reference : check.sup_error;
  return check;
}

double sup_distance_to_ball(const ZonalFunction& h) {
  // Evaluate the non-constant part directly so that tiny distances do not
  // cancel against c_0.
  std::vector<double> c(h.coeffs().begin(), h.coeffs().end());
  c[0] = 0.0;
  const ZonalFunction d(h.dim(), std::move(c));
  double sup = 0.0;
  for (int p = 0; p <= kDistancePoints; ++p) {
    const double t = (2.0 * p - kDistancePoints) / kDistancePoints;
    sup = std::max(sup, std::abs(d(t)));
  }
  return sup;
}

double l2_distance_to_ball(const ZonalFunction& h) {
  ZonalFunction d = h;
  d -= ZonalFunction::constant(h.dim(), 0, h.coeff(0));
  return l2_norm(d);
}

nlohmann::ordered_json IterationReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["i"] = i;
  j["mode"] = mode == IterationMode::Phi ? "phi" : "phi2";
  j["degrees"] = degrees;
  j["truncated"] = truncated;
  j["diagnostic"] = diagnostic;
  j["final_distance"] = final_distance();
  j["fitted_ratios"] = fitted_ratios;
  j["predicted_ratios"] = predicted_ratios;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const IterationStep& s : steps) {
    rows.push_back({{"step", s.step},
                    {"sup_distance", s.sup_distance},
                    {"l2_distance", s.l2_distance},
                    {"beta", s.beta},
                    {"class", to_string(s.cls)},
                    {"coeffs", s.coeffs}});
  }
  j["steps"] = rows;
  return j;
}

IterationReport iterate(const MinkowskiValuation& val, const RevolutionBody& start, int steps,
                        IterationMode mode, std::vector<int> degrees) {
  if (steps < 0) throw std::invalid_argument("iterate: steps must be >= 0");
  const MinkowskiValuation v = val.normalized();
  IterationReport report;
  report.n = v.dim();
  report.i = v.degree();
  report.mode = mode;
  report.degrees = std::move(degrees);
  const int power = mode == IterationMode::Phi ? 1 : 2;
  const auto mu = linearization_multipliers(v, power);
  for (int d : report.degrees) {
    report.predicted_ratios.push_back(d >= 0 && d <= v.kmax() ? mu[static_cast<std::size_t>(d)] : nan());
  }

  auto record = [&](int step, const ZonalFunction& h, double beta, SupportClass cls) {
    IterationStep s;
    s.step = step;
    s.sup_distance = sup_distance_to_ball(h);
    s.l2_distance = l2_distance_to_ball(h);
    s.beta = beta;
    s.cls = cls;
    for (int d : report.degrees) s.coeffs.push_back(h.coeff(d));
    report.steps.push_back(std::move(s));
  };

  ZonalFunction h = start.expansion(v.kmax());
  if (!(h.coeff(0) > 0.0)) throw std::invalid_argument("iterate: start body has zero mean width");
  h *= 1.0 / h.coeff(0);
  record(0, h, 1.0, classify_support(start).cls);

  for (int step = 1; step <= steps; ++step) {
    ZonalFunction next = h;
    for (int p = 0; p < power; ++p) next = apply_spectrum(v, next);
    const double beta = next.coeff(0) / h.coeff(0);
    if (!(beta > 0.0)) {
      report.truncated = true;
      report.diagnostic = "iterate " + std::to_string(step) + " has non-positive mean width";
      break;
    }
    next *= 1.0 / next.coeff(0);
    const SupportReport cls = classify_support(RevolutionBody::from_series(next));
    h = std::move(next);
    record(step, h, beta, cls.cls);
    if (cls.cls == SupportClass::NotSupport) {
      report.truncated = true;
      report.diagnostic = "iterate " + std::to_string(step) + " is not a support function (margin " +
                          std::to_string(cls.margin()) + ")";
      break;
    }
  }
  report.final_profile = h;

  // Contraction factor per tracked degree: log-linear fit over steps after a
  // short transient while the coefficient is well above rounding level.
  for (std::size_t d = 0; d < report.degrees.size(); ++d) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    int sign = 0;
    for (std::size_t s = 1; s < report.steps.size(); ++s) {
      const double prev = report.steps[s - 1].coeffs[d];
      const double cur = report.steps[s].coeffs[d];
      if (std::abs(cur) < 1e-11 || std::abs(prev) < 1e-11) break;
      if (s < 3 && report.steps.size() > 6) continue;
      const double x = static_cast<double>(s);
      const double y = std::log(std::abs(cur));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++count;
      sign = (cur > 0) == (prev > 0) ? 1 : -1;
    }
    if (count < 2) {
      report.fitted_ratios.push_back(nan());
    } else {
      report.fitted_ratios.push_back(sign * std::exp((count * sxy - sx * sy) / (count * sxx - sx * sx)));
    }
  }
  return report;
}

ZonalFunction fm_residual(const MinkowskiValuation& val, const ZonalFunction& h, int m) {
  if (m < 1) throw std::invalid_argument("fm_residual: m must be >= 1");
  if (h.coeff(0) == 0.0) throw std::invalid_argument("fm_residual: zero mean width");
  const MinkowskiValuation v = val.normalized();
  ZonalFunction p = h;
  for (int j = 0; j < 2 * m; ++j) p = apply_spectrum(v, p);
  const double ratio = p.coeff(0) / h.coeff(0);
  return p - ratio * h.truncated(p.kmax());
}

ZonalFunction gm_map(const MinkowskiValuation& val, const ZonalFunction& h, int m) {
  ZonalFunction g = fm_residual(val, h, m);
  g += ZonalFunction::constant(h.dim(), 0, h.coeff(0));
  return g;
}

ZonalFunction resolvent(const MinkowskiValuation& val, const ZonalFunction& h, int m) {
  if (m < 1) throw std::invalid_argument("resolvent: m must be >= 1");
  if (h.dim() != val.dim()) throw std::invalid_argument("resolvent: dimension mismatch");
  double scale = 0.0;
  for (double c : h.coeffs()) scale = std::max(scale, std::abs(c));
  if (std::abs(h.coeff(0)) > 1e-12 * std::max(scale, 1.0)) {
    throw std::invalid_argument("resolvent: right-hand side has a constant term");
  }
  const auto mu = linearization_multipliers(val.normalized(), 2 * m);
  const int kmax = std::min(h.kmax(), val.kmax());
  std::vector<double> den(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (int k = 1; k <= kmax; ++k) {
    den[static_cast<std::size_t>(k)] = mu[static_cast<std::size_t>(k)] - 1.0;
    if (std::abs(den[static_cast<std::size_t>(k)]) < 1e-8) {
      throw SingularResolvent("resolvent: multiplier at degree " + std::to_string(k) + " equals one");
    }
  }
  std::vector<double> g(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (int k = 1; k <= kmax; ++k) g[static_cast<std::size_t>(k)] = h.coeff(k) / den[static_cast<std::size_t>(k)];
  for (int k = 1; k <= kmax; ++k) {
    const double back = den[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
    if (std::abs(back - h.coeff(k)) > 1e-10 * std::max(scale, 1.0)) {
      throw NumericError("resolvent: round trip failed at degree " + std::to_string(k));
    }
  }
  return ZonalFunction(h.dim(), std::move(g));
}

}  // namespace minkval
