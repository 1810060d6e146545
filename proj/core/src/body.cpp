#include "minkval/body.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "minkval/errors.hpp"
#include "minkval/legendre.hpp"

namespace minkval {

namespace {

double binomial(int m, int r) {
  if (r < 0 || r > m) return 0.0;
  double value = 1.0;
  for (int j = 1; j <= r; ++j) value = value * (m - r + j) / j;
  return value;
}

template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

// Grid minimum of g refined inside the two neighbouring cells.
std::pair<double, double> locate_min(const std::vector<double>& grid, const std::vector<double>& values,
                                     const std::function<double(double)>& g) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] < values[best]) best = j;
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  auto [x, fx] = golden_min(g, lo, hi);
  if (fx < values[best]) return {x, fx};
  return {grid[best], values[best]};
}

void check_validity(const RevolutionBody& body, Validation validation, const char* what) {
  if (validation == Validation::Skip) return;
  const SupportReport report = classify_support(body);
  if (report.cls == SupportClass::NotSupport) {
    throw std::invalid_argument(std::string(what) + ": profile is not a support function (margin " +
                                std::to_string(report.margin()) + ")");
  }
}

}  // namespace

std::string to_string(SupportClass c) {
  switch (c) {
    case SupportClass::NotSupport:
      return "not_support";
    case SupportClass::Support:
      return "support";
    case SupportClass::C2Plus:
      return "c2plus";
  }
  return "unknown";
}

RevolutionBody RevolutionBody::ball(int n, double radius) {
  if (n < 3) throw std::domain_error("ball: dimension must be >= 3");
  if (!(radius >= 0.0)) throw std::invalid_argument("ball: radius must be >= 0");
  RevolutionBody body(n);
  body.terms_.push_back({radius, BallTerm{}});
  body.spec_ = {{"kind", "ball"}, {"n", n}, {"radius", radius}};
  return body;
}

RevolutionBody RevolutionBody::ellipsoid(int n, double a, double b) {
  if (n < 3) throw std::domain_error("ellipsoid: dimension must be >= 3");
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipsoid: semi-axes must be positive");
  RevolutionBody body(n);
  body.terms_.push_back({1.0, EllipsoidTerm{a, b}});
  body.spec_ = {{"kind", "ellipsoid"}, {"n", n}, {"a", a}, {"b", b}};
  return body;
}

RevolutionBody RevolutionBody::perturbed_ball(int n, int k, double lambda, Validation validation) {
  if (n < 3) throw std::domain_error("perturbed_ball: dimension must be >= 3");
  if (k < 0) throw std::invalid_argument("perturbed_ball: degree must be >= 0");
  RevolutionBody body(n);
  body.terms_.push_back({1.0, BallTerm{}});
  if (lambda != 0.0) {
    body.terms_.push_back({lambda, SeriesTerm{ZonalFunction::legendre_mode(n, k, k)}});
  }
  check_validity(body, validation, "perturbed_ball");
  body.spec_ = {{"kind", "perturbed_ball"}, {"n", n}, {"k", k}, {"lambda", lambda}};
  return body;
}

RevolutionBody RevolutionBody::from_series(ZonalFunction profile) {
  RevolutionBody body(profile.dim());
  body.spec_ = {{"kind", "series"}, {"n", profile.dim()}, {"coeffs", profile.coeffs()}};
  body.terms_.push_back({1.0, SeriesTerm{std::move(profile)}});
  return body;
}

RevolutionBody RevolutionBody::zonoid_from_multipliers(int n, std::span<const double> mu_multipliers,
                                                       Validation validation) {
  if (mu_multipliers.empty()) throw std::invalid_argument("zonoid: empty measure spectrum");
  // |a_k[mu]| <= a_0[mu] holds for every non-negative measure.
  for (double a : mu_multipliers) {
    if (std::abs(a) > mu_multipliers[0] * (1.0 + 1e-12)) {
      throw std::invalid_argument("zonoid: spectrum is not that of a non-negative measure");
    }
  }
  RevolutionBody body = generalized_zonoid(n, mu_multipliers, validation);
  body.spec_["kind"] = "zonoid";
  return body;
}

RevolutionBody RevolutionBody::generalized_zonoid(int n, std::span<const double> mu_multipliers,
                                                  Validation validation) {
  if (mu_multipliers.empty()) throw std::invalid_argument("generalized_zonoid: empty measure spectrum");
  const int kmax = static_cast<int>(mu_multipliers.size()) - 1;
  const std::vector<double> cos_mult = cosine_multipliers(n, kmax);
  std::vector<double> a(mu_multipliers.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = cos_mult[k] * mu_multipliers[k];
  RevolutionBody body(n);
  body.terms_.push_back({1.0, SeriesTerm{ZonalFunction::from_multipliers(n, a)}});
  check_validity(body, validation, "generalized_zonoid");
  body.spec_ = {{"kind", "generalized_zonoid"},
                {"n", n},
                {"mu", std::vector<double>(mu_multipliers.begin(), mu_multipliers.end())}};
  return body;
}

ProfileJet RevolutionBody::term_jet(const Term& term, double t) const {
  return std::visit(
      [&](const auto& shape) -> ProfileJet {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, BallTerm>) {
          return {1.0, 0.0, 0.0};
        } else if constexpr (std::is_same_v<T, EllipsoidTerm>) {
          const double d = shape.a * shape.a - shape.b * shape.b;
          const double phi = std::sqrt(shape.b * shape.b + d * t * t);
          return {phi, d * t / phi, d * shape.b * shape.b / (phi * phi * phi)};
        } else {
          const auto jet = legendre_jet_table(n_, shape.series.kmax(), t);
          ProfileJet out;
          const auto c = shape.series.coeffs();
          for (std::size_t k = 0; k < c.size(); ++k) {
            out.value += c[k] * jet.value[k];
            out.d1 += c[k] * jet.d1[k];
            out.d2 += c[k] * jet.d2[k];
          }
          return out;
        }
      },
      term.shape);
}

ProfileJet RevolutionBody::jet(double t) const {
  if (!(std::abs(t) <= 1.0)) throw std::domain_error("RevolutionBody::jet: t outside [-1, 1]");
  ProfileJet out{translation_ * t, translation_, 0.0};
  for (const Term& term : terms_) {
    const ProfileJet j = term_jet(term, t);
    out.value += term.weight * j.value;
    out.d1 += term.weight * j.d1;
    out.d2 += term.weight * j.d2;
  }
  return out;
}

RevolutionBody RevolutionBody::scaled(double s) const {
  RevolutionBody body = *this;
  for (Term& term : body.terms_) term.weight *= s;
  body.translation_ *= s;
  if (!body.spec_.is_null()) {
    body.spec_["scale"] = s * spec_.value("scale", 1.0);
    if (translation_ != 0.0) body.spec_["translation"] = body.translation_;
  }
  return body;
}

RevolutionBody RevolutionBody::translated(double c) const {
  RevolutionBody body = *this;
  body.translation_ += c;
  if (!body.spec_.is_null()) body.spec_["translation"] = body.translation_;
  return body;
}

RevolutionBody operator+(const RevolutionBody& a, const RevolutionBody& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("RevolutionBody sum: dimension mismatch");
  RevolutionBody sum = a;
  sum.terms_.insert(sum.terms_.end(), b.terms_.begin(), b.terms_.end());
  sum.translation_ += b.translation_;
  sum.spec_ = nullptr;
  return sum;
}

ZonalFunction RevolutionBody::expansion(int kmax) const {
  return expand(n_, [this](double t) { return profile(t); }, kmax);
}

nlohmann::ordered_json RevolutionBody::to_json() const {
  if (!spec_.is_null()) return spec_;
  nlohmann::ordered_json j;
  j["kind"] = "composite";
  j["n"] = n_;
  j["translation"] = translation_;
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const Term& term : terms_) {
    nlohmann::ordered_json shape = std::visit(
        [](const auto& s) -> nlohmann::ordered_json {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BallTerm>) {
            return {{"kind", "ball"}};
          } else if constexpr (std::is_same_v<T, EllipsoidTerm>) {
            return {{"kind", "ellipsoid"}, {"a", s.a}, {"b", s.b}};
          } else {
            return {{"kind", "series"}, {"coeffs", s.series.coeffs()}};
          }
        },
        term.shape);
    terms.push_back({{"weight", term.weight}, {"shape", shape}});
  }
  j["terms"] = terms;
  return j;
}

RevolutionBody RevolutionBody::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int n = j.at("n").get<int>();
  const Validation validation = j.value("validate", true) ? Validation::Enforce : Validation::Skip;

  auto finish = [&](RevolutionBody body) {
    if (j.contains("scale")) body = body.scaled(j.at("scale").get<double>());
    if (j.contains("translation") && kind != "composite") {
      body = body.translated(j.at("translation").get<double>() - body.translation_);
    }
    return body;
  };

  if (kind == "segment") {
    throw UnsupportedProfile("the segment profile |t| is not C^2 and is not a RevolutionBody");
  }
  if (kind == "ball") return finish(ball(n, j.value("radius", 1.0)));
  if (kind == "ellipsoid") return finish(ellipsoid(n, j.at("a").get<double>(), j.at("b").get<double>()));
  if (kind == "perturbed_ball") {
    return finish(perturbed_ball(n, j.at("k").get<int>(), j.at("lambda").get<double>(), validation));
  }
  if (kind == "zonoid" || kind == "generalized_zonoid") {
    const auto mu = j.at("mu").get<std::vector<double>>();
    return finish(kind == "zonoid" ? zonoid_from_multipliers(n, mu, validation)
                                   : generalized_zonoid(n, mu, validation));
  }
  if (kind == "series") {
    return finish(from_series(ZonalFunction(n, j.at("coeffs").get<std::vector<double>>())));
  }
  if (kind == "composite") {
    RevolutionBody body(n);
    body.translation_ = j.value("translation", 0.0);
    for (const auto& term : j.at("terms")) {
      const double w = term.at("weight").get<double>();
      const auto& shape = term.at("shape");
      const std::string shape_kind = shape.at("kind").get<std::string>();
      if (shape_kind == "ball") {
        body.terms_.push_back({w, BallTerm{}});
      } else if (shape_kind == "ellipsoid") {
        body.terms_.push_back({w, EllipsoidTerm{shape.at("a").get<double>(), shape.at("b").get<double>()}});
      } else if (shape_kind == "series") {
        body.terms_.push_back({w, SeriesTerm{ZonalFunction(n, shape.at("coeffs").get<std::vector<double>>())}});
      } else {
        throw std::invalid_argument("composite body: unknown term kind '" + shape_kind + "'");
      }
    }
    return body;
  }
  throw std::invalid_argument("unknown body kind '" + kind + "'");
}

HessianEigenvalues hessian_eigenvalues(const RevolutionBody& body, double t) {
  const ProfileJet j = body.jet(t);
  const double g1 = j.value - t * j.d1;
  // (1 - t^2) phi'' vanishes at the poles since phi'' is bounded.
  const double g2 = (std::abs(t) == 1.0 ? 0.0 : (1.0 - t * t) * j.d2) + g1;
  return {g1, g2};
}

SupportReport classify_support(const RevolutionBody& body) {
  std::vector<double> grid(kClassifyCells + 1);
  std::vector<double> g1(grid.size());
  std::vector<double> g2(grid.size());
  for (int j = 0; j <= kClassifyCells; ++j) {
    // Symmetric construction keeps t = 0 and t = +-1 exact.
    const double t = (2.0 * j - kClassifyCells) / kClassifyCells;
    grid[static_cast<std::size_t>(j)] = t;
    const HessianEigenvalues e = hessian_eigenvalues(body, t);
    g1[static_cast<std::size_t>(j)] = e.g1;
    g2[static_cast<std::size_t>(j)] = e.g2;
  }
  const auto [t1, m1] = locate_min(grid, g1, [&](double t) { return hessian_eigenvalues(body, t).g1; });
  const auto [t2, m2] = locate_min(grid, g2, [&](double t) { return hessian_eigenvalues(body, t).g2; });

  SupportReport report;
  report.min_g1 = m1;
  report.min_g2 = m2;
  report.argmin_g1 = t1;
  report.argmin_g2 = t2;
  const double margin = report.margin();
  if (margin > kC2PlusMargin) {
    report.cls = SupportClass::C2Plus;
  } else if (margin > kSupportMargin) {
    report.cls = SupportClass::Support;
  } else {
    report.cls = SupportClass::NotSupport;
  }
  return report;
}

double area_density_at(const RevolutionBody& body, int i, double t) {
  const int n = body.dim();
  if (i < 0 || i > n - 1) throw std::invalid_argument("area_density: order must be in [0, n-1]");
  if (i == 0) return 1.0;
  const HessianEigenvalues e = hessian_eigenvalues(body, t);
  const double lead = binomial(n - 2, i) * std::pow(e.g1, i);
  const double mixed = binomial(n - 2, i - 1) * std::pow(e.g1, i - 1) * e.g2;
  return (lead + mixed) / binomial(n - 1, i);
}

std::vector<double> area_density_values(const RevolutionBody& body, int i, const SpectralGrid& grid) {
  if (grid.dim() != body.dim()) throw std::invalid_argument("area_density: grid dimension mismatch");
  std::vector<double> values(grid.nodes().size());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = area_density_at(body, i, grid.nodes()[j]);
  return values;
}

AreaDensity area_density(const RevolutionBody& body, int i, int kmax) {
  const auto grid = SpectralGrid::shared(body.dim(), kmax);
  return {body.dim(), i, grid->expand_values(area_density_values(body, i, *grid))};
}

double permanent(std::span<const double> matrix, int size) {
  if (size < 0 || matrix.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {
    throw std::invalid_argument("permanent: matrix is not square");
  }
  if (size == 0) return 1.0;
  if (size > 24) throw std::invalid_argument("permanent: matrix too large");
  double total = 0.0;
  const std::uint32_t subsets = 1u << size;
  std::vector<double> row_sums(static_cast<std::size_t>(size));
  for (std::uint32_t s = 1; s < subsets; ++s) {
    std::fill(row_sums.begin(), row_sums.end(), 0.0);
    int count = 0;
    for (int c = 0; c < size; ++c) {
      if (s & (1u << c)) {
        ++count;
        for (int r = 0; r < size; ++r) row_sums[static_cast<std::size_t>(r)] += matrix[static_cast<std::size_t>(r * size + c)];
      }
    }
    double prod = 1.0;
    for (double v : row_sums) prod *= v;
    total += ((size - count) % 2 == 0) ? prod : -prod;
  }
  return total;
}

double mixed_area_density(std::span<const RevolutionBody> bodies, double t) {
  if (bodies.empty()) throw std::invalid_argument("mixed_area_density: no bodies");
  const int n = bodies.front().dim();
  const int m = n - 1;
  if (static_cast<int>(bodies.size()) != m) {
    throw std::invalid_argument("mixed_area_density: expected n-1 bodies");
  }
  std::vector<double> eig(static_cast<std::size_t>(m * m));
  for (int r = 0; r < m; ++r) {
    if (bodies[static_cast<std::size_t>(r)].dim() != n) {
      throw std::invalid_argument("mixed_area_density: dimension mismatch");
    }
    const HessianEigenvalues e = hessian_eigenvalues(bodies[static_cast<std::size_t>(r)], t);
    for (int c = 0; c < m - 1; ++c) eig[static_cast<std::size_t>(r * m + c)] = e.g1;
    eig[static_cast<std::size_t>(r * m + m - 1)] = e.g2;
  }
  double factorial = 1.0;
  for (int j = 2; j <= m; ++j) factorial *= j;
  return permanent(eig, m) / factorial;
}

IntervalReport intervals(int n, int k) {
  if (k < 2) throw std::domain_error("intervals: degree must be >= 2");
  const double nu = relative_maxima(n, k).front();
  IntervalReport r;
  r.n = n;
  r.k = k;
  r.i_lower = -1.0 / ((static_cast<double>(k) * (n + k - 2) - 1.0) * nu);
  r.i_upper = (n - 1.0) / ((k - 1.0) * (n + k - 1.0));
  r.j_lower = -1.0;
  r.j_upper = 1.0 / nu;
  r.exact = (k == 2);
  return r;
}

Transition support_transitions(int n, int k, double tol) {
  auto valid = [&](double lambda) {
    return classify_support(RevolutionBody::perturbed_ball(n, k, lambda, Validation::Skip)).cls !=
           SupportClass::NotSupport;
  };
  auto edge = [&](double direction) {
    double lo = 0.0;
    double hi = 0.1 * direction;
    while (valid(hi)) {
      lo = hi;
      hi *= 2.0;
      if (std::abs(hi) > 1e6) throw NumericError("support_transitions: no invalid bracket found");
    }
    while (std::abs(hi - lo) > tol) {
      const double mid = 0.5 * (lo + hi);
      (valid(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  return {edge(-1.0), edge(1.0)};
}

}  // namespace minkval
