#include "minkval/zonal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>

#include "minkval/legendre.hpp"

namespace minkval {

namespace {

void check_dim(int n) {
  if (n < 3) throw std::domain_error("zonal function: dimension must be >= 3");
}

void check_same_dim(const ZonalFunction& a, const ZonalFunction& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

// Coefficient <-> multiplier factor omega_n / N(n,k).
double mult_factor(int n, int k) { return sphere_area(n) / harmonic_dimension_real(n, k); }

}  // namespace

ZonalFunction::ZonalFunction(int n, std::vector<double> coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  check_dim(n);
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

ZonalFunction ZonalFunction::zero(int n, int kmax) {
  return ZonalFunction(n, std::vector<double>(static_cast<std::size_t>(kmax) + 1, 0.0));
}

ZonalFunction ZonalFunction::constant(int n, int kmax, double value) {
  auto f = zero(n, kmax);
  f.coeffs_[0] = value;
  return f;
}

ZonalFunction ZonalFunction::legendre_mode(int n, int kmax, int k, double scale) {
  if (k < 0 || k > kmax) throw std::invalid_argument("legendre_mode: degree outside [0, kmax]");
  auto f = zero(n, kmax);
  f.coeffs_[static_cast<std::size_t>(k)] = scale;
  return f;
}

ZonalFunction ZonalFunction::from_multipliers(int n, std::span<const double> multipliers) {
  check_dim(n);
  std::vector<double> c(multipliers.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = multipliers[k] / mult_factor(n, static_cast<int>(k));
  }
  return ZonalFunction(n, std::move(c));
}

double ZonalFunction::multiplier(int k) const { return coeff(k) * mult_factor(n_, k); }

std::vector<double> ZonalFunction::multipliers() const {
  std::vector<double> a(coeffs_.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = multiplier(static_cast<int>(k));
  return a;
}

double ZonalFunction::operator()(double t) const {
  std::vector<double> p(coeffs_.size());
  legendre_table(n_, t, p);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += coeffs_[k] * p[k];
  return sum;
}

double ZonalFunction::derivative(double t) const {
  const auto jet = legendre_jet_table(n_, kmax(), t);
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) sum += coeffs_[k] * jet.d1[k];
  return sum;
}

double ZonalFunction::second_derivative(double t) const {
  const auto jet = legendre_jet_table(n_, kmax(), t);
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) sum += coeffs_[k] * jet.d2[k];
  return sum;
}

bool ZonalFunction::is_even(double tol) const {
  double scale = 0.0;
  for (double c : coeffs_) scale = std::max(scale, std::abs(c));
  for (std::size_t k = 1; k < coeffs_.size(); k += 2) {
    if (std::abs(coeffs_[k]) > tol * scale) return false;
  }
  return true;
}

ZonalFunction ZonalFunction::truncated(int kmax) const {
  std::vector<double> c(static_cast<std::size_t>(kmax) + 1, 0.0);
  std::copy_n(coeffs_.begin(), std::min(c.size(), coeffs_.size()), c.begin());
  return ZonalFunction(n_, std::move(c));
}

ZonalFunction& ZonalFunction::operator+=(const ZonalFunction& other) {
  check_same_dim(*this, other, "ZonalFunction::operator+=");
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

ZonalFunction& ZonalFunction::operator-=(const ZonalFunction& other) {
  check_same_dim(*this, other, "ZonalFunction::operator-=");
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

ZonalFunction& ZonalFunction::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

nlohmann::ordered_json ZonalFunction::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n_;
  j["kmax"] = kmax();
  j["coeffs"] = coeffs_;
  return j;
}

ZonalFunction ZonalFunction::from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  auto coeffs = j.at("coeffs").get<std::vector<double>>();
  if (j.contains("kmax")) {
    const int kmax = j.at("kmax").get<int>();
    if (kmax < 0) throw std::invalid_argument("ZonalFunction JSON: negative kmax");
    coeffs.resize(static_cast<std::size_t>(kmax) + 1, 0.0);
  }
  return ZonalFunction(n, std::move(coeffs));
}

SpectralGrid::SpectralGrid(int n, int kmax, int nodes) : kmax_(kmax), rule_(build_rule(n, nodes)) {
  if (kmax < 0) throw std::invalid_argument("SpectralGrid: kmax must be >= 0");
  const auto width = static_cast<std::size_t>(kmax) + 1;
  table_.resize(rule_.size() * width);
  for (std::size_t j = 0; j < rule_.size(); ++j) {
    legendre_table(n, rule_.nodes[j], std::span<double>(table_).subspan(j * width, width));
  }
  norm_.resize(width);
  for (std::size_t k = 0; k < width; ++k) {
    norm_[k] = harmonic_dimension_real(n, static_cast<int>(k)) / sphere_area(n);
  }
}

std::shared_ptr<const SpectralGrid> SpectralGrid::shared(int n, int kmax) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const SpectralGrid>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, kmax}];
  if (!slot) slot = std::make_shared<const SpectralGrid>(n, kmax, default_node_count(kmax));
  return slot;
}

ZonalFunction SpectralGrid::expand_values(std::span<const double> values) const {
  if (values.size() != rule_.size()) {
    throw std::invalid_argument("SpectralGrid::expand_values: wrong number of node values");
  }
  const auto width = static_cast<std::size_t>(kmax_) + 1;
  std::vector<double> c(width, 0.0);
  for (std::size_t j = 0; j < rule_.size(); ++j) {
    const double wv = rule_.weights[j] * values[j];
    const double* row = table_.data() + j * width;
    for (std::size_t k = 0; k < width; ++k) c[k] += wv * row[k];
  }
  for (std::size_t k = 0; k < width; ++k) c[k] *= norm_[k];
  return ZonalFunction(rule_.n, std::move(c));
}

std::vector<double> SpectralGrid::evaluate(const ZonalFunction& f) const {
  if (f.dim() != rule_.n) throw std::invalid_argument("SpectralGrid::evaluate: dimension mismatch");
  const auto width = static_cast<std::size_t>(kmax_) + 1;
  const auto coeffs = f.coeffs();
  const std::size_t used = std::min(width, coeffs.size());
  std::vector<double> values(rule_.size(), 0.0);
  for (std::size_t j = 0; j < rule_.size(); ++j) {
    const double* row = table_.data() + j * width;
    double sum = 0.0;
    for (std::size_t k = 0; k < used; ++k) sum += coeffs[k] * row[k];
    values[j] = sum;
  }
  // Degrees beyond the table are evaluated directly.
  if (coeffs.size() > width) {
    for (std::size_t j = 0; j < rule_.size(); ++j) {
      std::vector<double> p(coeffs.size());
      legendre_table(rule_.n, rule_.nodes[j], p);
      for (std::size_t k = width; k < coeffs.size(); ++k) values[j] += coeffs[k] * p[k];
    }
  }
  return values;
}

double SpectralGrid::inner(std::span<const double> f_values, std::span<const double> g_values) const {
  if (f_values.size() != rule_.size() || g_values.size() != rule_.size()) {
    throw std::invalid_argument("SpectralGrid::inner: wrong number of node values");
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < rule_.size(); ++j) sum += rule_.weights[j] * f_values[j] * g_values[j];
  return sum;
}

ZonalFunction expand_kinked(int n, const std::function<double(double)>& phi, int kmax) {
  const QuadratureRule rule = build_split_rule(n, default_node_count(kmax));
  const auto width = static_cast<std::size_t>(kmax) + 1;
  std::vector<double> c(width, 0.0);
  std::vector<double> p(width);
  for (std::size_t j = 0; j < rule.size(); ++j) {
    legendre_table(n, rule.nodes[j], p);
    const double wv = rule.weights[j] * phi(rule.nodes[j]);
    for (std::size_t k = 0; k < width; ++k) c[k] += wv * p[k];
  }
  for (std::size_t k = 0; k < width; ++k) {
    c[k] *= harmonic_dimension_real(n, static_cast<int>(k)) / sphere_area(n);
  }
  return ZonalFunction(n, std::move(c));
}

ZonalFunction convolve(const ZonalFunction& mu, const ZonalFunction& f) {
  check_same_dim(mu, f, "convolve");
  const int kmax = std::min(mu.kmax(), f.kmax());
  std::vector<double> c(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) c[static_cast<std::size_t>(k)] = mu.coeff(k) * f.multiplier(k);
  return ZonalFunction(mu.dim(), std::move(c));
}

double box_multiplier(int n, int k) {
  return (1.0 - k) * (k + n - 1.0) / (n - 1.0);
}

ZonalFunction box_n(const ZonalFunction& f) {
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= box_multiplier(f.dim(), static_cast<int>(k));
  return ZonalFunction(f.dim(), std::move(c));
}

double sobolev_norm(const ZonalFunction& f, int s) {
  if (s < 0) throw std::invalid_argument("sobolev_norm: order must be >= 0");
  if (!f.is_even(1e-10)) throw std::invalid_argument("sobolev_norm: function is not even");
  double sum = 0.0;
  for (int k = 0; k <= f.kmax(); ++k) {
    const double c = f.coeff(k);
    sum += std::pow(1.0 + static_cast<double>(k) * k, s) * c * c * mult_factor(f.dim(), k);
  }
  return std::sqrt(sum);
}

double l2_norm(const ZonalFunction& f) {
  double sum = 0.0;
  for (int k = 0; k <= f.kmax(); ++k) sum += f.coeff(k) * f.coeff(k) * mult_factor(f.dim(), k);
  return std::sqrt(sum);
}

ZonalFunction radon_t(const ZonalFunction& f, double t) {
  std::vector<double> p(static_cast<std::size_t>(f.kmax()) + 1);
  legendre_table(f.dim(), t, p);
  std::vector<double> c(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= p[k];
  return ZonalFunction(f.dim(), std::move(c));
}

std::vector<double> cosine_multipliers(int n, int kmax) {
  std::vector<double> a = expand_kinked(n, [](double t) { return std::abs(t); }, kmax).multipliers();
  for (std::size_t k = 1; k < a.size(); k += 2) a[k] = 0.0;
  return a;
}

double cosine_multiplier_closed_form(int n, int k) {
  if (n < 3 || k < 0) throw std::domain_error("cosine_multiplier_closed_form: bad arguments");
  if (k % 2 == 1) return 0.0;
  const double a0 = 2.0 * sphere_area(n - 1) / (n - 1.0);
  if (k == 0) return a0;
  double value = a0;
  for (int j = 1; j <= k - 3; j += 2) value *= j;
  for (int j = n + 1; j <= n + k - 1; j += 2) value /= j;
  return ((k / 2) % 2 == 1) ? value : -value;
}

ZonalFunction cosine_transform(const ZonalFunction& f) {
  return convolve(f, ZonalFunction::from_multipliers(f.dim(), cosine_multipliers(f.dim(), f.kmax())));
}

ZonalFunction segment_function(int n, int kmax) {
  return ZonalFunction::from_multipliers(n, cosine_multipliers(n, kmax));
}

}  // namespace minkval
