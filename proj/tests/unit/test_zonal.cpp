#include <cmath>

#include "doctest.h"
#include "frozen.hpp"
#include "minkval/random.hpp"
#include "minkval/zonal.hpp"

using namespace minkval;

TEST_CASE("expansion of simple profiles") {
  const auto one = expand(4, [](double) { return 1.0; }, 20);
  CHECK(one.coeff(0) == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 1; k <= 20; ++k) CHECK(std::abs(one.coeff(k)) < 1e-13);

  const auto p3 = expand(5, [](double t) { return legendre(5, 3, t); }, 20);
  for (int k = 0; k <= 20; ++k) CHECK(std::abs(p3.coeff(k) - (k == 3 ? 1.0 : 0.0)) < 1e-11);

  const auto seg = expand_kinked(3, [](double t) { return std::abs(t); }, 20);
  CHECK(seg.coeff(0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("reconstruction through the grid") {
  Rng rng(3);
  const auto f = random_zonal_function(rng, 4, 30);
  const auto grid = SpectralGrid::shared(4, 30);
  const auto g = grid->expand_values(grid->evaluate(f));
  for (int k = 0; k <= 30; ++k) CHECK(std::abs(g.coeff(k) - f.coeff(k)) < 1e-12);
  for (double t : {-0.8, 0.1, 0.95}) {
    double direct = 0.0;
    for (int k = 0; k <= 30; ++k) direct += f.coeff(k) * legendre(4, k, t);
    CHECK(f(t) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("multipliers and coefficients") {
  auto f = ZonalFunction::legendre_mode(6, 10, 4, 2.0);
  CHECK(f.multiplier(4) == doctest::Approx(2.0 * sphere_area(6) / harmonic_dimension_real(6, 4)));
  const auto back = ZonalFunction::from_multipliers(6, f.multipliers());
  for (int k = 0; k <= 10; ++k) CHECK(back.coeff(k) == doctest::Approx(f.coeff(k)));
}

TEST_CASE("convolution") {
  Rng rng(11);
  const auto f = random_zonal_function(rng, 5, 16);
  const auto mu = random_zonal_function(rng, 5, 20);

  SUBCASE("identity generator") {
    std::vector<double> a(17, 0.0);
    a[0] = 1.0;
    const auto id = ZonalFunction::from_multipliers(5, a);
    const auto c = ZonalFunction::constant(5, 16, 2.5);
    CHECK(convolve(c, id).coeff(0) == doctest::Approx(2.5));
  }
  SUBCASE("Funk-Hecke") {
    for (int k = 0; k <= 16; ++k) {
      const auto out = convolve(ZonalFunction::legendre_mode(5, 16, k), f);
      for (int j = 0; j <= 16; ++j) CHECK(out.coeff(j) == (j == k ? f.multiplier(k) : 0.0));
    }
  }
  SUBCASE("commutative and truncating") {
    const auto a = convolve(mu, f), b = convolve(f, mu);
    CHECK(a.kmax() == 16);
    for (int k = 0; k <= 16; ++k) CHECK(a.coeff(k) == doctest::Approx(b.coeff(k)).epsilon(1e-13));
  }
  SUBCASE("box commutes with convolution") {
    const auto a = box_n(convolve(mu, f)), b = convolve(box_n(mu), f);
    // Same products in a different order: equal up to rounding.
    for (int k = 0; k <= 16; ++k) CHECK(a.coeff(k) == doctest::Approx(b.coeff(k)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(convolve(ZonalFunction::zero(3, 4), ZonalFunction::zero(4, 4)), std::invalid_argument);
}

TEST_CASE("self-adjointness by quadrature") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 4;
    const auto f = random_zonal_function(rng, n, 12);
    const auto mu = random_zonal_function(rng, n, 12);
    const auto tau = random_zonal_function(rng, n, 12);
    const auto grid = SpectralGrid::shared(n, 40);
    const double lhs = grid->inner(grid->evaluate(convolve(mu, f)), grid->evaluate(tau));
    const double rhs = grid->inner(grid->evaluate(convolve(tau, f)), grid->evaluate(mu));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("box multipliers") {
  CHECK(box_multiplier(5, 0) == 1.0);
  CHECK(box_multiplier(5, 1) == 0.0);
  CHECK(box_multiplier(3, 2) == -2.0);
}

TEST_CASE("Sobolev norms") {
  for (int n = 3; n <= 6; ++n) {
    CHECK(sobolev_norm(ZonalFunction::constant(n, 8, 1.0), 3) == doctest::Approx(std::sqrt(sphere_area(n))));
  }
  std::vector<double> c = {1.0, 0.0, 0.3, 0.0, -0.2, 0.0, 0.05};
  const ZonalFunction f(4, c);
  const auto grid = SpectralGrid::shared(4, 20);
  const auto v = grid->evaluate(f);
  CHECK(std::abs(sobolev_norm(f, 0) - std::sqrt(grid->inner(v, v))) < 1e-10);
  CHECK(std::abs(l2_norm(f) - sobolev_norm(f, 0)) < 1e-14);
  CHECK(sobolev_norm(2.0 * f, 2) == doctest::Approx(2.0 * sobolev_norm(f, 2)));
  CHECK(sobolev_norm(f, 2) > sobolev_norm(f, 1));
  CHECK_THROWS_AS(sobolev_norm(ZonalFunction::legendre_mode(4, 3, 3), 1), std::invalid_argument);
}

TEST_CASE("Radon transforms") {
  Rng rng(9);
  auto f = random_zonal_function(rng, 4, 10);
  const auto r1 = radon_t(f, 1.0);
  for (int k = 0; k <= 10; ++k) CHECK(r1.coeff(k) == f.coeff(k));
  std::vector<double> even(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t k = 1; k < even.size(); k += 2) even[k] = 0.0;
  const ZonalFunction fe(4, even);
  const auto rm = radon_t(fe, -1.0);
  for (int k = 0; k <= 10; ++k) CHECK(rm.coeff(k) == fe.coeff(k));
  const auto r0 = radon_t(ZonalFunction::legendre_mode(4, 4, 2), 0.0);
  CHECK(r0.coeff(2) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("cosine transform multipliers") {
  const auto a3 = cosine_multipliers(3, 60);
  CHECK(a3[0] == doctest::Approx(frozen::cos_a0_n3).epsilon(1e-14));
  CHECK(a3[2] == doctest::Approx(frozen::cos_a2_n3).epsilon(1e-14));
  CHECK(a3[4] == doctest::Approx(-frozen::pi / 12).epsilon(1e-13));
  const auto a4 = cosine_multipliers(4, 60);
  CHECK(a4[2] / a4[0] == doctest::Approx(frozen::cos_ratio_n4).epsilon(1e-14));
  for (int n = 3; n <= 8; ++n) {
    const auto a = cosine_multipliers(n, 60);
    CHECK(a[2] / a[0] == doctest::Approx(1.0 / (n + 1)).epsilon(1e-13));
    for (int k = 0; k <= 60; ++k) {
      CHECK(std::abs(a[k] - cosine_multiplier_closed_form(n, k)) < 1e-12 * a[0]);
      if (k % 2 == 1) CHECK(a[k] == 0.0);
    }
  }
}

TEST_CASE("cosine transform of a Legendre mode") {
  const auto out = cosine_transform(ZonalFunction::legendre_mode(4, 10, 2));
  CHECK(out.coeff(2) == doctest::Approx(cosine_multipliers(4, 10)[2]));
}

TEST_CASE("JSON round trip") {
  const ZonalFunction f(5, {1.0, 0.25, -0.125});
  const auto j = f.to_json();
  CHECK(j.dump() == R"({"n":5,"kmax":2,"coeffs":[1.0,0.25,-0.125]})");
  const auto g = ZonalFunction::from_json(j);
  CHECK(g.dim() == 5);
  CHECK(g.coeff(2) == -0.125);
}
