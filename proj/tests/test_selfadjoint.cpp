#include <doctest.h>

#include <cmath>
#include <random>

#include "qtop/selfadjoint.hpp"
#include "qtop/spectrum.hpp"

using namespace qtop;

TEST_CASE("boundary form vanishes on pairs inside one domain") {
  const Unitary2 ua = Unitary2::swap();
  const auto spec = analytic_spectrum(ua, 2.0);
  REQUIRE(spec.rows.size() >= 2);
  const auto psi = eigenfunction(ua, spec.rows[0]);
  const auto chi = eigenfunction(ua, spec.rows[1]);
  CHECK(std::abs(boundary_form(psi, chi)) < 1e-10);
  CHECK(std::abs(boundary_form(psi, psi)) < 1e-10);
}

TEST_CASE("boundary form on constants is zero") {
  ModeTerm t;
  t.linear = true;
  t.A = Vec2(1.0, 1.0);
  const auto w = TwoIntervalWave::mode(t);
  CHECK(std::abs(boundary_form(w, w)) < 1e-14);
}

TEST_CASE("boundary form across distinct domains is O(1)") {
  std::mt19937_64 rng(23);
  const auto psi = random_domain_wave(Unitary2::swap(), rng);
  const auto chi = random_domain_wave(Unitary2::identity(), rng);
  CHECK(std::abs(boundary_form(psi, chi)) > 1e-2);
}

TEST_CASE("in_domain membership") {
  const Unitary2 ua = Unitary2::swap();
  const auto spec = analytic_spectrum(ua, 2.0);
  const auto psi = eigenfunction(ua, spec.rows[1]);
  const auto chk = in_domain(psi, ua, 1e-9);
  CHECK(chk.in_domain);

  // (sin(x/2), 0) has matching endpoint values but opposite derivatives at
  // the identity boundary condition.
  ModeTerm h;
  h.k = 0.5;
  h.B = Vec2(1.0, 0.0);
  const auto half = TwoIntervalWave::mode(h);
  const auto chk2 = in_domain(half, Unitary2::identity(), 1e-9);
  CHECK(!chk2.in_domain);
  CHECK(chk2.value_residual < 1e-12);
  CHECK(chk2.deriv_residual == doctest::Approx(1.0).epsilon(1e-12));

  ModeTerm c;
  c.linear = true;
  c.A = Vec2(cplx(0.3, 0.1), cplx(-1.2, 0.4));
  CHECK(in_domain(TwoIntervalWave::mode(c), Unitary2::identity(), 1e-12).in_domain);
}

TEST_CASE("in_domain is invariant under a global phase") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const Unitary2 u = haar_unitary2(rng);
    const auto psi = random_domain_wave(u, rng);
    const auto rotated = psi.scaled(std::polar(1.0, 2.1));
    CHECK(in_domain(psi, u, 1e-9).in_domain);
    CHECK(in_domain(rotated, u, 1e-9).in_domain);
  }
}

TEST_CASE("verify_symmetry on named and random matrices") {
  const auto ra = verify_symmetry(Unitary2::swap(), 8, 42);
  CHECK(ra.max_residual_in_domain <= 1e-9);
  CHECK(ra.max_residual_out_domain >= 0.1);

  const auto rr = verify_symmetry(Unitary2::rotation(kPi / 4.0), 8, 42);
  CHECK(rr.max_residual_in_domain <= 1e-9);

  CHECK_THROWS_AS(verify_symmetry(Unitary2::swap(), 1, 0), std::invalid_argument);
}

TEST_CASE("boundary form vanishes on D_u over many random u") {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Unitary2 u = haar_unitary2(rng);
    const auto a = random_domain_wave(u, rng);
    const auto b = random_domain_wave(u, rng);
    worst = std::max(worst, std::abs(boundary_form(a, b)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("boundary pairing antisymmetry") {
  std::mt19937_64 rng(55);
  for (int t = 0; t < 25; ++t) {
    const auto a = random_free_wave(rng);
    const auto b = random_free_wave(rng);
    CHECK(std::abs(boundary_form(a, b) + std::conj(boundary_form(b, a))) < 1e-10);
  }
}

TEST_CASE("grid and mode boundary data agree for smooth modes") {
  ModeTerm m;
  m.k = 1.25;
  m.A = Vec2(cplx(0.4, -0.2), cplx(0.9, 0.1));
  m.B = Vec2(cplx(-0.3, 0.8), cplx(0.2, 0.5));
  const auto w = TwoIntervalWave::mode(m);
  const auto bm = boundary_data(w);
  const auto bg = boundary_data(w.sampled(1025));
  CHECK((bm.value0 - bg.value0).norm() < 1e-10);
  CHECK((bm.valueL - bg.valueL).norm() < 1e-10);
  CHECK((bm.deriv0 - bg.deriv0).norm() < 1e-8);
  CHECK((bm.derivL - bg.derivL).norm() < 1e-8);

  // Too coarse a grid for endpoint derivatives.
  CHECK_THROWS_AS(boundary_data(w.sampled(4)), std::invalid_argument);
}
