#include <doctest.h>

#include <cmath>
#include <random>

#include "qtop/selfadjoint.hpp"
#include "qtop/spectrum.hpp"

using namespace qtop;

TEST_CASE("analytic spectrum of the swap matrix is the 4pi circle") {
  const auto t = analytic_spectrum(Unitary2::swap(), 4.5);
  // m^2/4 with multiplicity 2 for m >= 1, simple zero mode.
  REQUIRE(t.rows.size() == 5);
  CHECK(t.rows[0].lambda == doctest::Approx(0.0));
  CHECK(t.rows[0].multiplicity == 1);
  const double expect[] = {0.25, 1.0, 2.25, 4.0};
  for (int i = 1; i <= 4; ++i) {
    CHECK(t.rows[i].lambda == doctest::Approx(expect[i - 1]).epsilon(1e-12));
    CHECK(t.rows[i].multiplicity == 2);
  }
}

TEST_CASE("analytic spectrum of the identity is two 2pi circles") {
  const auto t = analytic_spectrum(Unitary2::identity(), 4.5);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].lambda == doctest::Approx(0.0));
  CHECK(t.rows[0].multiplicity == 2);
  CHECK(t.rows[1].lambda == doctest::Approx(1.0));
  CHECK(t.rows[1].multiplicity == 4);
  CHECK(t.rows[2].lambda == doctest::Approx(4.0));
  CHECK(t.rows[2].multiplicity == 4);
}

TEST_CASE("analytic spectrum of the pi/4 rotation") {
  // Eigenphases pi/4 and 7pi/4 give complex conjugate circles, so every
  // level is doubled.
  const auto t = analytic_spectrum(Unitary2::rotation(kPi / 4.0), 2.0);
  REQUIRE(t.rows.size() >= 3);
  CHECK(t.rows[0].lambda == doctest::Approx(1.0 / 64.0).epsilon(1e-12));
  CHECK(t.rows[1].lambda == doctest::Approx(49.0 / 64.0).epsilon(1e-12));
  CHECK(t.rows[2].lambda == doctest::Approx(81.0 / 64.0).epsilon(1e-12));
  for (const auto& r : t.rows) CHECK(r.multiplicity == 2);
}

TEST_CASE("secular determinant zeros and identity") {
  CHECK(std::abs(secular_determinant(Unitary2::swap(), 0.5)) < 1e-12);
  CHECK(std::abs(secular_determinant(Unitary2::identity(), 1.0 / 3.0)) > 1e-2);

  std::mt19937_64 rng(17);
  for (int t = 0; t < 25; ++t) {
    const Unitary2 u = haar_unitary2(rng);
    const auto f = eigenphases(u);
    // Vanishes at the eigenphase wavenumber.
    CHECK(std::abs(secular_determinant(u, f.alphas[0] / kIntervalLength)) < 1e-10);
    // Matches the closed form 4 det(u) (c - cos a1)(c - cos a2).
    std::uniform_real_distribution<double> kd(0.0, 4.0);
    const double k = kd(rng);
    const double c = std::cos(kIntervalLength * k);
    const cplx expect = 4.0 * u.matrix().determinant() * (c - std::cos(f.alphas[0])) *
                        (c - std::cos(f.alphas[1]));
    CHECK(std::abs(secular_determinant(u, k) - expect) < 1e-9);
  }
}

TEST_CASE("numeric solver agrees with the analytic oracle on named matrices") {
  for (const Unitary2& u : {Unitary2::swap(), Unitary2::identity(),
                            Unitary2::rotation(kPi / 4.0)}) {
    const auto a = analytic_spectrum(u, 10.0);
    const auto s = solve_spectrum_numeric(u, 10.0);
    const auto cmp = compare_spectra(a, s);
    CHECK(cmp.same_count);
    CHECK(cmp.max_abs_diff <= 1e-9);
  }
}

TEST_CASE("diagonal phase sweep moves branches continuously") {
  const auto t = solve_spectrum_numeric(Unitary2::diag_phases(0.0, kPi / 2.0), 5.0);
  bool found = false;
  for (const auto& r : t.rows) {
    if (std::abs(r.lambda - 1.0 / 16.0) < 1e-9) found = true;
  }
  CHECK(found);

  // Continuity along the sweep.
  double prev0 = -1.0;
  for (double th = 0.1; th <= 1.5; th += 0.05) {
    const auto tt = analytic_spectrum(Unitary2::diag_phases(0.0, th), 5.0);
    const auto ev = expand_eigenvalues(tt);
    if (prev0 >= 0.0) CHECK(std::abs(ev[1] - prev0) < 10.0 * 0.05);
    prev0 = ev[1];
  }
}

TEST_CASE("numeric solver matches oracle on random matrices") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 20; ++t) {
    const Unitary2 u = haar_unitary2(rng);
    const auto a = analytic_spectrum(u, 25.0);
    const auto s = solve_spectrum_numeric(u, 25.0);
    const auto cmp = compare_spectra(a, s);
    CHECK(cmp.same_count);
    CHECK(cmp.max_abs_diff <= 1e-9);
  }
}

TEST_CASE("no negative eigenvalues") {
  std::mt19937_64 rng(77);
  CHECK(negative_spectrum_empty(Unitary2::swap()));
  CHECK(negative_spectrum_empty(Unitary2::identity()));
  for (int t = 0; t < 10; ++t) CHECK(negative_spectrum_empty(haar_unitary2(rng)));
  for (const auto& r : solve_spectrum_numeric(Unitary2::rotation(1.0), 25.0).rows) {
    CHECK(r.lambda >= -1e-12);
  }
}

TEST_CASE("eigenfunctions: zero modes of two circles are constants") {
  const Unitary2 ub = Unitary2::identity();
  const auto t = analytic_spectrum(ub, 0.5);
  REQUIRE(t.rows[0].multiplicity == 2);
  const auto basis = eigenfunctions(ub, t.rows[0]);
  REQUIRE(basis.size() == 2);
  for (const auto& w : basis) {
    CHECK(std::abs(l2_norm(w) - 1.0) < 1e-10);
    // Constant on each interval: derivative vanishes everywhere.
    CHECK(w.value(1.0, 1).norm() < 1e-10);
  }
  CHECK(std::abs(inner_product(basis[0], basis[1])) < 1e-10);
}

TEST_CASE("eigenfunctions live in their domain and solve H psi = lambda psi") {
  for (const Unitary2& u : {Unitary2::swap(), Unitary2::rotation(kPi / 4.0)}) {
    const auto t = analytic_spectrum(u, 3.0);
    for (size_t i = 0; i < std::min<size_t>(3, t.rows.size()); ++i) {
      for (const auto& w : eigenfunctions(u, t.rows[i])) {
        CHECK(in_domain(w, u, 1e-9).in_domain);
        // -psi'' - lambda psi on a P=512 grid of evaluation points.
        double resid = 0.0;
        for (int p = 0; p < 512; ++p) {
          const double x = p * kIntervalLength / 511.0;
          resid = std::max(resid,
                           (-w.value(x, 2) - t.rows[i].lambda * w.value(x)).norm());
        }
        CHECK(resid < 1e-8);
      }
    }
  }
}

TEST_CASE("distinct eigenvalues give orthogonal eigenfunctions") {
  const Unitary2 u = Unitary2::rotation(kPi / 4.0);
  const auto t = analytic_spectrum(u, 4.0);
  std::vector<TwoIntervalWave> funcs;
  for (const auto& r : t.rows) funcs.push_back(eigenfunction(u, r));
  for (size_t a = 0; a < funcs.size(); ++a) {
    for (size_t b = a + 1; b < funcs.size(); ++b) {
      CHECK(std::abs(inner_product(funcs[a], funcs[b])) < 1e-8);
    }
  }
}

TEST_CASE("isospectral pair: swap vs diag(1,-1)") {
  const Unitary2 uswap = Unitary2::swap();
  const Unitary2 udiag = Unitary2::diag_phases(0.0, kPi);
  const auto sa = analytic_spectrum(uswap, 650.0);  // > 50 eigenvalues
  const auto sb = analytic_spectrum(udiag, 650.0);
  const auto ea = expand_eigenvalues(sa);
  const auto eb = expand_eigenvalues(sb);
  REQUIRE(ea.size() >= 50);
  REQUIRE(ea.size() == eb.size());
  for (size_t i = 0; i < 50; ++i) CHECK(std::abs(ea[i] - eb[i]) <= 1e-10);
}
