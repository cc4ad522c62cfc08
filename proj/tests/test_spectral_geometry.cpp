#include <doctest.h>

#include <cmath>
#include <random>

#include "qtop/spectral_geometry.hpp"

using namespace qtop;

namespace {

Eigen::VectorXd sample_func(double length, int P, bool periodic,
                            const std::function<double(double)>& f) {
  Eigen::VectorXd v(P);
  const double dx = periodic ? length / P : length / (P - 1);
  for (int i = 0; i < P; ++i) v(i) = f(i * dx);
  return v;
}

}  // namespace

TEST_CASE("discretized operators are hermitian and consistent") {
  for (int P : {64, 257}) {
    const auto H = laplacian_operator(2.0 * kIntervalLength, P);
    CHECK((H.matrix - H.matrix.adjoint()).norm() < 1e-10);
    const auto D = momentum_operator(2.0 * kIntervalLength, P);
    CHECK((D.matrix - D.matrix.adjoint()).norm() < 1e-10);
  }

  // Applying to samples of e^{ikx} recovers k^2 (resp. k) at second order.
  const double L = 2.0 * kIntervalLength;
  const double k = 3.0 * 2.0 * kPi / L;  // integer mode of the circle
  std::vector<double> errH, errD, dxs;
  for (int P : {128, 256, 512}) {
    const auto H = laplacian_operator(L, P);
    const auto D = momentum_operator(L, P);
    Eigen::VectorXcd psi(P);
    for (int i = 0; i < P; ++i) psi(i) = std::polar(1.0, k * i * H.dx);
    errH.push_back((H.matrix * psi - k * k * psi).norm() / psi.norm() / (k * k));
    errD.push_back((D.matrix * psi - k * psi).norm() / psi.norm() / k);
    dxs.push_back(H.dx);
  }
  const double slopeH = std::log(errH[0] / errH[2]) / std::log(dxs[0] / dxs[2]);
  const double slopeD = std::log(errD[0] / errD[2]) / std::log(dxs[0] / dxs[2]);
  CHECK(slopeH > 1.8);
  CHECK(slopeH < 2.2);
  CHECK(slopeD > 1.8);
  CHECK(slopeD < 2.2);
}

TEST_CASE("weyl dimension on exact power laws") {
  std::vector<double> lin, quad;
  for (int n = 1; n <= 200; ++n) {
    lin.push_back(n);
    quad.push_back(0.25 * n * n);
  }
  const auto f1 = weyl_dimension(lin, 1, 1);
  CHECK(std::abs(f1.d - 1.0) < 1e-6);
  CHECK(f1.r2 > 1.0 - 1e-9);
  const auto f2 = weyl_dimension(quad, 2, 1);
  CHECK(std::abs(f2.d - 1.0) < 1e-6);

  CHECK_THROWS_AS(weyl_dimension(std::vector<double>(20, 1.0), 2, 1),
                  std::invalid_argument);
}

TEST_CASE("weyl dimension of the two-interval spectra is 1") {
  for (const Unitary2& u : {Unitary2::swap(), Unitary2::identity(),
                            Unitary2::rotation(kPi / 4.0)}) {
    const auto spec = analytic_spectrum(u, 70000.0);  // > 500 eigenvalues
    REQUIRE(expand_eigenvalues(spec).size() >= 500);
    const auto fit = weyl_dimension(spec, 2, 20);
    CHECK(std::abs(fit.d - 1.0) < 0.05);
  }
}

TEST_CASE("distances on the 4pi circle") {
  const auto chart = classify(Unitary2::swap());
  // Antipodal points, validated against the grid at P = 512.
  CHECK(connes_distance_dirac(chart, {1, 0.0}, {2, 0.0}) ==
        doctest::Approx(kIntervalLength));
  CHECK(connes_distance_laplace(chart, {1, 0.0}, {2, 0.0}) ==
        doctest::Approx(kIntervalLength));
  CHECK(connes_distance_dirac(chart, {1, 1.0}, {1, 1.0}) == 0.0);
  // Wrap-around: 3/4 of the way around is 1/4 backwards.
  CHECK(connes_distance_dirac(chart, {1, 0.0}, {2, kIntervalLength / 2.0}, 512) ==
        doctest::Approx(kIntervalLength / 2.0));
}

TEST_CASE("distances on two circles and on two intervals") {
  const auto two = classify(Unitary2::identity());
  CHECK(connes_distance_dirac(two, {1, 0.5}, {1, 1.5}) == doctest::Approx(1.0));
  CHECK(std::isinf(connes_distance_dirac(two, {1, 0.5}, {2, 0.5})));
  CHECK(std::isinf(connes_distance_laplace(two, {1, 0.0}, {2, 3.0})));

  const auto segs = classify(Unitary2::rotation(1.0));
  CHECK(connes_distance_dirac(segs, {1, 1.0}, {1, 4.0}) == doctest::Approx(3.0));
  CHECK(std::isinf(connes_distance_dirac(segs, {1, 1.0}, {2, 1.0})));

  auto amb = two;
  amb.ambiguous = true;
  CHECK_THROWS_AS(connes_distance_dirac(amb, {1, 0.0}, {1, 1.0}), std::invalid_argument);
}

TEST_CASE("distance symmetry and triangle inequality on the circle") {
  const auto chart = classify(Unitary2::swap());
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> ux(0.0, kIntervalLength);
  std::uniform_int_distribution<int> ui(1, 2);
  auto rnd = [&] { return ChartPoint{ui(rng), ux(rng)}; };
  for (int t = 0; t < 100; ++t) {
    const auto x = rnd(), y = rnd(), z = rnd();
    const double dxy = connes_distance_dirac(chart, x, y, 64, false);
    const double dyx = connes_distance_dirac(chart, y, x, 64, false);
    const double dyz = connes_distance_dirac(chart, y, z, 64, false);
    const double dxz = connes_distance_dirac(chart, x, z, 64, false);
    CHECK(std::abs(dxy - dyx) <= 1e-9);
    CHECK(dxz <= dxy + dyz + 1e-9);
    // The two constraint orders agree.
    CHECK(std::abs(dxy - connes_distance_laplace(chart, x, y, 64, false)) <= 1e-9);
  }
}

TEST_CASE("grid double-commutator identity and its convergence rate") {
  // a(x) = x/2 on a segment chart: sup |a'|^2 = 1/4.
  std::vector<double> err, dxs;
  for (int P : {128, 256, 512}) {
    const auto H = laplacian_operator(kIntervalLength, P, false);
    const auto a = sample_func(kIntervalLength, P, false, [](double x) { return 0.5 * x; });
    const double v = grid_double_commutator_norm(H, a);
    if (P == 512) CHECK(std::abs(v - 0.25) < 0.05 * 0.25);
    err.push_back(std::abs(v - 0.25));
    dxs.push_back(H.dx);
  }
  const double slope = std::log(err[0] / err[2]) / std::log(dxs[0] / dxs[2]);
  CHECK(slope > 1.8);
  CHECK(slope < 2.2);
}

TEST_CASE("nested commutator depths for a second-order operator") {
  const double L = kIntervalLength;
  std::vector<double> d3, dxs;
  std::vector<double> d1;
  for (int P : {128, 256, 512}) {
    const auto H = laplacian_operator(L, P);
    const auto f = sample_func(L, P, true, [](double x) { return std::sin(x); });
    const auto norms = commutator_depth_residuals(H, {f, f, f}, 3);
    d1.push_back(norms[0]);
    d3.push_back(norms[2]);
    dxs.push_back(H.dx);
  }
  // Depth 3 vanishes in the continuum: measured decay rate about 1 in dx.
  const double slope3 = std::log(d3[0] / d3[2]) / std::log(dxs[0] / dxs[2]);
  CHECK(slope3 >= 0.9);
  // Lower depths do not decay.
  CHECK(d1[2] >= d1[0] * 0.9);

  // First-order operator: depth 2 already decays.
  std::vector<double> d2;
  for (int P : {128, 256, 512}) {
    const auto D = momentum_operator(L, P);
    const auto f = sample_func(L, P, true, [](double x) { return std::sin(x); });
    d2.push_back(commutator_depth_residuals(D, {f, f}, 2)[1]);
  }
  const double slope2 = std::log(d2[0] / d2[2]) / std::log(dxs[0] / dxs[2]);
  CHECK(slope2 >= 0.9);

  // Constants commute exactly.
  const auto H = laplacian_operator(L, 64);
  const auto ones = Eigen::VectorXd::Constant(64, 2.5);
  for (double n : commutator_depth_residuals(H, {ones}, 4)) CHECK(n < 1e-12);

  CHECK_THROWS_AS(commutator_depth_residuals(H, {ones}, 7), std::invalid_argument);
}

TEST_CASE("roughening truncation classifies coefficient decay") {
  std::vector<double> omega;
  std::vector<cplx> exp_b, quad_b, quart_b;
  for (int n = 1; n <= 1000; ++n) {
    const double w = std::sqrt(static_cast<double>(n));
    omega.push_back(w);
    exp_b.push_back(std::exp(-w));
    quad_b.push_back(1.0 / (w * w));
    quart_b.push_back(1.0 / (w * w * w * w));
  }

  const auto smooth = roughening_truncation(omega, exp_b, 6);
  CHECK(smooth.largest_passing == 6);

  const auto rough = roughening_truncation(omega, quad_b, 4);
  CHECK(rough.ratios[0] < 0.01);
  CHECK(rough.ratios[2] >= 0.01);
  CHECK(rough.ratios[3] >= 0.01);

  const auto mid = roughening_truncation(omega, quart_b, 4);
  CHECK(mid.ratios[0] < 0.01);
  CHECK(mid.ratios[1] < 0.01);
  CHECK(mid.ratios[3] >= 0.01);
  CHECK(mid.ratios[4] >= 0.01);
}
