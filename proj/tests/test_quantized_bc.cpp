#include <doctest.h>

#include <cmath>
#include <random>

#include "qtop/quantized_bc.hpp"
#include "qtop/wigner.hpp"

using namespace qtop;

namespace {

Eigen::MatrixXcd gram_by_quadrature(const PWBasis& basis) {
  const auto quad = u2_quadrature(basis.p_max(), basis.two_j_max());
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (const auto& n : quad) {
    Eigen::VectorXcd y(basis.dim());
    for (int i = 0; i < basis.dim(); ++i) y(i) = pw_basis_value(basis.label(i), n.pt);
    G.noalias() += n.weight * (y.conjugate() * y.transpose());
  }
  return G;
}

Eigen::MatrixXcd interior_projector(const PWBasis& basis) {
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    if (basis.interior(basis.label(i))) P(i, i) = 1.0;
  }
  return P;
}

}  // namespace

TEST_CASE("wigner machinery basics") {
  // Spin algebra [Jx, Jy] = i Jz at a few spins.
  for (int tj : {1, 2, 3, 5}) {
    const auto Jx = spin_matrix(tj, 0), Jy = spin_matrix(tj, 1), Jz = spin_matrix(tj, 2);
    CHECK((Jx * Jy - Jy * Jx - cplx(0, 1) * Jz).norm() < 1e-12);
    const double j = tj / 2.0;
    CHECK((Jx * Jx + Jy * Jy + Jz * Jz -
           j * (j + 1) * Eigen::MatrixXcd::Identity(tj + 1, tj + 1))
              .norm() < 1e-12);
  }

  // D^{1/2}(s) is s itself, and D is a homomorphism at higher spin.
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Mat2 s1 = u2_decompose(haar_unitary2(rng)).s;
    const Mat2 s2 = u2_decompose(haar_unitary2(rng)).s;
    CHECK((wigner_d_matrix(1, s1) - s1).norm() < 1e-10);
    CHECK((wigner_d_matrix(4, Mat2(s1 * s2)) -
           wigner_d_matrix(4, s1) * wigner_d_matrix(4, s2))
              .norm() < 1e-9);
    // Half-integer spins change sign under s -> -s.
    CHECK((wigner_d_matrix(3, Mat2(-s1)) + wigner_d_matrix(3, s1)).norm() < 1e-9);
  }
}

TEST_CASE("basis enumeration and parity") {
  const auto b1 = build_basis(1, 1);
  CHECK(b1.dim() == 9);
  CHECK(b1.index({0, 1, 1, 1}) == -1);  // parity violation
  CHECK(b1.index({0, 0, 0, 0}) >= 0);

  const auto b2 = build_basis(2, 2);
  CHECK(b2.dim() == 38);
  for (int i = 0; i < b2.dim(); ++i) {
    const auto& l = b2.label(i);
    CHECK((l.p + l.two_j) % 2 == 0);
    CHECK(b2.index(l) == i);
  }

  CHECK_THROWS_AS(build_basis(0, 1), std::invalid_argument);
}

TEST_CASE("basis functions are orthonormal under the quadrature") {
  const auto basis = build_basis(2, 2);
  const auto G = gram_by_quadrature(basis);
  CHECK((G - Eigen::MatrixXcd::Identity(basis.dim(), basis.dim())).cwiseAbs().maxCoeff() <
        1e-6);
}

TEST_CASE("generator algebra and kinetic term") {
  const auto basis = build_basis(2, 2);
  const Eigen::MatrixXcd L1 = generator_matrix(basis, 1);
  const Eigen::MatrixXcd L2 = generator_matrix(basis, 2);
  const Eigen::MatrixXcd L3 = generator_matrix(basis, 3);
  const Eigen::MatrixXcd L4 = generator_matrix(basis, 4);

  CHECK((L1 * L2 - L2 * L1 - L3).norm() < 1e-10);
  CHECK((L2 * L3 - L3 * L2 - L1).norm() < 1e-10);
  CHECK((L3 * L1 - L1 * L3 - L2).norm() < 1e-10);
  CHECK((L1 * L4 - L4 * L1).norm() < 1e-12);
  CHECK((L1 + L1.adjoint()).norm() < 1e-12);

  // The rotor energy is the explicit -(1/2I) sum of squared generators.
  const Eigen::MatrixXcd S = L1 * L1 + L2 * L2 + L3 * L3 + L4 * L4;
  for (double I : {1.0, 2.0}) {
    const Eigen::MatrixXcd K = -S / (2.0 * I);
    const Eigen::VectorXd diag = kinetic_diagonal(basis, I);
    CHECK((K - Eigen::MatrixXcd(diag.cast<cplx>().asDiagonal())).norm() < 1e-10);
  }

  CHECK(casimir(0, 0) == 0.0);
  // Defining representation: - sum_alpha T(alpha)^2 = identity.
  CHECK(casimir(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("u operator: unitarity and algebra on the interior") {
  const auto basis = build_basis(3, 3);
  const auto uop = u_operator(basis);
  const auto P = interior_projector(basis);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(basis.dim(), basis.dim());

  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
      for (int b = 0; b < 2; ++b) {
        M += Eigen::MatrixXcd(uop[a][b]) * Eigen::MatrixXcd(uop[c][b]).adjoint();
      }
      const double resid = ((M - (a == c ? 1.0 : 0.0) * id) * P).norm();
      CHECK(resid < 1e-8);
    }
  }

  // Multiplication operators commute where the truncation does not bite.
  const Eigen::MatrixXcd u11(uop[0][0]), u22(uop[1][1]);
  CHECK(((u11 * u22 - u22 * u11) * P).norm() < 1e-8);

  // [L_alpha, u_hat] = -T(alpha) u_hat with T = -(i/2) sigma (or identity).
  const cplx mihalf(0.0, -0.5);
  Mat2 T[4];
  T[0] << 0, mihalf, mihalf, 0;
  T[1] << 0, -0.5, 0.5, 0;
  T[2] << mihalf, 0, 0, -mihalf;
  T[3] << mihalf, 0, 0, mihalf;
  for (int alpha = 1; alpha <= 4; ++alpha) {
    const Eigen::MatrixXcd L = generator_matrix(basis, alpha);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
        for (int c = 0; c < 2; ++c) rhs -= T[alpha - 1](a, c) * Eigen::MatrixXcd(uop[c][b]);
        const Eigen::MatrixXcd um(uop[a][b]);
        CHECK(((L * um - um * L - rhs) * P).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("coherent packets") {
  const auto basis = build_basis(4, 4);
  const auto st = coherent_packet(Unitary2::swap(), 0.5, basis);
  CHECK(std::abs(st.coeffs.norm() - 1.0) < 1e-12);

  // Peaks at its center.
  const double peak = std::norm(pw_evaluate(basis, st.coeffs, u2_decompose(Unitary2::swap())));
  const auto quad = u2_quadrature(2, 2);  // coarse probe set
  for (const auto& n : quad) {
    CHECK(std::norm(pw_evaluate(basis, st.coeffs, n.pt)) <= peak * (1.0 + 1e-9));
  }

  // Very wide packet degenerates to the constant function.
  const auto flat = coherent_packet(Unitary2::swap(), 50.0, basis);
  const int i0 = basis.index({0, 0, 0, 0});
  CHECK(std::abs(std::abs(flat.coeffs(i0)) - 1.0) < 1e-6);

  // A packet too sharp for the truncation warns; a comfortably wide one
  // does not.
  CHECK(coherent_packet(Unitary2::swap(), 0.02, basis).truncation_warning);
  CHECK(!coherent_packet(Unitary2::swap(), 1.0, basis).truncation_warning);

  CHECK_THROWS_AS(coherent_packet(Unitary2::swap(), 0.0, basis), std::invalid_argument);
}

TEST_CASE("packet expectation of u approaches the center as the width shrinks") {
  const auto basis = build_basis(8, 8);
  const auto uop = u_operator(basis);
  const Unitary2 u0 = Unitary2::rotation(kPi / 4.0);
  double prev = 1e9;
  for (double tau : {0.8, 0.4, 0.2}) {
    const auto st = coherent_packet(u0, tau, basis);
    double err = 0.0;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const cplx expect = st.coeffs.dot(uop[a][b] * st.coeffs);
        err = std::max(err, std::abs(expect - u0.matrix()(a, b)));
      }
    }
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.15);
}

TEST_CASE("bi-invariant distance") {
  const Mat2 ua = Unitary2::swap().matrix();
  const Mat2 ub = Mat2::Identity();
  CHECK(u2_distance(ua, ub) == doctest::Approx(kPi));
  CHECK(u2_distance(ua, ua) == doctest::Approx(0.0));
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    const Mat2 g = haar_unitary2(rng).matrix();
    const Mat2 a = haar_unitary2(rng).matrix();
    const Mat2 b = haar_unitary2(rng).matrix();
    CHECK(u2_distance(Mat2(g * a), Mat2(g * b)) == doctest::Approx(u2_distance(a, b)));
  }
}

TEST_CASE("topology distribution of the flat state is symmetric") {
  const auto basis = build_basis(4, 4);
  PeterWeylState flat;
  flat.coeffs = Eigen::VectorXcd::Zero(basis.dim());
  flat.coeffs(basis.index({0, 0, 0, 0})) = 1.0;
  // Ball masses of the flat state are the Haar ball volume on both sides;
  // the quadrature only approximates the sharp indicator, so the match is
  // at the few-percent level and tightens with the node count.
  const auto quad = u2_quadrature(10, 10);
  const auto td = topology_distribution(basis, flat, 0.7, quad);
  CHECK(td.P_a > 0.0);
  CHECK(std::abs(td.P_a - td.P_b) < 0.10 * (td.P_a + td.P_b));
  CHECK(td.P_a + td.P_b + td.P_other == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(topology_distribution(basis, flat, 2.0, quad), std::invalid_argument);
}

TEST_CASE("packet at the gluing point concentrates there") {
  const auto basis = build_basis(8, 8);
  const auto quad = u2_quadrature(8, 8);
  const auto st = coherent_packet(Unitary2::swap(), 0.1, basis);
  const auto td = topology_distribution(basis, st, 0.7, quad);
  CHECK(td.P_a > 0.8);
  CHECK(td.P_b < 0.05);
}

TEST_CASE("evolution conserves norm and energy") {
  const auto basis = build_basis(4, 4);
  const auto quad = u2_quadrature(4, 4);
  const auto st = coherent_packet(Unitary2::swap(), 0.4, basis);
  const std::vector<double> ts{0.0, 1.0, 5.0, 25.0, 100.0};

  EvolveOptions opt;
  opt.I = 3.0;
  opt.delta = 0.6;
  const auto trace = evolve(basis, st, opt, ts, quad);
  REQUIRE(trace.rows.size() == ts.size());
  const double e0 = trace.rows[0].energy;
  for (const auto& r : trace.rows) {
    CHECK(std::abs(r.norm - 1.0) <= 1e-10);
    CHECK(std::abs(r.energy - e0) <= 1e-8 * std::max(1.0, std::abs(e0)));
    CHECK(r.P_a + r.P_b + r.P_other == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Same contract with a potential in place.
  EvolveOptions opt2 = opt;
  opt2.V = tilt_potential(basis, Unitary2::identity(), 0.5);
  const auto trace2 = evolve(basis, st, opt2, ts, quad);
  const double e2 = trace2.rows[0].energy;
  for (const auto& r : trace2.rows) {
    CHECK(std::abs(r.norm - 1.0) <= 1e-10);
    CHECK(std::abs(r.energy - e2) <= 1e-8 * std::max(1.0, std::abs(e2)));
  }

  // Non-hermitian potentials are refused.
  EvolveOptions bad = opt;
  Eigen::SparseMatrix<cplx> badv(basis.dim(), basis.dim());
  badv.insert(0, 1) = 1.0;
  bad.V = badv;
  CHECK_THROWS_AS(evolve(basis, st, bad, ts, quad), std::invalid_argument);
}

TEST_CASE("kinetic-only evolution spreads a packet") {
  const auto basis = build_basis(6, 6);
  const auto quad = u2_quadrature(6, 6);
  const auto st = coherent_packet(Unitary2::swap(), 0.25, basis);
  EvolveOptions opt;
  opt.I = 1.0;
  opt.delta = 0.7;
  const auto trace = evolve(basis, st, opt, {0.0, 2.0, 5.0}, quad);
  CHECK(trace.rows.back().P_a < trace.rows.front().P_a);
}

TEST_CASE("multiplication operator reproduces a known function") {
  const auto basis = build_basis(2, 2);
  const auto quad = u2_quadrature(3, 3);  // margin over the band limit
  // f(u) = Re tr(u) as a multiplication operator, compared with the exact
  // assembly from the u_ab operators.
  const auto M = multiplication_operator(
      basis, quad, [](const U2Point& pt) { return std::real(pt.matrix().trace()); });
  const auto uop = u_operator(basis);
  const Eigen::MatrixXcd T = Eigen::MatrixXcd(uop[0][0]) + Eigen::MatrixXcd(uop[1][1]);
  const Eigen::MatrixXcd exact = 0.5 * (T + T.adjoint());
  const auto P = interior_projector(basis);
  CHECK(((M - exact) * P).norm() < 1e-8);
}

TEST_CASE("particle energy is the spectrum read off as a function of u") {
  CHECK(particle_energy(Unitary2::swap(), 0) == doctest::Approx(0.0));
  CHECK(particle_energy(Unitary2::swap(), 1) == doctest::Approx(0.25));
  CHECK(particle_energy(Unitary2::rotation(kPi / 4.0), 0) ==
        doctest::Approx(1.0 / 64.0));
}
