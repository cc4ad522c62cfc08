#include "qtop/wigner.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace qtop {

Eigen::MatrixXcd spin_matrix(int two_j, int axis) {
  if (two_j < 0) throw std::invalid_argument("spin_matrix: negative spin");
  const int d = two_j + 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  const double j = two_j / 2.0;
  if (axis == 2) {
    for (int r = 0; r < d; ++r) m(r, r) = j - r;
    return m;
  }
  if (axis != 0 && axis != 1) throw std::invalid_argument("spin_matrix: bad axis");
  // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>; row r holds m = j - r.
  for (int r = 1; r < d; ++r) {
    const double mm = j - r;  // raising from m to m+1 lands in row r-1
    const double c = std::sqrt(j * (j + 1) - mm * (mm + 1));
    if (axis == 0) {
      m(r - 1, r) = 0.5 * c;
      m(r, r - 1) = 0.5 * c;
    } else {
      m(r - 1, r) = cplx(0.0, -0.5 * c);
      m(r, r - 1) = cplx(0.0, 0.5 * c);
    }
  }
  return m;
}

AxisAngle su2_axis_angle(const Mat2& s) {
  if ((s * s.adjoint() - Mat2::Identity()).norm() > 1e-9 ||
      std::abs(s.determinant() - 1.0) > 1e-9)
    throw std::invalid_argument("su2_axis_angle: not in SU(2)");
  const double c = 0.5 * std::real(s(0, 0) + s(1, 1));
  const double vx = -0.5 * std::imag(s(0, 1) + s(1, 0));
  const double vy = 0.5 * std::real(s(1, 0) - s(0, 1));
  const double vz = -0.5 * std::imag(s(0, 0) - s(1, 1));
  const double sv = std::sqrt(vx * vx + vy * vy + vz * vz);
  AxisAngle aa;
  aa.theta = 2.0 * std::atan2(sv, c);
  if (sv > 1e-14) {
    aa.nx = vx / sv;
    aa.ny = vy / sv;
    aa.nz = vz / sv;
  }
  return aa;
}

Eigen::MatrixXcd wigner_d_matrix(int two_j, const Mat2& s) {
  const AxisAngle aa = su2_axis_angle(s);
  const Eigen::MatrixXcd nJ = aa.nx * spin_matrix(two_j, 0) +
                              aa.ny * spin_matrix(two_j, 1) +
                              aa.nz * spin_matrix(two_j, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(nJ);
  const int d = two_j + 1;
  Eigen::VectorXcd ph(d);
  for (int i = 0; i < d; ++i) ph(i) = std::polar(1.0, -aa.theta * es.eigenvalues()(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double cg_with_half(int two_j, int two_m, int two_mu, int two_J) {
  if (std::abs(two_mu) != 1) throw std::invalid_argument("cg_with_half: two_mu must be +-1");
  if (std::abs(two_m) > two_j) return 0.0;
  const double j = two_j / 2.0;
  const double m = two_m / 2.0;
  const double denom = 2.0 * j + 1.0;
  if (two_J == two_j + 1) {
    return two_mu > 0 ? std::sqrt((j + m + 1.0) / denom) : std::sqrt((j - m + 1.0) / denom);
  }
  if (two_J == two_j - 1) {
    return two_mu > 0 ? -std::sqrt((j - m) / denom) : std::sqrt((j + m) / denom);
  }
  return 0.0;
}

Mat2 su2_from_euler(double alpha, double beta, double gamma) {
  Mat2 out;
  const cplx ea = std::polar(1.0, -0.5 * alpha);
  const cplx eg = std::polar(1.0, -0.5 * gamma);
  const double cb = std::cos(0.5 * beta);
  const double sb = std::sin(0.5 * beta);
  out(0, 0) = ea * cb * eg;
  out(0, 1) = -ea * sb * std::conj(eg);
  out(1, 0) = std::conj(ea) * sb * eg;
  out(1, 1) = std::conj(ea) * cb * std::conj(eg);
  return out;
}

}  // namespace qtop
