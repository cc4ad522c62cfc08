#pragma once

#include "qtop/core.hpp"

namespace qtop {

// Spin-j angular momentum matrices, dimension two_j + 1, hermitian,
// [J_x, J_y] = i J_z. Basis ordered by descending magnetic index m = j..-j.
Eigen::MatrixXcd spin_matrix(int two_j, int axis);  // axis: 0 = x, 1 = y, 2 = z

// Axis-angle data of s in SU(2): s = cos(theta/2) 1 - i sin(theta/2) n.sigma,
// theta in [0, 2pi], |n| = 1 (n arbitrary unit when theta = 0 or 2pi).
struct AxisAngle {
  double theta = 0.0;
  double nx = 0.0, ny = 0.0, nz = 1.0;
};

AxisAngle su2_axis_angle(const Mat2& s);

// Representation matrix D^j(s) = exp(-i theta n.J); rows/cols ordered by
// descending m. Exact for half-integer j including the s -> -s sign.
Eigen::MatrixXcd wigner_d_matrix(int two_j, const Mat2& s);

// Clebsch-Gordan <j m; 1/2 mu | J M> for coupling with spin 1/2 in the
// Condon-Shortley convention. Arguments are doubled: two_mu = +-1,
// two_J = two_j +- 1, M = m + mu implied. Returns 0 outside the rules.
double cg_with_half(int two_j, int two_m, int two_mu, int two_J);

// Euler-angle SU(2) element e^{-i a Jz} e^{-i b Jy} e^{-i g Jz} in the
// defining representation.
Mat2 su2_from_euler(double alpha, double beta, double gamma);

}  // namespace qtop
