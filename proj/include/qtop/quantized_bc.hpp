#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "qtop/core.hpp"

namespace qtop {

// Harmonic label on U(2) = (U(1) x SU(2)) / Z2: U(1) charge p and doubled
// SU(2) data (two_j, two_m, two_n), with p + two_j even.
struct PWLabel {
  int p = 0;
  int two_j = 0;
  int two_m = 0;
  int two_n = 0;
};

class PWBasis {
 public:
  PWBasis(int p_max, int two_j_max);

  int dim() const { return static_cast<int>(labels_.size()); }
  const std::vector<PWLabel>& labels() const { return labels_; }
  const PWLabel& label(int i) const { return labels_[i]; }
  int index(const PWLabel& l) const;  // -1 when absent
  int p_max() const { return p_max_; }
  int two_j_max() const { return two_j_max_; }

  // Labels whose images under one multiplication by u or u^dagger stay in
  // the truncation.
  bool interior(const PWLabel& l) const;

 private:
  int p_max_;
  int two_j_max_;
  std::vector<PWLabel> labels_;
  std::vector<int> offsets_;  // lookup table over (p, two_j)
};

PWBasis build_basis(int p_max, int two_j_max);

// Quadratic Casimir of the label under the fixed generator convention:
// j(j+1) + p^2/4.
double casimir(int p, int two_j);

// Diagonal of the rotor energy (1/2I) * casimir.
Eigen::VectorXd kinetic_diagonal(const PWBasis& basis, double I);

// Left-translation generator in the basis, alpha in {1,2,3} for the SU(2)
// directions and 4 for the U(1) direction. Antihermitian, block diagonal.
Eigen::SparseMatrix<cplx> generator_matrix(const PWBasis& basis, int alpha);

// Multiplication operators by the defining-representation entries u_ab,
// indexed [a][b] with a, b in {0, 1}.
std::array<std::array<Eigen::SparseMatrix<cplx>, 2>, 2> u_operator(const PWBasis& basis);

struct PeterWeylState {
  Eigen::VectorXcd coeffs;
  double boundary_shell_weight = 0.0;  // |coeff|^2 mass on non-interior labels
  bool truncation_warning = false;     // shell weight above 1%
};

// Heat-kernel packet centered at u0, normalized.
PeterWeylState coherent_packet(const Unitary2& u0, double tau, const PWBasis& basis);

// Decomposition u = e^{i phi} s with phi in (-pi/2, pi/2] and s in SU(2).
struct U2Point {
  double phi = 0.0;
  Mat2 s = Mat2::Identity();

  Mat2 matrix() const { return std::polar(1.0, phi) * s; }
};

U2Point u2_decompose(const Unitary2& u);

// Value of the basis function at a point.
cplx pw_basis_value(const PWLabel& l, const U2Point& pt);

// f(u) for a coefficient vector.
cplx pw_evaluate(const PWBasis& basis, const Eigen::VectorXcd& coeffs, const U2Point& pt);

struct QuadNode {
  U2Point pt;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;  // Euler angles of pt.s
  double weight = 0.0;
};

// Product quadrature, exact for products of basis functions within the
// cutoffs; weights sum to 1 (normalized Haar measure).
std::vector<QuadNode> u2_quadrature(int p_max, int two_j_max);

// Bi-invariant distance |log(u0^-1 u)|_F with eigenphases taken in (-pi, pi].
double u2_distance(const Mat2& a, const Mat2& b);

struct TopologyDistribution {
  double P_a = 0.0;      // mass within delta of the cross gluing point
  double P_b = 0.0;      // mass within delta of the identity
  double P_other = 0.0;  // remainder
};

TopologyDistribution topology_distribution(const PWBasis& basis, const PeterWeylState& state,
                                           double delta, const std::vector<QuadNode>& quad);

// Multiplication operator of a real function of u, assembled by quadrature.
Eigen::MatrixXcd multiplication_operator(const PWBasis& basis,
                                         const std::vector<QuadNode>& quad,
                                         const std::function<double(const U2Point&)>& f);

// n-th particle eigenvalue (n = 0 the lowest) as a function of u, from the
// eigenphase formula; smooth in u away from crossings.
double particle_energy(const Unitary2& u, int n);

// Tilt toward u0: -v Re tr(u0^dagger u) as a multiplication operator,
// assembled exactly from the u_ab operators.
Eigen::SparseMatrix<cplx> tilt_potential(const PWBasis& basis, const Unitary2& u0, double v);

struct EvolutionRow {
  double t = 0.0;
  double norm = 0.0;
  double energy = 0.0;
  double P_a = 0.0, P_b = 0.0, P_other = 0.0;
  cplx tr_u;
};

struct EvolutionTrace {
  std::vector<EvolutionRow> rows;
};

struct EvolveOptions {
  double I = 1.0;
  std::optional<Eigen::SparseMatrix<cplx>> V;  // hermitian potential in the basis
  double ramp_time = 0.0;  // V scaled by min(1, t / ramp_time); 0 = full strength
  double delta = 0.5;      // ball radius for the distribution
};

EvolutionTrace evolve(const PWBasis& basis, const PeterWeylState& state,
                      const EvolveOptions& opt, const std::vector<double>& t_grid,
                      const std::vector<QuadNode>& quad);

}  // namespace qtop
