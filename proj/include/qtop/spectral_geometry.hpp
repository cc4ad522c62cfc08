#pragma once

#include <vector>

#include "qtop/spectrum.hpp"
#include "qtop/topology.hpp"

namespace qtop {

// Finite-difference operator on a uniform closed-chart grid.
struct DiscretizedOperator {
  Eigen::MatrixXcd matrix;
  int order_N = 2;  // 1 for first-order momentum type, 2 for Laplacian type
  double dx = 0.0;
  bool periodic = true;
};

// Second-order stencils. P nodes; periodic charts wrap, segment charts use
// the interior stencil only (Dirichlet-style truncation at the ends).
DiscretizedOperator laplacian_operator(double length, int P, bool periodic = true);
DiscretizedOperator momentum_operator(double length, int P);

struct WeylFit {
  double d = 0.0;
  double slope = 0.0;
  double intercept = 0.0;  // of the log lambda vs log n least squares line
  double r2 = 0.0;
};

// Dimension from eigenvalue growth: least squares of log lambda_n against
// log n over the multiplicity-expanded table (zero modes dropped), starting
// at index n_min; d = N / slope.
WeylFit weyl_dimension(const SpectrumTable& spec, int N, int n_min);
WeylFit weyl_dimension(const std::vector<double>& eigenvalues, int N, int n_min);

// A point of the glued configuration space: 1-based source interval and a
// coordinate in [0, L] on it.
struct ChartPoint {
  int interval = 1;
  double x = 0.0;
};

// Geodesic distance determined by the sup over unit-Lipschitz functions,
// computed from the gluing chart. Disconnected points give +infinity.
// When cross_validate is set, the grid operator-norm route must agree
// (2% for the first-order operator, 5% for the second-order identity) or
// the call throws.
double connes_distance_dirac(const TopologyReport& chart, ChartPoint x, ChartPoint y,
                             int P = 512, bool cross_validate = true);
double connes_distance_laplace(const TopologyReport& chart, ChartPoint x, ChartPoint y,
                               int P = 512, bool cross_validate = true);

// (1/2) ||[a, [a, H]]|| on the grid; converges to sup |a'|^2 as dx -> 0.
double grid_double_commutator_norm(const DiscretizedOperator& H,
                                   const Eigen::VectorXd& a);

// Norms of [[..[H, f1], f2].., fk] for k = 1..K, cycling through funcs.
std::vector<double> commutator_depth_residuals(const DiscretizedOperator& op,
                                               const std::vector<Eigen::VectorXd>& funcs,
                                               int K);

struct RougheningReport {
  std::vector<double> ratios;  // tail/head ratio for each order 0..K_max
  int largest_passing = -1;    // largest order with ratio < 0.01
};

// Differentiability-class proxy: order K passes when the tail of
// sum |omega_n|^{2K} |b_n|^2 stays below 1% of its head.
RougheningReport roughening_truncation(const std::vector<double>& omega,
                                       const std::vector<cplx>& b, int K_max);

}  // namespace qtop
