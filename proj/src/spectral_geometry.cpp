#include "qtop/spectral_geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Placement of a chart point in the glued space: a connected component plus
// a coordinate on it.
struct Placed {
  int component = 0;
  double s = 0.0;
  double circumference = 0.0;  // 0 for a segment chart
};

Placed place(const TopologyReport& chart, ChartPoint p) {
  if (p.interval < 1 || p.interval > 2 || p.x < -1e-12 || p.x > kIntervalLength + 1e-12)
    throw std::invalid_argument("chart point outside the intervals");
  Placed out;
  switch (chart.cls) {
    case TopologyClass::CircleOf4Pi:
      // The cross gluing chains interval 2 after interval 1.
      out.component = 0;
      out.s = (p.interval == 1 ? 0.0 : kIntervalLength) + p.x;
      out.circumference = 2.0 * kIntervalLength;
      break;
    case TopologyClass::TwoCirclesOf2Pi:
      out.component = p.interval;
      out.s = p.x;
      out.circumference = kIntervalLength;
      break;
    default:
      out.component = p.interval;
      out.s = p.x;
      out.circumference = 0.0;
      break;
  }
  return out;
}

double geodesic(const Placed& a, const Placed& b) {
  if (a.component != b.component) return kInf;
  const double d = std::abs(a.s - b.s);
  if (a.circumference == 0.0) return d;
  return std::min(d, a.circumference - d);
}

double circle_distance(double s, double t, double C) {
  const double d = std::abs(s - t);
  return std::min(d, C - d);
}

// Optimal unit-Lipschitz witness on the circle grid: distance to x.
Eigen::VectorXd witness(double C, int P, double x) {
  Eigen::VectorXd a(P);
  const double dx = C / P;
  for (int i = 0; i < P; ++i) a(i) = circle_distance(i * dx, x, C);
  return a;
}

}  // namespace

DiscretizedOperator laplacian_operator(double length, int P, bool periodic) {
  if (P < 3) throw std::invalid_argument("laplacian_operator: P < 3");
  DiscretizedOperator op;
  op.order_N = 2;
  op.periodic = periodic;
  op.dx = periodic ? length / P : length / (P - 1);
  const double w = 1.0 / (op.dx * op.dx);
  op.matrix = Eigen::MatrixXcd::Zero(P, P);
  for (int i = 0; i < P; ++i) {
    op.matrix(i, i) = 2.0 * w;
    if (i + 1 < P) {
      op.matrix(i, i + 1) = -w;
      op.matrix(i + 1, i) = -w;
    }
  }
  if (periodic) {
    op.matrix(0, P - 1) = -w;
    op.matrix(P - 1, 0) = -w;
  }
  return op;
}

DiscretizedOperator momentum_operator(double length, int P) {
  if (P < 3) throw std::invalid_argument("momentum_operator: P < 3");
  DiscretizedOperator op;
  op.order_N = 1;
  op.periodic = true;
  op.dx = length / P;
  const cplx w(0.0, -1.0 / (2.0 * op.dx));
  op.matrix = Eigen::MatrixXcd::Zero(P, P);
  for (int i = 0; i < P; ++i) {
    op.matrix(i, (i + 1) % P) = w;
    op.matrix(i, (i + P - 1) % P) = -w;
  }
  return op;
}

WeylFit weyl_dimension(const std::vector<double>& eigenvalues, int N, int n_min) {
  if (N != 1 && N != 2) throw std::invalid_argument("weyl_dimension: N must be 1 or 2");
  if (n_min < 1) throw std::invalid_argument("weyl_dimension: n_min < 1");
  std::vector<double> lam;
  for (double l : eigenvalues) {
    if (l > 1e-12) lam.push_back(l);
  }
  if (static_cast<int>(lam.size()) < n_min + 50)
    throw std::invalid_argument("weyl_dimension: need at least 50 eigenvalues past n_min");

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int m = 0;
  for (size_t i = n_min; i <= lam.size(); ++i) {
    const double x = std::log(static_cast<double>(i));
    const double y = std::log(lam[i - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++m;
  }
  WeylFit fit;
  const double denom = m * sxx - sx * sx;
  fit.slope = (m * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / m;
  const double corr = (m * sxy - sx * sy) /
                      std::sqrt(denom * (m * syy - sy * sy));
  fit.r2 = corr * corr;
  fit.d = N / fit.slope;
  return fit;
}

WeylFit weyl_dimension(const SpectrumTable& spec, int N, int n_min) {
  return weyl_dimension(expand_eigenvalues(spec), N, n_min);
}

double grid_double_commutator_norm(const DiscretizedOperator& H, const Eigen::VectorXd& a) {
  const int P = static_cast<int>(H.matrix.rows());
  if (a.size() != P) throw std::invalid_argument("grid_double_commutator_norm: size mismatch");
  Eigen::MatrixXcd M(P, P);
  for (int i = 0; i < P; ++i) {
    for (int l = 0; l < P; ++l) {
      const double da = a(i) - a(l);
      M(i, l) = da * da * H.matrix(i, l);
    }
  }
  return 0.5 * operator_norm(M);
}

double connes_distance_dirac(const TopologyReport& chart, ChartPoint x, ChartPoint y,
                             int P, bool cross_validate) {
  if (chart.ambiguous) throw std::invalid_argument("connes_distance_dirac: ambiguous chart");
  const Placed px = place(chart, x);
  const Placed py = place(chart, y);
  const double geo = geodesic(px, py);
  if (!cross_validate || !std::isfinite(geo) || geo <= 0.0 || px.circumference == 0.0)
    return geo;

  const double C = px.circumference;
  const DiscretizedOperator D = momentum_operator(C, P);
  const Eigen::VectorXd a = witness(C, P, px.s);
  Eigen::MatrixXcd comm = D.matrix * a.asDiagonal().toDenseMatrix().cast<cplx>() -
                          a.asDiagonal().toDenseMatrix().cast<cplx>() * D.matrix;
  const double norm = operator_norm(comm);
  const double grid_estimate = geo / norm;  // |a(y) - a(x)| / ||[D, a]||
  if (std::abs(grid_estimate - geo) > 0.02 * geo)
    throw std::runtime_error("connes_distance_dirac: grid validation outside 2%");
  return geo;
}

double connes_distance_laplace(const TopologyReport& chart, ChartPoint x, ChartPoint y,
                               int P, bool cross_validate) {
  if (chart.ambiguous) throw std::invalid_argument("connes_distance_laplace: ambiguous chart");
  const Placed px = place(chart, x);
  const Placed py = place(chart, y);
  const double geo = geodesic(px, py);
  if (!cross_validate || !std::isfinite(geo) || geo <= 0.0 || px.circumference == 0.0)
    return geo;

  // The double commutator of the witness with H acts as -2 (a')^2, so the
  // constraint (1/2)||[a,[a,H]]|| <= 1 pins sup |a'| to 1 and the sup of
  // |a(x) - a(y)| is the geodesic. The grid must reproduce that identity.
  const double C = px.circumference;
  const DiscretizedOperator H = laplacian_operator(C, P);
  const double half_norm = grid_double_commutator_norm(H, witness(C, P, px.s));
  if (std::abs(half_norm - 1.0) > 0.05)
    throw std::runtime_error("connes_distance_laplace: grid identity outside 5%");
  return geo;
}

std::vector<double> commutator_depth_residuals(const DiscretizedOperator& op,
                                               const std::vector<Eigen::VectorXd>& funcs,
                                               int K) {
  if (K < 1 || K > 6) throw std::invalid_argument("commutator_depth_residuals: K out of [1,6]");
  if (funcs.empty()) throw std::invalid_argument("commutator_depth_residuals: no functions");
  const int P = static_cast<int>(op.matrix.rows());
  for (const auto& f : funcs) {
    if (f.size() != P)
      throw std::invalid_argument("commutator_depth_residuals: function size mismatch");
  }
  std::vector<double> norms;
  Eigen::MatrixXcd c = op.matrix;
  for (int k = 0; k < K; ++k) {
    const Eigen::MatrixXcd f =
        funcs[k % funcs.size()].asDiagonal().toDenseMatrix().cast<cplx>();
    c = c * f - f * c;
    norms.push_back(operator_norm(c));
  }
  return norms;
}

RougheningReport roughening_truncation(const std::vector<double>& omega,
                                       const std::vector<cplx>& b, int K_max) {
  if (omega.size() != b.size())
    throw std::invalid_argument("roughening_truncation: size mismatch");
  if (K_max < 0) throw std::invalid_argument("roughening_truncation: K_max < 0");
  const size_t n = std::min<size_t>(omega.size(), 1000);
  RougheningReport rep;
  for (int K = 0; K <= K_max; ++K) {
    double head = 0.0, tail = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double term = std::pow(std::abs(omega[i]), 2.0 * K) * std::norm(b[i]);
      (i < n / 2 ? head : tail) += term;
    }
    const double ratio = head > 0.0 ? tail / head : kInf;
    rep.ratios.push_back(ratio);
    if (ratio < 0.01) rep.largest_passing = K;
  }
  return rep;
}

}  // namespace qtop
