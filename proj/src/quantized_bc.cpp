#include "qtop/quantized_bc.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <stdexcept>

#include "qtop/spectrum.hpp"
#include "qtop/wigner.hpp"

namespace qtop {

namespace {

int block_dim(int two_j) { return two_j + 1; }

// Row index of magnetic number two_m inside a (p, j) block (descending m).
int m_index(int two_j, int two_m) { return (two_j - two_m) / 2; }

// Gauss-Legendre nodes/weights on [-1, 1] via the Jacobi matrix.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i - 1, i) = b;
    J(i, i - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    w[i] = 2.0 * v * v;
  }
}

// Integer powers z^k for k in [-kmax, kmax], |z| = 1.
std::vector<cplx> power_table(cplx z, int kmax) {
  std::vector<cplx> t(2 * kmax + 1);
  t[kmax] = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    t[kmax + k] = t[kmax + k - 1] * z;
    t[kmax - k] = std::conj(t[kmax + k]);
  }
  return t;
}

// Little-d matrices for every spin at a fixed polar angle.
std::vector<Eigen::MatrixXd> little_d_stack(int two_j_max, double beta) {
  std::vector<Eigen::MatrixXd> out;
  const Mat2 s = su2_from_euler(0.0, beta, 0.0);
  for (int tj = 0; tj <= two_j_max; ++tj) out.push_back(wigner_d_matrix(tj, s).real());
  return out;
}

// Fast evaluator over a quadrature built by u2_quadrature: caches the
// little-d stacks per distinct polar angle.
class NodeEvaluator {
 public:
  NodeEvaluator(const PWBasis& basis) : basis_(basis) {}

  // All basis values at the node, using its Euler angles.
  void values(const QuadNode& node, Eigen::VectorXcd& y) {
    auto it = d_cache_.find(node.beta);
    if (it == d_cache_.end())
      it = d_cache_.emplace(node.beta, little_d_stack(basis_.two_j_max(), node.beta)).first;
    const auto& dstack = it->second;

    const int pm = basis_.p_max();
    const int tj = basis_.two_j_max();
    const auto pf = power_table(std::polar(1.0, node.pt.phi), pm);
    const auto pa = power_table(std::polar(1.0, -0.5 * node.alpha), tj);
    const auto pg = power_table(std::polar(1.0, -0.5 * node.gamma), tj);

    y.resize(basis_.dim());
    for (int i = 0; i < basis_.dim(); ++i) {
      const PWLabel& l = basis_.label(i);
      const double d =
          dstack[l.two_j](m_index(l.two_j, l.two_m), m_index(l.two_j, l.two_n));
      y(i) = std::sqrt(l.two_j + 1.0) * pf[pm + l.p] * pa[tj + l.two_m] *
             pg[tj + l.two_n] * d;
    }
  }

 private:
  const PWBasis& basis_;
  std::map<double, std::vector<Eigen::MatrixXd>> d_cache_;
};

}  // namespace

PWBasis::PWBasis(int p_max, int two_j_max) : p_max_(p_max), two_j_max_(two_j_max) {
  if (p_max < 1 || two_j_max < 1)
    throw std::invalid_argument("PWBasis: cutoffs too small");
  offsets_.assign((2 * p_max + 1) * (two_j_max + 1), -1);
  for (int p = -p_max; p <= p_max; ++p) {
    for (int tj = 0; tj <= two_j_max; ++tj) {
      if ((p + tj) % 2 != 0) continue;
      offsets_[(p + p_max) * (two_j_max + 1) + tj] = static_cast<int>(labels_.size());
      for (int tm = tj; tm >= -tj; tm -= 2) {
        for (int tn = tj; tn >= -tj; tn -= 2) {
          labels_.push_back({p, tj, tm, tn});
        }
      }
    }
  }
  if (dim() < 4) throw std::invalid_argument("PWBasis: dimension below 4");
}

int PWBasis::index(const PWLabel& l) const {
  if (std::abs(l.p) > p_max_ || l.two_j < 0 || l.two_j > two_j_max_) return -1;
  if ((l.p + l.two_j) % 2 != 0) return -1;
  if (std::abs(l.two_m) > l.two_j || std::abs(l.two_n) > l.two_j) return -1;
  const int off = offsets_[(l.p + p_max_) * (two_j_max_ + 1) + l.two_j];
  if (off < 0) return -1;
  return off + m_index(l.two_j, l.two_m) * block_dim(l.two_j) + m_index(l.two_j, l.two_n);
}

bool PWBasis::interior(const PWLabel& l) const {
  return std::abs(l.p) <= p_max_ - 1 && l.two_j <= two_j_max_ - 1;
}

PWBasis build_basis(int p_max, int two_j_max) { return PWBasis(p_max, two_j_max); }

double casimir(int p, int two_j) {
  const double j = two_j / 2.0;
  return j * (j + 1.0) + 0.25 * p * p;
}

Eigen::VectorXd kinetic_diagonal(const PWBasis& basis, double I) {
  if (!(I > 0.0)) throw std::invalid_argument("kinetic_diagonal: I <= 0");
  Eigen::VectorXd d(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const PWLabel& l = basis.label(i);
    d(i) = casimir(l.p, l.two_j) / (2.0 * I);
  }
  return d;
}

Eigen::SparseMatrix<cplx> generator_matrix(const PWBasis& basis, int alpha) {
  if (alpha < 1 || alpha > 4) throw std::invalid_argument("generator_matrix: alpha in 1..4");
  std::vector<Eigen::Triplet<cplx>> trip;
  if (alpha == 4) {
    for (int i = 0; i < basis.dim(); ++i) {
      trip.emplace_back(i, i, cplx(0.0, 0.5 * basis.label(i).p));
    }
  } else {
    // Within each block the action on the row index m is i J^T.
    std::map<int, Eigen::MatrixXcd> jt;
    for (int i = 0; i < basis.dim(); ++i) {
      const PWLabel& l = basis.label(i);
      auto it = jt.find(l.two_j);
      if (it == jt.end())
        it = jt.emplace(l.two_j, spin_matrix(l.two_j, alpha - 1).transpose()).first;
      const auto& J = it->second;
      const int row_m = m_index(l.two_j, l.two_m);
      for (int k = 0; k <= l.two_j; ++k) {
        const cplx v = cplx(0.0, 1.0) * J(k, row_m);
        if (std::abs(v) < 1e-15) continue;
        PWLabel tgt = l;
        tgt.two_m = l.two_j - 2 * k;
        trip.emplace_back(basis.index(tgt), i, v);
      }
    }
  }
  Eigen::SparseMatrix<cplx> m(basis.dim(), basis.dim());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

std::array<std::array<Eigen::SparseMatrix<cplx>, 2>, 2> u_operator(const PWBasis& basis) {
  std::array<std::array<std::vector<Eigen::Triplet<cplx>>, 2>, 2> trip;
  for (int i = 0; i < basis.dim(); ++i) {
    const PWLabel& l = basis.label(i);
    for (int a = 0; a < 2; ++a) {
      const int tmu = 1 - 2 * a;
      for (int b = 0; b < 2; ++b) {
        const int tnu = 1 - 2 * b;
        for (int tJ : {l.two_j + 1, l.two_j - 1}) {
          if (tJ < 0) continue;
          PWLabel tgt{l.p + 1, tJ, l.two_m + tmu, l.two_n + tnu};
          const int row = basis.index(tgt);
          if (row < 0) continue;
          const double c = std::sqrt((l.two_j + 1.0) / (tJ + 1.0)) *
                           cg_with_half(l.two_j, l.two_m, tmu, tJ) *
                           cg_with_half(l.two_j, l.two_n, tnu, tJ);
          if (std::abs(c) < 1e-15) continue;
          trip[a][b].emplace_back(row, i, c);
        }
      }
    }
  }
  std::array<std::array<Eigen::SparseMatrix<cplx>, 2>, 2> out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out[a][b] = Eigen::SparseMatrix<cplx>(basis.dim(), basis.dim());
      out[a][b].setFromTriplets(trip[a][b].begin(), trip[a][b].end());
    }
  }
  return out;
}

U2Point u2_decompose(const Unitary2& u) {
  U2Point pt;
  pt.phi = 0.5 * std::arg(u.matrix().determinant());
  pt.s = std::polar(1.0, -pt.phi) * u.matrix();
  return pt;
}

cplx pw_basis_value(const PWLabel& l, const U2Point& pt) {
  const Eigen::MatrixXcd D = wigner_d_matrix(l.two_j, pt.s);
  return std::sqrt(l.two_j + 1.0) * std::polar(1.0, l.p * pt.phi) *
         D(m_index(l.two_j, l.two_m), m_index(l.two_j, l.two_n));
}

cplx pw_evaluate(const PWBasis& basis, const Eigen::VectorXcd& coeffs, const U2Point& pt) {
  std::map<int, Eigen::MatrixXcd> dcache;
  cplx acc = 0.0;
  for (int i = 0; i < basis.dim(); ++i) {
    const PWLabel& l = basis.label(i);
    auto it = dcache.find(l.two_j);
    if (it == dcache.end()) it = dcache.emplace(l.two_j, wigner_d_matrix(l.two_j, pt.s)).first;
    acc += coeffs(i) * std::sqrt(l.two_j + 1.0) * std::polar(1.0, l.p * pt.phi) *
           it->second(m_index(l.two_j, l.two_m), m_index(l.two_j, l.two_n));
  }
  return acc;
}

PeterWeylState coherent_packet(const Unitary2& u0, double tau, const PWBasis& basis) {
  if (!(tau > 0.0)) throw std::invalid_argument("coherent_packet: tau <= 0");
  const U2Point pt0 = u2_decompose(u0);
  std::map<int, Eigen::MatrixXcd> dcache;
  PeterWeylState st;
  st.coeffs.resize(basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    const PWLabel& l = basis.label(i);
    auto it = dcache.find(l.two_j);
    if (it == dcache.end())
      it = dcache.emplace(l.two_j, wigner_d_matrix(l.two_j, pt0.s)).first;
    const cplx y0 = std::sqrt(l.two_j + 1.0) * std::polar(1.0, l.p * pt0.phi) *
                    it->second(m_index(l.two_j, l.two_m), m_index(l.two_j, l.two_n));
    st.coeffs(i) = std::exp(-tau * casimir(l.p, l.two_j)) * std::conj(y0);
  }
  st.coeffs.normalize();
  double shell = 0.0;
  for (int i = 0; i < basis.dim(); ++i) {
    if (!basis.interior(basis.label(i))) shell += std::norm(st.coeffs(i));
  }
  st.boundary_shell_weight = shell;
  st.truncation_warning = shell > 0.01;
  return st;
}

std::vector<QuadNode> u2_quadrature(int p_max, int two_j_max) {
  const int n_phi = p_max + 1;
  const int n_alpha = two_j_max + 2;
  const int n_beta = two_j_max + 2;
  const int n_gamma = 2 * two_j_max + 2;
  std::vector<double> bx, bw;
  gauss_legendre(n_beta, bx, bw);

  std::vector<QuadNode> nodes;
  nodes.reserve(static_cast<size_t>(n_phi) * n_alpha * n_beta * n_gamma);
  for (int ip = 0; ip < n_phi; ++ip) {
    // Half range: the Z2 identification (phi, s) ~ (phi + pi, -s).
    const double phi = kPi * ip / n_phi;
    for (int ia = 0; ia < n_alpha; ++ia) {
      const double alpha = 2.0 * kPi * ia / n_alpha;
      for (int ib = 0; ib < n_beta; ++ib) {
        const double beta = std::acos(bx[ib]);
        for (int ig = 0; ig < n_gamma; ++ig) {
          const double gamma = 4.0 * kPi * ig / n_gamma;
          QuadNode n;
          n.alpha = alpha;
          n.beta = beta;
          n.gamma = gamma;
          n.pt.phi = phi;
          n.pt.s = su2_from_euler(alpha, beta, gamma);
          n.weight = (1.0 / n_phi) * (1.0 / n_alpha) * (0.5 * bw[ib]) * (1.0 / n_gamma);
          nodes.push_back(n);
        }
      }
    }
  }
  return nodes;
}

double u2_distance(const Mat2& a, const Mat2& b) {
  const Mat2 m = a.adjoint() * b;
  // Eigenvalues of a 2x2 from trace and determinant.
  const cplx tr = m(0, 0) + m(1, 1);
  const cplx disc = std::sqrt(tr * tr - 4.0 * m.determinant());
  const double t1 = std::arg(0.5 * (tr + disc));
  const double t2 = std::arg(0.5 * (tr - disc));
  return std::sqrt(t1 * t1 + t2 * t2);
}

TopologyDistribution topology_distribution(const PWBasis& basis, const PeterWeylState& state,
                                           double delta, const std::vector<QuadNode>& quad) {
  const Mat2 ua = Unitary2::swap().matrix();
  const Mat2 ub = Mat2::Identity();
  if (!(delta > 0.0)) throw std::invalid_argument("topology_distribution: delta <= 0");
  if (2.0 * delta >= u2_distance(ua, ub))
    throw std::invalid_argument("topology_distribution: balls overlap at this delta");

  NodeEvaluator ev(basis);
  Eigen::VectorXcd y;
  TopologyDistribution td;
  for (const QuadNode& n : quad) {
    const Mat2 u = n.pt.matrix();
    const bool in_a = u2_distance(ua, u) <= delta;
    const bool in_b = !in_a && u2_distance(ub, u) <= delta;
    if (!in_a && !in_b) continue;
    ev.values(n, y);
    const double mass = n.weight * std::norm(cplx(y.transpose() * state.coeffs));
    (in_a ? td.P_a : td.P_b) += mass;
  }
  td.P_other = 1.0 - td.P_a - td.P_b;
  return td;
}

Eigen::MatrixXcd multiplication_operator(const PWBasis& basis,
                                         const std::vector<QuadNode>& quad,
                                         const std::function<double(const U2Point&)>& f) {
  NodeEvaluator ev(basis);
  Eigen::VectorXcd y;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
  for (const QuadNode& n : quad) {
    ev.values(n, y);
    M.noalias() += (n.weight * f(n.pt)) * (y.conjugate() * y.transpose());
  }
  return M;
}

double particle_energy(const Unitary2& u, int n) {
  if (n < 0) throw std::invalid_argument("particle_energy: n < 0");
  double lambda_max = 1.0;
  for (int guard = 0; guard < 12; ++guard) {
    const auto ev = expand_eigenvalues(analytic_spectrum(u, lambda_max));
    if (static_cast<int>(ev.size()) > n) return ev[n];
    lambda_max *= 4.0;
  }
  throw std::runtime_error("particle_energy: level not reached");
}

Eigen::SparseMatrix<cplx> tilt_potential(const PWBasis& basis, const Unitary2& u0, double v) {
  const auto uops = u_operator(basis);
  Eigen::SparseMatrix<cplx> T(basis.dim(), basis.dim());
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      T += std::conj(u0.matrix()(a, b)) * uops[a][b];
    }
  }
  const Eigen::SparseMatrix<cplx> Tad = Eigen::SparseMatrix<cplx>(T.adjoint());
  return Eigen::SparseMatrix<cplx>(-0.5 * v * (T + Tad));
}

namespace {

// One Krylov exponential step: v <- exp(-i t H) v for hermitian H given as a
// matvec. The step is split so each substep sees |t| * hnorm <= 8, where a
// 50-dimensional Krylov space reaches machine precision.
void lanczos_propagate(const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& hmul,
                       double t, double hnorm, Eigen::VectorXcd& v) {
  if (t == 0.0 || v.norm() == 0.0) return;
  const int n = static_cast<int>(v.size());
  const int substeps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * hnorm / 8.0)));
  const double dt = t / substeps;
  // Krylov size from the step angle; the tail of the Bessel expansion drops
  // below machine precision well before 1.5 * theta + 18 terms.
  const double theta = std::abs(dt) * hnorm;
  const int m_max = std::min(n, std::max(12, static_cast<int>(std::ceil(1.5 * theta)) + 18));

  Eigen::MatrixXcd basis(n, m_max);
  Eigen::VectorXd a(m_max), b(m_max);
  Eigen::VectorXcd w(n);
  for (int step = 0; step < substeps; ++step) {
    const double nrm = v.norm();
    basis.col(0) = v / nrm;
    int m = m_max;
    for (int j = 0; j < m_max; ++j) {
      hmul(basis.col(j), w);
      a(j) = std::real(basis.col(j).dot(w));
      w -= a(j) * basis.col(j);
      if (j > 0) w -= b(j - 1) * basis.col(j - 1);
      // Full reorthogonalization keeps the tridiagonal model honest.
      for (int k = 0; k <= j; ++k) w -= basis.col(k).dot(w) * basis.col(k);
      const double beta = w.norm();
      if (j + 1 == m_max || beta < 1e-14 * std::max(1.0, hnorm)) {
        m = j + 1;
        break;
      }
      b(j) = beta;
      basis.col(j + 1) = w / beta;
    }
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      tri(j, j) = a(j);
      if (j + 1 < m) tri(j, j + 1) = tri(j + 1, j) = b(j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    Eigen::VectorXcd small(m);
    for (int j = 0; j < m; ++j)
      small(j) = std::polar(1.0, -dt * es.eigenvalues()(j)) * es.eigenvectors()(0, j);
    v = nrm * (basis.leftCols(m) * (es.eigenvectors().cast<cplx>() * small));
  }
}

}  // namespace

EvolutionTrace evolve(const PWBasis& basis, const PeterWeylState& state,
                      const EvolveOptions& opt, const std::vector<double>& t_grid,
                      const std::vector<QuadNode>& quad) {
  const int dim = basis.dim();
  const Eigen::VectorXd kin = kinetic_diagonal(basis, opt.I);

  double hnorm = kin.cwiseAbs().maxCoeff();
  if (opt.V) {
    if (opt.V->rows() != dim || opt.V->cols() != dim)
      throw std::invalid_argument("evolve: potential size mismatch");
    const Eigen::SparseMatrix<cplx> diff =
        *opt.V - Eigen::SparseMatrix<cplx>(opt.V->adjoint());
    if (diff.norm() > 1e-8 * std::max(1.0, opt.V->norm()))
      throw std::invalid_argument("evolve: potential not hermitian");
    // Gershgorin bound on the potential part.
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(dim);
    for (int k = 0; k < opt.V->outerSize(); ++k)
      for (Eigen::SparseMatrix<cplx>::InnerIterator it(*opt.V, k); it; ++it)
        rowsum(it.row()) += std::abs(it.value());
    hnorm += rowsum.maxCoeff();
  }

  double vscale = 1.0;
  const auto hmul = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
    out = kin.cast<cplx>().cwiseProduct(x);
    if (opt.V) out += vscale * (*opt.V * x);
  };
  const auto ramp_at = [&](double t) {
    return opt.ramp_time > 0.0 ? std::min(1.0, std::max(0.0, t) / opt.ramp_time) : 1.0;
  };

  const auto uops = u_operator(basis);
  const Eigen::SparseMatrix<cplx> tr_op = uops[0][0] + uops[1][1];

  EvolutionTrace trace;
  Eigen::VectorXcd psi = state.coeffs;
  Eigen::VectorXcd hpsi(dim);
  double t_prev = 0.0;
  for (double t : t_grid) {
    if (opt.V) {
      if (t < t_prev)
        throw std::invalid_argument("evolve: time grid must be nondecreasing with a potential");
      // During the ramp the Hamiltonian is held at its midpoint strength over
      // short substeps; afterwards the propagator splits internally.
      while (t_prev < t) {
        double dt = t - t_prev;
        if (t_prev < opt.ramp_time) dt = std::min(dt, opt.ramp_time / 400.0);
        vscale = ramp_at(t_prev + 0.5 * dt);
        lanczos_propagate(hmul, dt, hnorm, psi);
        t_prev += dt;
      }
      t_prev = t;
      vscale = ramp_at(t);
    } else {
      for (int i = 0; i < dim; ++i)
        psi(i) = std::polar(1.0, -kin(i) * t) * state.coeffs(i);
    }

    PeterWeylState snap;
    snap.coeffs = psi;
    const TopologyDistribution td = topology_distribution(basis, snap, opt.delta, quad);

    EvolutionRow row;
    row.t = t;
    row.norm = psi.norm();
    hmul(psi, hpsi);
    row.energy = std::real(psi.dot(hpsi));
    row.P_a = td.P_a;
    row.P_b = td.P_b;
    row.P_other = td.P_other;
    row.tr_u = psi.dot(tr_op * psi);
    trace.rows.push_back(row);
  }
  return trace;
}

}  // namespace qtop
