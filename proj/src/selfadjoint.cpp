#include "qtop/selfadjoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtop {

namespace {

Vec2 onesided_deriv(const Eigen::MatrixX2cd& s, bool at_end) {
  const int P = static_cast<int>(s.rows());
  const double h = kIntervalLength / (P - 1);
  Vec2 d;
  for (int i = 0; i < 2; ++i) {
    if (!at_end) {
      d(i) = (-25.0 * s(0, i) + 48.0 * s(1, i) - 36.0 * s(2, i) +
              16.0 * s(3, i) - 3.0 * s(4, i)) /
             (12.0 * h);
    } else {
      d(i) = (25.0 * s(P - 1, i) - 48.0 * s(P - 2, i) + 36.0 * s(P - 3, i) -
              16.0 * s(P - 4, i) + 3.0 * s(P - 5, i)) /
             (12.0 * h);
    }
  }
  return d;
}

}  // namespace

BoundaryData boundary_data(const TwoIntervalWave& psi) {
  BoundaryData b;
  if (psi.is_grid()) {
    if (psi.grid_points() < 5) {
      throw std::invalid_argument(
          "boundary_data: grid too coarse for endpoint derivatives (P < 5)");
    }
    const Eigen::MatrixX2cd& s = psi.samples();
    const int P = psi.grid_points();
    b.value0 = s.row(0).transpose();
    b.valueL = s.row(P - 1).transpose();
    b.deriv0 = onesided_deriv(s, false);
    b.derivL = onesided_deriv(s, true);
  } else {
    b.value0 = psi.value(0.0);
    b.valueL = psi.value(kIntervalLength);
    b.deriv0 = psi.value(0.0, 1);
    b.derivL = psi.value(kIntervalLength, 1);
  }
  return b;
}

cplx boundary_form(const TwoIntervalWave& psi, const TwoIntervalWave& chi) {
  const BoundaryData p = boundary_data(psi);
  const BoundaryData c = boundary_data(chi);
  cplx at_L = 0.0, at_0 = 0.0;
  for (int i = 0; i < 2; ++i) {
    at_L += -std::conj(p.valueL(i)) * c.derivL(i) + std::conj(p.derivL(i)) * c.valueL(i);
    at_0 += -std::conj(p.value0(i)) * c.deriv0(i) + std::conj(p.deriv0(i)) * c.value0(i);
  }
  return at_L - at_0;
}

DomainCheck in_domain(const TwoIntervalWave& psi, const Unitary2& u, double tol) {
  const BoundaryData b = boundary_data(psi);
  DomainCheck r;
  r.value_residual = (b.valueL - u.matrix() * b.value0).norm();
  r.deriv_residual = (b.derivL - u.matrix() * b.deriv0).norm();
  r.in_domain = r.value_residual <= tol && r.deriv_residual <= tol;
  return r;
}

ModeTerm domain_mode(const EigenphaseFrame& frame, int branch, int n) {
  const double k = n + frame.alphas[static_cast<size_t>(branch)] / kIntervalLength;
  const Vec2 v = frame.frame.col(branch);
  ModeTerm t;
  t.k = k;
  t.A = v;
  t.B = cplx(0.0, 1.0) * v;  // e^{ikx} = cos(kx) + i sin(kx)
  return t;
}

TwoIntervalWave random_domain_wave(const Unitary2& u, std::mt19937_64& rng,
                                   int n_range) {
  const EigenphaseFrame frame = eigenphases(u);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ModeTerm> ts;
  for (int branch = 0; branch < 2; ++branch) {
    for (int n = -n_range; n <= n_range; ++n) {
      ModeTerm t = domain_mode(frame, branch, n);
      const cplx c(g(rng), g(rng));
      t.A *= c;
      t.B *= c;
      ts.push_back(t);
    }
  }
  return normalized(TwoIntervalWave::modes(std::move(ts), u));
}

TwoIntervalWave random_free_wave(std::mt19937_64& rng, int n_terms) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> kd(0.3, 3.5);
  std::vector<ModeTerm> ts;
  for (int t = 0; t < n_terms; ++t) {
    ModeTerm m;
    m.k = kd(rng);
    for (int i = 0; i < 2; ++i) {
      m.A(i) = cplx(g(rng), g(rng));
      m.B(i) = cplx(g(rng), g(rng));
    }
    ts.push_back(m);
  }
  return normalized(TwoIntervalWave::modes(std::move(ts)));
}

SymmetryReport verify_symmetry(const Unitary2& u, int n_probes,
                               std::uint64_t seed) {
  if (n_probes < 2) throw std::invalid_argument("verify_symmetry: n_probes < 2");
  std::mt19937_64 rng(seed);

  std::vector<TwoIntervalWave> in, out;
  in.reserve(n_probes);
  out.reserve(n_probes);
  for (int p = 0; p < n_probes; ++p) in.push_back(random_domain_wave(u, rng));
  for (int p = 0; p < n_probes; ++p) out.push_back(random_free_wave(rng));

  SymmetryReport rep;
  rep.u = u.matrix();
  rep.n_probes = n_probes;
  rep.seed = seed;

  for (int a = 0; a < n_probes; ++a) {
    for (int b = a; b < n_probes; ++b) {
      rep.max_residual_in_domain =
          std::max(rep.max_residual_in_domain, std::abs(boundary_form(in[a], in[b])));
    }
  }
  std::vector<double> out_vals;
  for (int a = 0; a < n_probes; ++a) {
    for (int b = a; b < n_probes; ++b) {
      out_vals.push_back(std::abs(boundary_form(out[a], out[b])));
    }
  }
  std::sort(out_vals.begin(), out_vals.end());
  rep.max_residual_out_domain = out_vals.back();
  rep.median_residual_out_domain = out_vals[out_vals.size() / 2];
  return rep;
}

}  // namespace qtop
