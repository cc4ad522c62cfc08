#include "qtop/core.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace qtop {

namespace {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  if (a >= 2.0 * kPi) a -= 2.0 * kPi;
  return a;
}

// Multiply a column so that its first component of significant modulus is
// real and positive.
void fix_column_phase(Eigen::Ref<Vec2> v) {
  for (int i = 0; i < 2; ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

}  // namespace

Unitary2::Unitary2(const Mat2& m) : m_(m) {
  const double dev = (m.adjoint() * m - Mat2::Identity()).norm();
  if (!(dev <= kUnitarityTol)) {
    throw std::invalid_argument("Unitary2: matrix is not unitary, ||u^t u - 1||_F = " +
                                std::to_string(dev));
  }
}

Unitary2 Unitary2::swap_phases(double th12, double th21) {
  Mat2 m = Mat2::Zero();
  m(0, 1) = std::polar(1.0, th12);
  m(1, 0) = std::polar(1.0, th21);
  return Unitary2(m);
}

Unitary2 Unitary2::diag_phases(double th11, double th22) {
  Mat2 m = Mat2::Zero();
  m(0, 0) = std::polar(1.0, th11);
  m(1, 1) = std::polar(1.0, th22);
  return Unitary2(m);
}

Unitary2 Unitary2::rotation(double theta) {
  Mat2 m;
  m << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  return Unitary2(m);
}

bool Unitary2::is_monomial(double tol) const {
  return is_cross_monomial(tol) || is_diag_monomial(tol);
}

bool Unitary2::is_cross_monomial(double tol) const {
  return std::abs(std::abs(m_(0, 1)) - 1.0) <= tol &&
         std::abs(std::abs(m_(1, 0)) - 1.0) <= tol &&
         std::abs(m_(0, 0)) <= tol && std::abs(m_(1, 1)) <= tol;
}

bool Unitary2::is_diag_monomial(double tol) const {
  return std::abs(std::abs(m_(0, 0)) - 1.0) <= tol &&
         std::abs(std::abs(m_(1, 1)) - 1.0) <= tol &&
         std::abs(m_(0, 1)) <= tol && std::abs(m_(1, 0)) <= tol;
}

Unitary2 haar_unitary2(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat2 z;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) z(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Mat2> qr(z);
  Mat2 q = qr.householderQ();
  Mat2 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) {
    cplx d = r(j, j);
    q.col(j) *= (std::abs(d) > 0.0) ? d / std::abs(d) : cplx(1.0, 0.0);
  }
  // Re-orthogonalize to push the unitarity defect to round-off.
  Mat2 corr = (q.adjoint() * q - Mat2::Identity());
  q = q - 0.5 * q * corr;
  return Unitary2(q);
}

EigenphaseFrame eigenphases(const Unitary2& u) {
  const Mat2& m = u.matrix();
  const Mat2 hc = 0.5 * (m + m.adjoint());
  const Mat2 hs = (m - m.adjoint()) / cplx(0.0, 2.0);

  Eigen::SelfAdjointEigenSolver<Mat2> ec(hc);
  Eigen::SelfAdjointEigenSolver<Mat2> es(hs);
  const double gap_c = std::abs(ec.eigenvalues()(1) - ec.eigenvalues()(0));
  const double gap_s = std::abs(es.eigenvalues()(1) - es.eigenvalues()(0));

  Mat2 v;
  bool degenerate = false;
  if (gap_c >= gap_s && gap_c > 1e-9) {
    v = ec.eigenvectors();
  } else if (gap_s > 1e-9) {
    v = es.eigenvectors();
  } else {
    // u is (numerically) a phase times the identity.
    v = Mat2::Identity();
    degenerate = true;
  }

  std::array<double, 2> alphas;
  for (int j = 0; j < 2; ++j) {
    const Vec2 col = v.col(j);
    const double c = std::real(cplx(col.adjoint() * hc * col));
    const double s = std::real(cplx(col.adjoint() * hs * col));
    alphas[j] = wrap_angle(std::atan2(s, c));
  }

  if (alphas[0] > alphas[1]) {
    std::swap(alphas[0], alphas[1]);
    v.col(0).swap(v.col(1));
  }
  if (degenerate || std::abs(alphas[0] - alphas[1]) < 1e-12) {
    degenerate = true;
    if (std::abs(v(0, 0)) < std::abs(v(0, 1))) v.col(0).swap(v.col(1));
  }
  fix_column_phase(v.col(0));
  fix_column_phase(v.col(1));
  return EigenphaseFrame{alphas, v, degenerate};
}

Unitary2 from_eigenphases(const EigenphaseFrame& f) {
  Mat2 d = Mat2::Zero();
  d(0, 0) = std::polar(1.0, f.alphas[0]);
  d(1, 1) = std::polar(1.0, f.alphas[1]);
  return Unitary2(f.frame * d * f.frame.adjoint());
}

TwoIntervalWave TwoIntervalWave::mode(ModeTerm t, std::optional<Unitary2> tag) {
  return modes(std::vector<ModeTerm>{std::move(t)}, std::move(tag));
}

TwoIntervalWave TwoIntervalWave::modes(std::vector<ModeTerm> ts,
                                       std::optional<Unitary2> tag) {
  TwoIntervalWave w;
  w.terms_ = std::move(ts);
  w.is_grid_ = false;
  w.domain_tag_ = std::move(tag);
  return w;
}

TwoIntervalWave TwoIntervalWave::grid(Eigen::MatrixX2cd samples,
                                      std::optional<Unitary2> tag) {
  if (samples.rows() < 2) {
    throw std::invalid_argument("TwoIntervalWave::grid: need at least 2 points");
  }
  TwoIntervalWave w;
  w.samples_ = std::move(samples);
  w.is_grid_ = true;
  w.domain_tag_ = std::move(tag);
  return w;
}

Vec2 TwoIntervalWave::value(double x, int deriv_order) const {
  if (is_grid_) {
    throw std::invalid_argument(
        "TwoIntervalWave::value: closed-form evaluation requires a mode wave");
  }
  Vec2 out = Vec2::Zero();
  for (const ModeTerm& t : terms_) {
    if (t.linear) {
      if (deriv_order == 0) {
        out += t.A + x * t.B;
      } else if (deriv_order == 1) {
        out += t.B;
      }
      continue;
    }
    // d/dx maps (A, B) -> (kB, -kA).
    Vec2 a = t.A, b = t.B;
    for (int r = 0; r < deriv_order; ++r) {
      Vec2 na = t.k * b;
      Vec2 nb = -t.k * a;
      a = na;
      b = nb;
    }
    out += a * std::cos(t.k * x) + b * std::sin(t.k * x);
  }
  return out;
}

TwoIntervalWave TwoIntervalWave::sampled(int P) const {
  if (is_grid_) {
    if (P == grid_points()) return *this;
    throw std::invalid_argument("TwoIntervalWave::sampled: cannot resample a grid wave");
  }
  Eigen::MatrixX2cd s(P, 2);
  const double dx = kIntervalLength / (P - 1);
  for (int p = 0; p < P; ++p) {
    const Vec2 v = value(p * dx);
    s(p, 0) = v(0);
    s(p, 1) = v(1);
  }
  return grid(std::move(s), domain_tag_);
}

TwoIntervalWave TwoIntervalWave::scaled(cplx c) const {
  if (is_grid_) return grid(c * samples_, domain_tag_);
  std::vector<ModeTerm> ts = terms_;
  for (ModeTerm& t : ts) {
    t.A *= c;
    t.B *= c;
  }
  return modes(std::move(ts), domain_tag_);
}

namespace {

// int_0^L conj(f) g for one pair of mode terms, summed over components.
cplx term_pair_integral(const ModeTerm& f, const ModeTerm& g) {
  const double L = kIntervalLength;
  cplx out = 0.0;
  if (!f.linear && !g.linear) {
    const double cc = 0.5 * (integral_cos(f.k - g.k) + integral_cos(f.k + g.k));
    const double ss = 0.5 * (integral_cos(f.k - g.k) - integral_cos(f.k + g.k));
    const double cs = 0.5 * (integral_sin(g.k + f.k) + integral_sin(g.k - f.k));
    const double sc = 0.5 * (integral_sin(f.k + g.k) + integral_sin(f.k - g.k));
    for (int i = 0; i < 2; ++i) {
      out += std::conj(f.A(i)) * g.A(i) * cc + std::conj(f.A(i)) * g.B(i) * cs +
             std::conj(f.B(i)) * g.A(i) * sc + std::conj(f.B(i)) * g.B(i) * ss;
    }
  } else if (f.linear && g.linear) {
    for (int i = 0; i < 2; ++i) {
      out += std::conj(f.A(i)) * g.A(i) * L +
             (std::conj(f.A(i)) * g.B(i) + std::conj(f.B(i)) * g.A(i)) * L * L / 2.0 +
             std::conj(f.B(i)) * g.B(i) * L * L * L / 3.0;
    }
  } else if (f.linear && !g.linear) {
    for (int i = 0; i < 2; ++i) {
      out += std::conj(f.A(i)) * g.A(i) * integral_cos(g.k) +
             std::conj(f.A(i)) * g.B(i) * integral_sin(g.k) +
             std::conj(f.B(i)) * g.A(i) * integral_x_cos(g.k) +
             std::conj(f.B(i)) * g.B(i) * integral_x_sin(g.k);
    }
  } else {
    out = std::conj(term_pair_integral(g, f));
  }
  return out;
}

cplx grid_inner(const Eigen::MatrixX2cd& a, const Eigen::MatrixX2cd& b) {
  const int P = static_cast<int>(a.rows());
  const double dx = kIntervalLength / (P - 1);
  auto f = [&](int p) -> cplx {
    return std::conj(a(p, 0)) * b(p, 0) + std::conj(a(p, 1)) * b(p, 1);
  };
  // Composite Simpson; Simpson-3/8 tail when the interval count is odd.
  const int intervals = P - 1;
  int simpson_end = (intervals % 2 == 0) ? P - 1 : P - 4;
  cplx acc = 0.0;
  if (simpson_end >= 2) {
    acc += f(0) + f(simpson_end);
    for (int p = 1; p < simpson_end; ++p) acc += (p % 2 == 1 ? 4.0 : 2.0) * f(p);
    acc *= dx / 3.0;
  }
  if (simpson_end < intervals) {
    if (simpson_end < 0) {
      // Too few points for Simpson at all: trapezoid.
      cplx t = 0.5 * (f(0) + f(P - 1));
      for (int p = 1; p < P - 1; ++p) t += f(p);
      return t * dx;
    }
    acc += 3.0 * dx / 8.0 *
           (f(simpson_end) + 3.0 * f(simpson_end + 1) + 3.0 * f(simpson_end + 2) +
            f(simpson_end + 3));
  }
  return acc;
}

}  // namespace

cplx inner_product(const TwoIntervalWave& psi, const TwoIntervalWave& chi) {
  if (!psi.is_grid() && !chi.is_grid()) {
    cplx out = 0.0;
    for (const ModeTerm& f : psi.terms())
      for (const ModeTerm& g : chi.terms()) out += term_pair_integral(f, g);
    return out;
  }
  if (psi.is_grid() && chi.is_grid()) {
    if (psi.grid_points() != chi.grid_points()) {
      throw std::invalid_argument("inner_product: mismatched grid resolutions");
    }
    return grid_inner(psi.samples(), chi.samples());
  }
  if (psi.is_grid()) return grid_inner(psi.samples(), chi.sampled(psi.grid_points()).samples());
  return grid_inner(psi.sampled(chi.grid_points()).samples(), chi.samples());
}

double l2_norm(const TwoIntervalWave& psi) {
  return std::sqrt(std::max(0.0, std::real(inner_product(psi, psi))));
}

TwoIntervalWave normalized(const TwoIntervalWave& psi) {
  const double n = l2_norm(psi);
  if (n <= 0.0) throw std::invalid_argument("normalized: null wave");
  return psi.scaled(1.0 / n);
}

double operator_norm(const Eigen::MatrixXcd& M) {
  if (M.size() == 0) throw std::invalid_argument("operator_norm: empty matrix");
  if (M.rows() <= 32 && M.cols() <= 32) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

std::vector<Bracket> bracket_roots(const std::function<double(double)>& f,
                                   double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("bracket_roots: step must be > 0");
  if (hi < lo) throw std::invalid_argument("bracket_roots: hi < lo");
  std::vector<Bracket> out;
  double x0 = lo;
  double f0 = f(x0);
  while (x0 < hi) {
    const double x1 = std::min(x0 + step, hi);
    const double f1 = f(x1);
    if (f0 == 0.0) {
      out.push_back({std::max(lo, x0 - step), x1});
    } else if (f0 * f1 < 0.0) {
      out.push_back({x0, x1});
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

double refine_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) {
    throw std::invalid_argument("refine_root: no sign change in bracket");
  }
  for (int it = 0; it < 200 && (hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double minimize_scalar(const std::function<double(double)>& f, double lo,
                       double hi, double xtol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 400 && (b - a) > xtol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double integral_cos(double w) {
  const double L = kIntervalLength;
  const double z = w * L;
  if (std::abs(z) < 1e-3) {
    return L * (1.0 - z * z / 6.0 + z * z * z * z / 120.0);
  }
  return std::sin(z) / w;
}

double integral_sin(double w) {
  const double L = kIntervalLength;
  const double z = w * L;
  if (std::abs(z) < 1e-3) {
    return L * z * 0.5 * (1.0 - z * z / 12.0 + z * z * z * z / 360.0);
  }
  return (1.0 - std::cos(z)) / w;
}

double integral_x_cos(double w) {
  const double L = kIntervalLength;
  const double z = w * L;
  if (std::abs(z) < 1e-3) {
    return L * L * (0.5 - z * z / 8.0 + z * z * z * z / 144.0);
  }
  return (std::cos(z) - 1.0) / (w * w) + L * std::sin(z) / w;
}

double integral_x_sin(double w) {
  const double L = kIntervalLength;
  const double z = w * L;
  if (std::abs(z) < 1e-3) {
    return L * L * z * (1.0 / 3.0 - z * z / 30.0 + z * z * z * z / 840.0);
  }
  return std::sin(z) / (w * w) - L * std::cos(z) / w;
}

}  // namespace qtop
