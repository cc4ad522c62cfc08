#include "qtop/spectrum.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtop {

namespace {

constexpr double kLambdaMergeTol = 1e-9;

struct KernelInfo {
  int dim = 0;
  double sigma_min = 1.0;
  double sigma_max = 1.0;
  Eigen::Matrix4cd V;  // right singular vectors, kernel columns last
};

KernelInfo kernel_info(const Eigen::Matrix4cd& M, double rel_tol) {
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(M, Eigen::ComputeFullV);
  KernelInfo ki;
  ki.sigma_max = svd.singularValues()(0);
  ki.sigma_min = svd.singularValues()(3);
  // Entries of the matchers are O(1) functions of k, so the threshold keeps
  // an absolute floor: at points where the whole matrix collapses the kernel
  // is the full space, not empty.
  for (int i = 0; i < 4; ++i) {
    if (svd.singularValues()(i) <= rel_tol * std::max(ki.sigma_max, 1.0)) ++ki.dim;
  }
  ki.V = svd.matrixV();
  return ki;
}

void sort_rows(SpectrumTable& t) {
  std::sort(t.rows.begin(), t.rows.end(),
            [](const SpectrumRow& a, const SpectrumRow& b) { return a.lambda < b.lambda; });
}

// Label a numeric row with the closest (branch, n) of the eigenphase formula.
// Metadata only; the eigenvalue itself never touches the eigenphases.
void attach_labels(SpectrumTable& t, const EigenphaseFrame& frame) {
  for (SpectrumRow& r : t.rows) {
    double best = 1e300;
    for (int j = 0; j < 2; ++j) {
      for (int n = -static_cast<int>(r.k) - 2; n <= static_cast<int>(r.k) + 2; ++n) {
        const double kjn = std::abs(n + frame.alphas[j] / kIntervalLength);
        if (std::abs(kjn - r.k) < best) {
          best = std::abs(kjn - r.k);
          r.branch = j + 1;
          r.n = n;
        }
      }
    }
  }
}

}  // namespace

Eigen::Matrix4cd SecularSystem::matcher(double k) const {
  const double c = std::cos(kIntervalLength * k);
  const double s = std::sin(kIntervalLength * k);
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  M.block<2, 2>(0, 0) = c * Mat2::Identity() - u_.matrix();
  M.block<2, 2>(0, 2) = s * Mat2::Identity();
  M.block<2, 2>(2, 0) = -s * Mat2::Identity();
  M.block<2, 2>(2, 2) = c * Mat2::Identity() - u_.matrix();
  return M;
}

Eigen::Matrix4cd SecularSystem::zero_mode_matcher() const {
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  M.block<2, 2>(0, 0) = u_.matrix() - Mat2::Identity();
  M.block<2, 2>(0, 2) = -kIntervalLength * Mat2::Identity();
  M.block<2, 2>(2, 2) = u_.matrix() - Mat2::Identity();
  return M;
}

Eigen::Matrix4cd SecularSystem::negative_matcher(double kappa) const {
  const double ch = std::cosh(kIntervalLength * kappa);
  const double sh = std::sinh(kIntervalLength * kappa);
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  M.block<2, 2>(0, 0) = ch * Mat2::Identity() - u_.matrix();
  M.block<2, 2>(0, 2) = sh * Mat2::Identity();
  M.block<2, 2>(2, 0) = sh * Mat2::Identity();
  M.block<2, 2>(2, 2) = ch * Mat2::Identity() - u_.matrix();
  return M;
}

cplx secular_determinant(const Unitary2& u, double k) {
  return SecularSystem(u).matcher(k).determinant();
}

SpectrumTable analytic_spectrum(const Unitary2& u, double lambda_max) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("analytic_spectrum: lambda_max <= 0");
  const EigenphaseFrame frame = eigenphases(u);
  const double k_max = std::sqrt(lambda_max);

  struct Cand {
    double lambda, k;
    int branch, n;
  };
  std::vector<Cand> cands;
  for (int j = 0; j < 2; ++j) {
    const double off = frame.alphas[j] / kIntervalLength;
    for (int n = -static_cast<int>(std::ceil(k_max + 1)); n <= static_cast<int>(std::ceil(k_max + 1)); ++n) {
      const double k = n + off;
      const double lambda = k * k;
      if (lambda <= lambda_max) cands.push_back({lambda, std::abs(k), j + 1, n});
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.lambda < b.lambda; });

  SpectrumTable t;
  t.source = "analytic";
  t.u = u.matrix();
  for (const Cand& c : cands) {
    if (!t.rows.empty() && std::abs(t.rows.back().lambda - c.lambda) <= kLambdaMergeTol) {
      ++t.rows.back().multiplicity;
    } else {
      SpectrumRow r;
      r.lambda = c.lambda;
      r.k = c.k;
      r.branch = c.branch;
      r.n = c.n;
      r.multiplicity = 1;
      t.rows.push_back(r);
    }
  }
  return t;
}

SpectrumTable solve_spectrum_numeric(const Unitary2& u, double lambda_max,
                                     const SecularOptions& opt) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("solve_spectrum_numeric: lambda_max <= 0");
  const SecularSystem sys(u);
  const double k_max = std::sqrt(lambda_max);
  const cplx det_u = u.matrix().determinant();

  // Real-valued secular function: det M(k) / det(u) is real.
  auto f = [&](double k) { return std::real(sys.matcher(k).determinant() / det_u); };
  auto fprime = [&](double k) {
    const double h = 1e-6;
    return (f(k + h) - f(k - h)) / (2.0 * h);
  };

  SpectrumTable t;
  t.source = "secular";
  t.u = u.matrix();

  // lambda = 0 via the linear ansatz.
  {
    const KernelInfo ki = kernel_info(sys.zero_mode_matcher(), opt.kernel_rel_tol);
    if (ki.dim > 0) {
      SpectrumRow r;
      r.lambda = 0.0;
      r.k = 0.0;
      r.multiplicity = ki.dim;
      r.residual = ki.sigma_min / ki.sigma_max;
      t.rows.push_back(r);
    }
  }

  // Scale of f over the scan range, for acceptance thresholds. The scan
  // extends one step past k_max so boundary roots are still bracketed.
  double fscale = 0.0;
  const double k_lo = 1e-7;
  const double k_hi = k_max + opt.scan_step;
  for (double k = k_lo; k <= k_hi; k += opt.scan_step) fscale = std::max(fscale, std::abs(f(k)));
  fscale = std::max(fscale, 1e-12);

  std::vector<double> roots;
  auto push_root = [&](double k) {
    for (double r : roots) {
      if (std::abs(r - k) < 1e-7) return;
    }
    roots.push_back(k);
  };

  // Odd-order roots: sign changes of f.
  for (const Bracket& b : bracket_roots(f, k_lo, k_hi, opt.scan_step)) {
    push_root(refine_root(f, b.lo, b.hi, 1e-13));
  }
  // Even-order roots: extrema of f where |f| collapses.
  for (const Bracket& b : bracket_roots(fprime, k_lo, k_hi, opt.scan_step)) {
    double ks;
    try {
      ks = refine_root(fprime, b.lo, b.hi, 1e-13);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (std::abs(f(ks)) <= opt.accept_rel_tol * fscale) push_root(ks);
  }
  std::sort(roots.begin(), roots.end());

  for (double k : roots) {
    if (k <= 1e-6) continue;  // the lambda = 0 system owns this
    const KernelInfo ki = kernel_info(sys.matcher(k), opt.kernel_rel_tol);
    SpectrumRow r;
    r.k = k;
    r.lambda = k * k;
    r.multiplicity = std::max(1, ki.dim);
    r.residual = ki.sigma_min / ki.sigma_max;
    r.converged = ki.dim > 0;
    if (r.lambda <= lambda_max + 1e-9) t.rows.push_back(r);
  }
  sort_rows(t);
  attach_labels(t, eigenphases(u));
  return t;
}

bool negative_spectrum_empty(const Unitary2& u, double kappa_max, double step) {
  const SecularSystem sys(u);
  const cplx det_u = u.matrix().determinant();
  // The diagonal blocks of the matcher commute with the off-diagonal ones,
  // so its determinant factors as det(exp(-Lk) I - u) det(exp(Lk) I - u).
  // Pulling exp(2Lk) out of the second factor gives an O(1) function with
  // the same zeros; the raw 4x4 determinant would drown in rounding noise
  // once cosh gets large.
  auto g = [&](double kappa) {
    const double e = std::exp(-kIntervalLength * kappa);
    const Mat2 um = sys.u().matrix();
    const cplx d1 = (e * Mat2::Identity() - um).determinant();
    const cplx d2 = (Mat2::Identity() - e * um).determinant();
    return std::real(d1 * d2 / det_u);
  };
  const double kappa_min = 0.05;  // below this the zero mode takes over
  if (!bracket_roots(g, kappa_min, kappa_max, step).empty()) return false;
  // Tangential roots: any interior minimum of |g| that collapses to zero.
  double prev2 = std::abs(g(kappa_min));
  double prev1 = std::abs(g(kappa_min + step));
  for (double kappa = kappa_min + 2.0 * step; kappa <= kappa_max; kappa += step) {
    const double cur = std::abs(g(kappa));
    if (prev1 < prev2 && prev1 < cur) {
      const double m = minimize_scalar([&](double x) { return std::abs(g(x)); },
                                       kappa - 2.0 * step, kappa, 1e-12);
      if (std::abs(g(m)) <= 1e-10) return false;
    }
    prev2 = prev1;
    prev1 = cur;
  }
  return true;
}

std::vector<TwoIntervalWave> eigenfunctions(const Unitary2& u, const SpectrumRow& row) {
  const SecularSystem sys(u);
  const bool zero = row.lambda <= 1e-12;
  const Eigen::Matrix4cd M = zero ? sys.zero_mode_matcher() : sys.matcher(row.k);
  KernelInfo ki = kernel_info(M, 1e-8);
  if (ki.dim == 0) {
    // Keep the best singular direction; flagged by the caller via residuals.
    ki.dim = 1;
  }
  std::vector<TwoIntervalWave> basis;
  for (int c = 4 - ki.dim; c < 4; ++c) {
    const Eigen::Vector4cd v = ki.V.col(c);
    ModeTerm tm;
    tm.A = Vec2(v(0), v(1));
    tm.B = Vec2(v(2), v(3));
    if (zero) {
      tm.linear = true;
    } else {
      tm.k = row.k;
    }
    TwoIntervalWave w = TwoIntervalWave::mode(tm, u);
    // Gram-Schmidt against the accepted members, then normalize.
    for (const TwoIntervalWave& prev : basis) {
      const cplx ov = inner_product(prev, w);
      std::vector<ModeTerm> ts = w.terms();
      for (const ModeTerm& pt : prev.terms()) {
        ModeTerm neg = pt;
        neg.A *= -ov;
        neg.B *= -ov;
        ts.push_back(neg);
      }
      w = TwoIntervalWave::modes(std::move(ts), u);
    }
    if (l2_norm(w) < 1e-8) continue;
    basis.push_back(normalized(w));
  }
  return basis;
}

TwoIntervalWave eigenfunction(const Unitary2& u, const SpectrumRow& row) {
  auto basis = eigenfunctions(u, row);
  if (basis.empty()) throw std::runtime_error("eigenfunction: empty kernel");
  return basis.front();
}

std::vector<double> expand_eigenvalues(const SpectrumTable& t) {
  std::vector<double> out;
  for (const SpectrumRow& r : t.rows) {
    for (int m = 0; m < r.multiplicity; ++m) out.push_back(r.lambda);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SpectrumComparison compare_spectra(const SpectrumTable& a, const SpectrumTable& b) {
  const std::vector<double> ea = expand_eigenvalues(a);
  const std::vector<double> eb = expand_eigenvalues(b);
  SpectrumComparison c;
  c.count_a = static_cast<int>(ea.size());
  c.count_b = static_cast<int>(eb.size());
  c.same_count = ea.size() == eb.size();
  const size_t n = std::min(ea.size(), eb.size());
  for (size_t i = 0; i < n; ++i) c.max_abs_diff = std::max(c.max_abs_diff, std::abs(ea[i] - eb[i]));
  if (!c.same_count) c.max_abs_diff = std::max(c.max_abs_diff, 1.0);
  return c;
}

}  // namespace qtop
