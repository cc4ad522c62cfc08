#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qtop {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double kPi = std::numbers::pi;
// Each interval is [0, 2*pi]; units fixed so that hbar = 2m = 1.
inline constexpr double kIntervalLength = 2.0 * kPi;

inline constexpr double kUnitarityTol = 1e-12;
inline constexpr double kRootTol = 1e-12;

/// A 2x2 unitary boundary-condition matrix, the model's control parameter.
/// Construction validates unitarity to kUnitarityTol (Frobenius norm of
/// u^dag u - 1).
class Unitary2 {
 public:
  explicit Unitary2(const Mat2& m);

  const Mat2& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  // Off-diagonal phase matrix [[0, e^{i th12}], [e^{i th21}, 0]].
  static Unitary2 swap_phases(double th12, double th21);
  // Diagonal phase matrix diag(e^{i th11}, e^{i th22}).
  static Unitary2 diag_phases(double th11, double th22);
  // Real rotation [[cos t, sin t], [-sin t, cos t]].
  static Unitary2 rotation(double theta);

  static Unitary2 swap() { return swap_phases(0.0, 0.0); }
  static Unitary2 identity() { return diag_phases(0.0, 0.0); }

  // True when exactly one entry per row/column has unit modulus (all others
  // below tol); such matrices are the ones that produce endpoint gluings.
  bool is_monomial(double tol = 1e-10) const;
  // Monomial with the nonzero entries off the diagonal.
  bool is_cross_monomial(double tol = 1e-10) const;
  bool is_diag_monomial(double tol = 1e-10) const;

 private:
  Mat2 m_;
};

Unitary2 haar_unitary2(std::mt19937_64& rng);

/// Eigen-decomposition of a Unitary2: u = V diag(e^{i a1}, e^{i a2}) V^dag
/// with a1 <= a2 in [0, 2*pi).
struct EigenphaseFrame {
  std::array<double, 2> alphas;
  Mat2 frame;
  bool degenerate = false;
};

EigenphaseFrame eigenphases(const Unitary2& u);
Unitary2 from_eigenphases(const EigenphaseFrame& f);

/// One closed-form term of a two-interval wave:
///   psi_i(x) = A_i cos(k x) + B_i sin(k x),      or
///   psi_i(x) = A_i + B_i x                        (linear, for the k=0 case).
struct ModeTerm {
  double k = 0.0;
  Vec2 A = Vec2::Zero();
  Vec2 B = Vec2::Zero();
  bool linear = false;
};

/// A two-component wave function on [0,2pi] u [0,2pi], stored either as a
/// superposition of closed-form mode terms or as grid samples (P points per
/// interval, closed grid including both endpoints).
class TwoIntervalWave {
 public:
  static TwoIntervalWave mode(ModeTerm t, std::optional<Unitary2> tag = {});
  static TwoIntervalWave modes(std::vector<ModeTerm> ts,
                               std::optional<Unitary2> tag = {});
  static TwoIntervalWave grid(Eigen::MatrixX2cd samples,
                              std::optional<Unitary2> tag = {});

  bool is_grid() const { return is_grid_; }
  int grid_points() const { return static_cast<int>(samples_.rows()); }
  const std::vector<ModeTerm>& terms() const { return terms_; }
  const Eigen::MatrixX2cd& samples() const { return samples_; }
  const std::optional<Unitary2>& domain_tag() const { return domain_tag_; }

  // Closed-form evaluation of the order-th derivative at x (modes only).
  Vec2 value(double x, int deriv_order = 0) const;

  // Sample a mode wave onto a closed grid of P points per interval.
  TwoIntervalWave sampled(int P) const;

  TwoIntervalWave scaled(cplx c) const;

 private:
  std::vector<ModeTerm> terms_;
  Eigen::MatrixX2cd samples_;  // P x 2
  bool is_grid_ = false;
  std::optional<Unitary2> domain_tag_;
};

// L^2 scalar product int_0^{2pi} dx sum_i conj(psi_i) chi_i; closed form for
// mode waves, composite Simpson for grids. Throws std::invalid_argument for
// grid waves of mismatched resolution.
cplx inner_product(const TwoIntervalWave& psi, const TwoIntervalWave& chi);
double l2_norm(const TwoIntervalWave& psi);
TwoIntervalWave normalized(const TwoIntervalWave& psi);

/// One distinct eigenvalue of H on D_u.
struct SpectrumRow {
  double lambda = 0.0;
  double k = 0.0;  // lambda = k^2, k >= 0
  int branch = 1;  // eigenphase branch j in {1,2} of the representative k
  int n = 0;       // integer index: k = |n + alpha_j / 2pi|
  int multiplicity = 1;
  double residual = 0.0;
  bool converged = true;
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;
  std::string source;  // "analytic" or "secular"
  Mat2 u = Mat2::Identity();
};

// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& M);

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

// All sign-change intervals of f on [lo, hi] scanned with the given step.
// Roots closer than step may share a bracket. Throws for step <= 0.
std::vector<Bracket> bracket_roots(const std::function<double(double)>& f,
                                   double lo, double hi, double step);

// Bisection refinement of a sign-change bracket to xtol on the abscissa.
double refine_root(const std::function<double(double)>& f, double lo,
                   double hi, double xtol = kRootTol);

// Golden-section minimization of f on [lo, hi] to xtol.
double minimize_scalar(const std::function<double(double)>& f, double lo,
                       double hi, double xtol = kRootTol);

// Closed-form primitives over one interval of length kIntervalLength,
// stable near w = 0. Used by the mode inner products and the spectrum tests.
double integral_cos(double w);    // int_0^L cos(w x) dx
double integral_sin(double w);    // int_0^L sin(w x) dx
double integral_x_cos(double w);  // int_0^L x cos(w x) dx
double integral_x_sin(double w);  // int_0^L x sin(w x) dx

}  // namespace qtop
