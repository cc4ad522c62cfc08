#pragma once

#include "qtop/core.hpp"

namespace qtop {

/// The 4x4 matching problem for H = -d^2/dx^2 on D_u with the ansatz
/// psi_i(x) = A_i cos(kx) + B_i sin(kx). Unknown ordering: (A_1, A_2, B_1, B_2).
class SecularSystem {
 public:
  explicit SecularSystem(const Unitary2& u) : u_(u) {}

  const Unitary2& u() const { return u_; }

  // Rows encode [cos(2 pi k) 1 - u] A + sin(2 pi k) B = 0 and
  //             -sin(2 pi k) A + [cos(2 pi k) 1 - u] B = 0.
  Eigen::Matrix4cd matcher(double k) const;

  // The k = 0 matching problem for the linear ansatz psi_i = A_i + B_i x.
  Eigen::Matrix4cd zero_mode_matcher() const;

  // Matching for lambda = -kappa^2 with the cosh/sinh ansatz; has no kernel
  // for kappa > 0 (checked at runtime by negative_spectrum_empty).
  Eigen::Matrix4cd negative_matcher(double kappa) const;

 private:
  Unitary2 u_;
};

// det of the matcher; satisfies
//   det M(k) = 4 det(u) (cos 2 pi k - cos a1)(cos 2 pi k - cos a2)
// for the eigenphases a_j of u.
cplx secular_determinant(const Unitary2& u, double k);

// Closed-form spectrum: k = n + alpha_j/(2 pi) over all integers n and both
// eigenphase branches, lambda = k^2 <= lambda_max, multiplicities from
// coincidences.
SpectrumTable analytic_spectrum(const Unitary2& u, double lambda_max);

struct SecularOptions {
  double scan_step = 1.0 / 64.0;
  double kernel_rel_tol = 1e-8;   // singular values below this times sigma_max
                                  // count toward the kernel dimension
  double accept_rel_tol = 1e-7;   // |det| acceptance for polished roots
};

// Numerical spectrum from bracketing and polishing roots of the secular
// determinant on [0, sqrt(lambda_max)]; lambda = 0 via the linear ansatz.
SpectrumTable solve_spectrum_numeric(const Unitary2& u, double lambda_max,
                                     const SecularOptions& opt = {});

// True when the cosh-matching system has no kernel on (0, kappa_max]
// (no negative eigenvalues).
bool negative_spectrum_empty(const Unitary2& u, double kappa_max = 5.0,
                             double step = 1.0 / 64.0);

// Orthonormal basis of eigenfunctions for one spectrum row (size equals the
// row multiplicity); every element lies in D_u.
std::vector<TwoIntervalWave> eigenfunctions(const Unitary2& u,
                                            const SpectrumRow& row);
TwoIntervalWave eigenfunction(const Unitary2& u, const SpectrumRow& row);

struct SpectrumComparison {
  bool same_count = false;
  double max_abs_diff = 0.0;  // over multiplicity-expanded sorted eigenvalues
  int count_a = 0;
  int count_b = 0;
};

SpectrumComparison compare_spectra(const SpectrumTable& a, const SpectrumTable& b);

// Multiplicity-expanded nondecreasing eigenvalue list.
std::vector<double> expand_eigenvalues(const SpectrumTable& t);

}  // namespace qtop
