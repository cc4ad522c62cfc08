#pragma once

#include <vector>

#include "qtop/core.hpp"

namespace qtop {

struct CommutingFamily {
  std::vector<Eigen::MatrixXcd> mats;  // hermitian, pairwise commuting
  double commutation_tol = 1e-10;
};

struct CharacterPoint {
  std::vector<double> coords;  // one joint eigenvalue per family member
  int multiplicity = 1;
};

struct CharacterSet {
  std::vector<CharacterPoint> points;  // sorted lexicographically
};

// Simultaneous diagonalization by a random generic linear combination, with
// per-vector residual certification and retry on unlucky coefficients.
CharacterSet joint_spectrum(const CommutingFamily& fam, uint64_t seed = 1);

// Max over characters x and family members a of |x(p(a)) - p(x(a))| for the
// given polynomial (coefficients low order first).
double gelfand_transform_check(const CommutingFamily& fam,
                               const std::vector<double>& poly, uint64_t seed = 1);

// Same check over n_polys random polynomials of the given degree.
double gelfand_transform_check(const CommutingFamily& fam, int degree, int n_polys,
                               uint64_t seed);

// A K x K unitary with one nonzero entry omega^exps[j] per row j, sitting in
// column perm[j]. Products of these stay in the class, so operator identities
// can be certified in integer arithmetic.
struct MonomialUnitary {
  int K = 0;
  std::vector<int> perm;
  std::vector<int> exps;  // taken mod K

  Eigen::MatrixXcd dense() const;
};

MonomialUnitary monomial_product(const MonomialUnitary& a, const MonomialUnitary& b);
bool monomial_equal_up_to_power(const MonomialUnitary& a, const MonomialUnitary& b,
                                int omega_power);

struct FuzzyTorus {
  int K = 0;
  cplx omega;
  MonomialUnitary u1;  // clock
  MonomialUnitary u2;  // shift
  bool relation_exact = false;  // U1 U2 = omega U2 U1, certified exactly
};

FuzzyTorus fuzzy_torus(int K);

}  // namespace qtop
