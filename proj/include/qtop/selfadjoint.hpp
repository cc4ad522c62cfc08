#pragma once

#include "qtop/core.hpp"

namespace qtop {

/// Endpoint traces of a two-interval wave. Mode waves use analytic
/// derivatives; grid waves use one-sided 4th-order stencils (needs P >= 5).
struct BoundaryData {
  Vec2 value0 = Vec2::Zero();   // psi(0)
  Vec2 valueL = Vec2::Zero();   // psi(2pi)
  Vec2 deriv0 = Vec2::Zero();   // psi'(0)
  Vec2 derivL = Vec2::Zero();   // psi'(2pi)
};

BoundaryData boundary_data(const TwoIntervalWave& psi);

// The surface pairing of H = -d^2/dx^2:
//   sum_i [ -conj(psi_i) chi_i' + conj(psi_i') chi_i ] evaluated at 2pi
//   minus the same at 0.
cplx boundary_form(const TwoIntervalWave& psi, const TwoIntervalWave& chi);

struct DomainCheck {
  bool in_domain = false;
  double value_residual = 0.0;  // ||psi(2pi) - u psi(0)||
  double deriv_residual = 0.0;  // ||psi'(2pi) - u psi'(0)||
};

// Membership test for D_u: psi(2pi) = u psi(0) and psi'(2pi) = u psi'(0),
// both within tol. Residuals are always reported.
DomainCheck in_domain(const TwoIntervalWave& psi, const Unitary2& u, double tol);

// Closed-form mode v_j e^{i k x} with k = n + alpha_j/(2 pi); lies in D_u
// exactly by construction. branch is 0 or 1.
ModeTerm domain_mode(const EigenphaseFrame& frame, int branch, int n);

// Random unit-norm superposition of domain modes with |n| <= n_range.
TwoIntervalWave random_domain_wave(const Unitary2& u, std::mt19937_64& rng,
                                   int n_range = 2);

// Random unit-norm wave with no relation to any particular domain.
TwoIntervalWave random_free_wave(std::mt19937_64& rng, int n_terms = 3);

struct SymmetryReport {
  Mat2 u = Mat2::Identity();
  int n_probes = 0;
  std::uint64_t seed = 0;
  double max_residual_in_domain = 0.0;
  double max_residual_out_domain = 0.0;
  double median_residual_out_domain = 0.0;
};

// Empirical check of the symmetry criterion: the boundary form vanishes on
// pairs of random D_u probes, and is generically O(1) on pairs of free waves.
SymmetryReport verify_symmetry(const Unitary2& u, int n_probes,
                               std::uint64_t seed);

}  // namespace qtop
