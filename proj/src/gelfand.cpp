#include "qtop/gelfand.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qtop {

namespace {

void validate_family(const CommutingFamily& fam) {
  if (fam.mats.empty()) throw std::invalid_argument("joint_spectrum: empty family");
  const int P = static_cast<int>(fam.mats[0].rows());
  double scale = 0.0;
  for (const auto& m : fam.mats) {
    if (m.rows() != P || m.cols() != P)
      throw std::invalid_argument("joint_spectrum: size mismatch");
    if ((m - m.adjoint()).norm() > 1e-10 * std::max(1.0, m.norm()))
      throw std::invalid_argument("joint_spectrum: non-hermitian member");
    scale = std::max(scale, operator_norm(m));
  }
  for (size_t i = 0; i < fam.mats.size(); ++i) {
    for (size_t j = i + 1; j < fam.mats.size(); ++j) {
      const double c = operator_norm(fam.mats[i] * fam.mats[j] - fam.mats[j] * fam.mats[i]);
      if (c > fam.commutation_tol * std::max(1.0, scale * scale)) {
        throw std::invalid_argument("joint_spectrum: members " + std::to_string(i) +
                                    " and " + std::to_string(j) + " do not commute");
      }
    }
  }
}

}  // namespace

CharacterSet joint_spectrum(const CommutingFamily& fam, uint64_t seed) {
  validate_family(fam);
  const int P = static_cast<int>(fam.mats[0].rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;

  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(P, P);
    for (const auto& m : fam.mats) T += g(rng) * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T);

    bool ok = true;
    std::vector<CharacterPoint> raw;
    for (int c = 0; c < P && ok; ++c) {
      const Eigen::VectorXcd v = es.eigenvectors().col(c);
      CharacterPoint pt;
      for (const auto& m : fam.mats) {
        const double x = std::real(cplx(v.adjoint() * m * v));
        const double resid = (m * v - x * v).norm();
        if (resid > 1e-8 * std::max(1.0, operator_norm(m))) {
          ok = false;
          break;
        }
        pt.coords.push_back(x);
      }
      if (ok) raw.push_back(std::move(pt));
    }
    if (!ok) continue;

    std::sort(raw.begin(), raw.end(), [](const CharacterPoint& a, const CharacterPoint& b) {
      return a.coords < b.coords;
    });
    CharacterSet cs;
    for (auto& pt : raw) {
      bool merged = false;
      if (!cs.points.empty()) {
        merged = true;
        for (size_t k = 0; k < pt.coords.size(); ++k) {
          if (std::abs(cs.points.back().coords[k] - pt.coords[k]) > 1e-7) merged = false;
        }
      }
      if (merged) {
        ++cs.points.back().multiplicity;
      } else {
        cs.points.push_back(std::move(pt));
      }
    }
    return cs;
  }
  throw std::runtime_error("joint_spectrum: no generic combination found");
}

double gelfand_transform_check(const CommutingFamily& fam, const std::vector<double>& poly,
                               uint64_t seed) {
  validate_family(fam);
  const int P = static_cast<int>(fam.mats[0].rows());
  auto p_scalar = [&](double t) {
    double acc = 0.0, tp = 1.0;
    for (double c : poly) {
      acc += c * tp;
      tp *= t;
    }
    return acc;
  };

  // Evaluate p on each member, then read both sides off the joint characters
  // of the extended family {a_i, p(a_i)}.
  double worst = 0.0;
  for (const auto& a : fam.mats) {
    Eigen::MatrixXcd pa = Eigen::MatrixXcd::Zero(P, P);
    Eigen::MatrixXcd ap = Eigen::MatrixXcd::Identity(P, P);
    for (double c : poly) {
      pa += c * ap;
      ap = ap * a;
    }
    CommutingFamily ext;
    ext.mats = {a, pa};
    ext.commutation_tol = std::max(fam.commutation_tol, 1e-9);
    const CharacterSet cs = joint_spectrum(ext, seed);
    for (const auto& pt : cs.points) {
      worst = std::max(worst, std::abs(pt.coords[1] - p_scalar(pt.coords[0])));
    }
  }
  return worst;
}

double gelfand_transform_check(const CommutingFamily& fam, int degree, int n_polys,
                               uint64_t seed) {
  if (degree < 0 || n_polys < 1)
    throw std::invalid_argument("gelfand_transform_check: bad parameters");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < n_polys; ++t) {
    std::vector<double> poly(degree + 1);
    for (double& x : poly) x = c(rng);
    worst = std::max(worst, gelfand_transform_check(fam, poly, rng()));
  }
  return worst;
}

Eigen::MatrixXcd MonomialUnitary::dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(K, K);
  for (int j = 0; j < K; ++j) {
    m(j, perm[j]) = std::polar(1.0, 2.0 * kPi * (exps[j] % K) / K);
  }
  return m;
}

MonomialUnitary monomial_product(const MonomialUnitary& a, const MonomialUnitary& b) {
  if (a.K != b.K) throw std::invalid_argument("monomial_product: size mismatch");
  MonomialUnitary p;
  p.K = a.K;
  p.perm.resize(a.K);
  p.exps.resize(a.K);
  for (int j = 0; j < a.K; ++j) {
    p.perm[j] = b.perm[a.perm[j]];
    p.exps[j] = (a.exps[j] + b.exps[a.perm[j]]) % a.K;
  }
  return p;
}

bool monomial_equal_up_to_power(const MonomialUnitary& a, const MonomialUnitary& b,
                                int omega_power) {
  if (a.K != b.K) return false;
  for (int j = 0; j < a.K; ++j) {
    if (a.perm[j] != b.perm[j]) return false;
    if (((a.exps[j] - b.exps[j] - omega_power) % a.K + a.K) % a.K != 0) return false;
  }
  return true;
}

FuzzyTorus fuzzy_torus(int K) {
  if (K < 2) throw std::invalid_argument("fuzzy_torus: K < 2");
  FuzzyTorus ft;
  ft.K = K;
  ft.omega = std::polar(1.0, 2.0 * kPi / K);
  ft.u1.K = ft.u2.K = K;
  ft.u1.perm.resize(K);
  ft.u1.exps.resize(K);
  ft.u2.perm.resize(K);
  ft.u2.exps.resize(K);
  for (int j = 0; j < K; ++j) {
    ft.u1.perm[j] = j;  // clock
    ft.u1.exps[j] = j;
    ft.u2.perm[j] = (j + K - 1) % K;  // shift
    ft.u2.exps[j] = 0;
  }
  // U1 U2 = omega U2 U1, checked on the integer data, not on floats.
  ft.relation_exact = monomial_equal_up_to_power(monomial_product(ft.u1, ft.u2),
                                                 monomial_product(ft.u2, ft.u1), 1);
  return ft;
}

}  // namespace qtop
