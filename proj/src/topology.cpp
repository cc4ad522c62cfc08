#include "qtop/topology.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "qtop/selfadjoint.hpp"

namespace qtop {

namespace {

// m-th derivative of the density (psi* chi)_comp at x, by the Leibniz rule
// on the exact mode derivatives.
cplx density_derivative(const TwoIntervalWave& psi, const TwoIntervalWave& chi,
                        int comp, double x, int m) {
  cplx acc = 0.0;
  double binom = 1.0;
  for (int r = 0; r <= m; ++r) {
    acc += binom * std::conj(psi.value(x, r)(comp)) * chi.value(x, m - r)(comp);
    binom = binom * (m - r) / (r + 1.0);
  }
  return acc;
}

std::vector<TwoIntervalWave> make_probes(const Unitary2& u, int n_probes, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TwoIntervalWave> probes;
  probes.reserve(n_probes);
  for (int p = 0; p < n_probes; ++p) probes.push_back(random_domain_wave(u, rng));
  return probes;
}

// Max over probe pairs of |d^m density at (i+1, L) - d^m density at (j+1, 0)|,
// and the magnitude scale of those densities for relative thresholds.
struct PairResidual {
  double residual = 0.0;
  double scale = 0.0;
};

PairResidual density_pair_residual(const std::vector<TwoIntervalWave>& probes, int i,
                                   int j, int m) {
  PairResidual out;
  for (size_t a = 0; a < probes.size(); ++a) {
    for (size_t b = 0; b < probes.size(); ++b) {
      const cplx at_end = density_derivative(probes[a], probes[b], i, kIntervalLength, m);
      const cplx at_start = density_derivative(probes[a], probes[b], j, 0.0, m);
      out.residual = std::max(out.residual, std::abs(at_end - at_start));
      out.scale = std::max({out.scale, std::abs(at_end), std::abs(at_start)});
    }
  }
  return out;
}

std::vector<Gluing> structural_gluings(const Unitary2& u) {
  if (u.is_cross_monomial()) return {{1, 2}, {2, 1}};
  if (u.is_diag_monomial()) return {{1, 1}, {2, 2}};
  return {};
}

TopologyClass class_of(const std::vector<Gluing>& gluings) {
  if (gluings.empty()) return TopologyClass::TwoIntervals;
  return gluings[0].from_interval == gluings[0].to_interval
             ? TopologyClass::TwoCirclesOf2Pi
             : TopologyClass::CircleOf4Pi;
}

bool same_gluings(const std::vector<Gluing>& a, const std::vector<Gluing>& b) {
  if (a.size() != b.size()) return false;
  for (const Gluing& ga : a) {
    bool found = false;
    for (const Gluing& gb : b) {
      if (ga.from_interval == gb.from_interval && ga.to_interval == gb.to_interval)
        found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

std::string to_string(TopologyClass c) {
  switch (c) {
    case TopologyClass::CircleOf4Pi:
      return "CircleOf4Pi";
    case TopologyClass::TwoCirclesOf2Pi:
      return "TwoCirclesOf2Pi";
    default:
      return "TwoIntervals";
  }
}

Eigen::Matrix2d density_endpoint_matrix(const Unitary2& u, int n_probes, uint64_t seed) {
  if (n_probes < 4) throw std::invalid_argument("density_endpoint_matrix: n_probes < 4");
  const auto probes = make_probes(u, n_probes, seed);
  Eigen::Matrix2d r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r(i, j) = density_pair_residual(probes, i, j, 0).residual;
    }
  }
  return r;
}

TopologyReport classify(const Unitary2& u, double tol, int n_probes, uint64_t seed) {
  if (!(tol > 0.0 && tol <= 1e-3)) throw std::invalid_argument("classify: tol out of range");
  const Eigen::Matrix2d r = density_endpoint_matrix(u, n_probes, seed);

  TopologyReport rep;
  rep.unmatched_min_residual = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (r(i, j) < tol) {
        rep.gluings.push_back({i + 1, j + 1});
        rep.matched_max_residual = std::max(rep.matched_max_residual, r(i, j));
      } else {
        rep.unmatched_min_residual = std::min(rep.unmatched_min_residual, r(i, j));
      }
    }
  }
  rep.cls = class_of(rep.gluings);

  // A clean classification separates matched from unmatched residuals by a
  // wide margin; anything tighter is flagged, not silently resolved.
  if (!rep.gluings.empty() && rep.gluings.size() != 4) {
    const double floor = std::max(rep.matched_max_residual, tol * 1e-3);
    if (rep.unmatched_min_residual < 1e3 * floor) rep.ambiguous = true;
  }

  const auto structural = structural_gluings(u);
  if (!same_gluings(rep.gluings, structural)) {
    throw std::runtime_error(
        "classify: density probing and monomial structure disagree for this matrix");
  }

  if (!rep.gluings.empty()) {
    rep.smoothness_order = smoothness_order(u, 6, n_probes, seed);
    rep.smoothness_all_tested = rep.smoothness_order == 6;
  }
  return rep;
}

int smoothness_order(const Unitary2& u, int K_max, int n_probes, uint64_t seed) {
  if (K_max < 1) throw std::invalid_argument("smoothness_order: K_max < 1");
  if (n_probes < 4) throw std::invalid_argument("smoothness_order: n_probes < 4");
  const auto gluings = structural_gluings(u);
  if (gluings.empty()) return -1;
  const auto probes = make_probes(u, n_probes, seed);
  for (int m = 1; m <= K_max; ++m) {
    for (const Gluing& g : gluings) {
      const PairResidual pr =
          density_pair_residual(probes, g.from_interval - 1, g.to_interval - 1, m);
      if (pr.residual > 1e-8 * (1.0 + pr.scale)) return m - 1;
    }
  }
  return K_max;
}

std::string gluing_graph_dot(const TopologyReport& report) {
  std::ostringstream os;
  os << "graph gluing {\n";
  for (int i = 1; i <= 2; ++i) {
    os << "  \"i" << i << "_0\" [label=\"interval " << i << ", x=0\"];\n";
    os << "  \"i" << i << "_L\" [label=\"interval " << i << ", x=2pi\"];\n";
    os << "  \"i" << i << "_0\" -- \"i" << i << "_L\" [style=bold];\n";
  }
  for (const Gluing& g : report.gluings) {
    os << "  \"i" << g.from_interval << "_L\" -- \"i" << g.to_interval
       << "_0\" [style=dashed];\n";
  }
  os << "  label=\"" << to_string(report.cls) << "\";\n}\n";
  return os.str();
}

}  // namespace qtop
