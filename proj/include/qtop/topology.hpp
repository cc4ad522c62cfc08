#pragma once

#include <string>
#include <vector>

#include "qtop/core.hpp"

namespace qtop {

enum class TopologyClass { CircleOf4Pi, TwoCirclesOf2Pi, TwoIntervals };

std::string to_string(TopologyClass c);

// An identification of the right endpoint of one interval with the left
// endpoint of another: (from, L) glued to (to, 0). Intervals are 1-based.
struct Gluing {
  int from_interval = 0;
  int to_interval = 0;
};

struct TopologyReport {
  TopologyClass cls = TopologyClass::TwoIntervals;
  std::vector<Gluing> gluings;
  double matched_max_residual = 0.0;    // worst residual among glued pairs
  double unmatched_min_residual = 0.0;  // best residual among unglued pairs
  bool ambiguous = false;
  // Highest density-derivative order checked to agree at the glued points;
  // -1 when there are no gluings.
  int smoothness_order = -1;
  bool smoothness_all_tested = false;
};

// Entry (i, j): max over probe pairs (psi, chi) in D_u of
// |(psi* chi)_{i+1}(L) - (psi* chi)_{j+1}(0)|.
Eigen::Matrix2d density_endpoint_matrix(const Unitary2& u, int n_probes, uint64_t seed);

// Classifies by density matching, then cross-checks against the monomial
// structure of u. Disagreement between the two routes throws.
TopologyReport classify(const Unitary2& u, double tol = 1e-8, int n_probes = 8,
                        uint64_t seed = 1);

// Largest derivative order m <= K_max at which matched densities still agree
// at every glued endpoint pair. Returns -1 when nothing is glued.
int smoothness_order(const Unitary2& u, int K_max, int n_probes = 8, uint64_t seed = 1);

// Graphviz rendering of the endpoint identification diagram.
std::string gluing_graph_dot(const TopologyReport& report);

}  // namespace qtop
