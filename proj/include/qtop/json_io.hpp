#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qtop/gelfand.hpp"
#include "qtop/quantized_bc.hpp"
#include "qtop/selfadjoint.hpp"
#include "qtop/spectral_geometry.hpp"
#include "qtop/topology.hpp"

namespace qtop {

using json = nlohmann::ordered_json;

// Key-value pairs echoed verbatim into every emitted artifact.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// 17 significant digits, enough to round-trip a double exactly.
std::string format_full(double x);

json matrix_json(const Mat2& m);
json config_json(const ConfigEcho& config);

json symmetry_json(const SymmetryReport& r, const ConfigEcho& config);
json spectrum_json(const SpectrumTable& analytic, const SpectrumTable& secular,
                   const SpectrumComparison& cmp, const ConfigEcho& config);
// One table with a source column discriminating the two solvers.
std::string spectrum_csv(const SpectrumTable& analytic, const SpectrumTable& secular,
                         const ConfigEcho& config);

json topology_json(const TopologyReport& r, const Mat2& u, const ConfigEcho& config);

std::string weyl_csv(const std::vector<double>& eigenvalues, const WeylFit& fit,
                     int n_min, const ConfigEcho& config);
json distance_json(ChartPoint x, ChartPoint y, double dirac, double laplace,
                   const ConfigEcho& config);
// Pairwise geodesic distance table over labelled chart points.
std::string distance_csv(const std::vector<std::string>& labels,
                         const Eigen::MatrixXd& dist, const ConfigEcho& config);
std::string depth_csv(const std::vector<int>& grids,
                      const std::vector<std::vector<double>>& residuals,
                      const ConfigEcho& config);
std::string roughening_csv(const RougheningReport& r, const ConfigEcho& config);

std::string character_csv(const CharacterSet& s, const ConfigEcho& config);
json fuzzy_json(const FuzzyTorus& f, const ConfigEcho& config);

std::string evolution_csv(const EvolutionTrace& tr, const ConfigEcho& config);

// Write-to-temp-then-rename; partial files never appear under the final name.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const json& j);

}  // namespace qtop
