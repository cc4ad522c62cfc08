#include "qtop/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qtop {

std::string format_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json matrix_json(const Mat2& m) {
  json rows = json::array();
  for (int i = 0; i < 2; ++i) {
    json row = json::array();
    for (int j = 0; j < 2; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json config_json(const ConfigEcho& config) {
  json c = json::object();
  for (const auto& [k, v] : config) c[k] = v;
  return c;
}

namespace {

std::string echo_lines(const ConfigEcho& config) {
  std::string out;
  for (const auto& [k, v] : config) out += "# " + k + " = " + v + "\n";
  return out;
}

}  // namespace

json symmetry_json(const SymmetryReport& r, const ConfigEcho& config) {
  json j;
  j["config"] = config_json(config);
  j["u"] = matrix_json(r.u);
  j["n_probes"] = r.n_probes;
  j["seed"] = r.seed;
  j["max_residual_in_domain"] = r.max_residual_in_domain;
  j["max_residual_out_domain"] = r.max_residual_out_domain;
  j["median_residual_out_domain"] = r.median_residual_out_domain;
  return j;
}

namespace {

json table_rows(const SpectrumTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json row;
    row["lambda"] = r.lambda;
    row["k"] = r.k;
    row["branch"] = r.branch;
    row["n"] = r.n;
    row["multiplicity"] = r.multiplicity;
    row["residual"] = r.residual;
    rows.push_back(row);
  }
  return rows;
}

void table_csv_rows(std::string& out, const SpectrumTable& t) {
  for (const auto& r : t.rows) {
    out += format_full(r.lambda) + "," + format_full(r.k) + "," +
           std::to_string(r.branch) + "," + std::to_string(r.n) + "," +
           std::to_string(r.multiplicity) + "," + t.source + "," +
           format_full(r.residual) + "\n";
  }
}

}  // namespace

json spectrum_json(const SpectrumTable& analytic, const SpectrumTable& secular,
                   const SpectrumComparison& cmp, const ConfigEcho& config) {
  json j;
  j["config"] = config_json(config);
  j["u"] = matrix_json(analytic.u);
  j["analytic"] = table_rows(analytic);
  j["secular"] = table_rows(secular);
  j["comparison"] = {{"same_count", cmp.same_count},
                     {"max_abs_diff", cmp.max_abs_diff},
                     {"count_analytic", cmp.count_a},
                     {"count_secular", cmp.count_b}};
  return j;
}

std::string spectrum_csv(const SpectrumTable& analytic, const SpectrumTable& secular,
                         const ConfigEcho& config) {
  std::string out = echo_lines(config);
  out += "lambda,k,branch,n,multiplicity,source,residual\n";
  table_csv_rows(out, analytic);
  table_csv_rows(out, secular);
  return out;
}

json topology_json(const TopologyReport& r, const Mat2& u, const ConfigEcho& config) {
  json j;
  j["config"] = config_json(config);
  j["u"] = matrix_json(u);
  j["class"] = to_string(r.cls);
  json gl = json::array();
  for (const auto& g : r.gluings)
    gl.push_back({{"from_interval", g.from_interval}, {"to_interval", g.to_interval}});
  j["gluings"] = gl;
  j["matched_max_residual"] = r.matched_max_residual;
  j["unmatched_min_residual"] = r.unmatched_min_residual;
  j["ambiguous"] = r.ambiguous;
  j["smoothness_order"] = r.smoothness_order;
  j["smoothness_all_tested"] = r.smoothness_all_tested;
  return j;
}

std::string weyl_csv(const std::vector<double>& eigenvalues, const WeylFit& fit,
                     int n_min, const ConfigEcho& config) {
  std::string out = echo_lines(config);
  out += "# d = " + format_full(fit.d) + "\n";
  out += "# slope = " + format_full(fit.slope) + "\n";
  out += "# r2 = " + format_full(fit.r2) + "\n";
  out += "n,lambda,fit_residual\n";
  int n = 0;
  for (double l : eigenvalues) {
    if (l <= 1e-12) continue;
    ++n;
    std::string resid;
    if (n >= n_min) {
      const double pred = fit.slope * std::log(static_cast<double>(n)) + fit.intercept;
      resid = format_full(std::log(l) - pred);
    }
    out += std::to_string(n) + "," + format_full(l) + "," + resid + "\n";
  }
  return out;
}

namespace {

std::string finite_or_inf(double x) {
  return std::isinf(x) ? std::string("inf") : format_full(x);
}

}  // namespace

json distance_json(ChartPoint x, ChartPoint y, double dirac, double laplace,
                   const ConfigEcho& config) {
  json j;
  j["config"] = config_json(config);
  j["x"] = {{"interval", x.interval}, {"coordinate", x.x}};
  j["y"] = {{"interval", y.interval}, {"coordinate", y.x}};
  j["distance_order1"] = finite_or_inf(dirac);
  j["distance_order2"] = finite_or_inf(laplace);
  return j;
}

std::string distance_csv(const std::vector<std::string>& labels,
                         const Eigen::MatrixXd& dist, const ConfigEcho& config) {
  if (dist.rows() != dist.cols() ||
      dist.rows() != static_cast<Eigen::Index>(labels.size()))
    throw std::invalid_argument("distance_csv: label/matrix size mismatch");
  std::string out = echo_lines(config);
  out += "point";
  for (const auto& l : labels) out += "," + l;
  out += "\n";
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    out += labels[i];
    for (Eigen::Index j = 0; j < dist.cols(); ++j) out += "," + finite_or_inf(dist(i, j));
    out += "\n";
  }
  return out;
}

std::string depth_csv(const std::vector<int>& grids,
                      const std::vector<std::vector<double>>& residuals,
                      const ConfigEcho& config) {
  if (grids.size() != residuals.size())
    throw std::invalid_argument("depth_csv: grid/residual size mismatch");
  std::string out = echo_lines(config);
  out += "P,depth,residual\n";
  for (size_t g = 0; g < grids.size(); ++g) {
    for (size_t k = 0; k < residuals[g].size(); ++k) {
      out += std::to_string(grids[g]) + "," + std::to_string(k + 1) + "," +
             format_full(residuals[g][k]) + "\n";
    }
  }
  return out;
}

std::string roughening_csv(const RougheningReport& r, const ConfigEcho& config) {
  std::string out = echo_lines(config);
  out += "# largest_passing = " + std::to_string(r.largest_passing) + "\n";
  out += "order,tail_head_ratio,passes\n";
  for (size_t k = 0; k < r.ratios.size(); ++k) {
    out += std::to_string(k) + "," + format_full(r.ratios[k]) + "," +
           (r.ratios[k] < 0.01 ? "1" : "0") + "\n";
  }
  return out;
}

std::string character_csv(const CharacterSet& s, const ConfigEcho& config) {
  std::string out = echo_lines(config);
  const size_t m = s.points.empty() ? 0 : s.points.front().coords.size();
  for (size_t c = 0; c < m; ++c) out += "coord_" + std::to_string(c + 1) + ",";
  out += "multiplicity\n";
  for (const auto& p : s.points) {
    for (double x : p.coords) out += format_full(x) + ",";
    out += std::to_string(p.multiplicity) + "\n";
  }
  return out;
}

json fuzzy_json(const FuzzyTorus& f, const ConfigEcho& config) {
  json j;
  j["config"] = config_json(config);
  j["K"] = f.K;
  j["omega"] = {f.omega.real(), f.omega.imag()};
  j["relation_exact"] = f.relation_exact;
  const auto mono = [](const MonomialUnitary& m) {
    return json{{"perm", m.perm}, {"exps", m.exps}};
  };
  j["u1"] = mono(f.u1);
  j["u2"] = mono(f.u2);
  return j;
}

std::string evolution_csv(const EvolutionTrace& tr, const ConfigEcho& config) {
  std::string out = echo_lines(config);
  out += "t,norm,energy,P_a,P_b,P_other,Re_tr_u,Im_tr_u\n";
  for (const auto& r : tr.rows) {
    out += format_full(r.t) + "," + format_full(r.norm) + "," + format_full(r.energy) +
           "," + format_full(r.P_a) + "," + format_full(r.P_b) + "," +
           format_full(r.P_other) + "," + format_full(r.tr_u.real()) + "," +
           format_full(r.tr_u.imag()) + "\n";
  }
  return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << text;
    if (!f.good()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace qtop
