// qtop: batch driver for the two-interval boundary-condition pipelines.
// Every run is deterministic for a fixed config + seed; outputs are written
// atomically into --out-dir (or $QTOP_OUT_DIR).

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtop/gelfand.hpp"
#include "qtop/json_io.hpp"
#include "qtop/quantized_bc.hpp"
#include "qtop/selfadjoint.hpp"
#include "qtop/spectral_geometry.hpp"
#include "qtop/spectrum.hpp"
#include "qtop/topology.hpp"

namespace fs = std::filesystem;
using namespace qtop;

namespace {

// Exit code contract: 0 ok, 1 numerical acceptance failure, 2 bad input.
struct AcceptanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Unitary2 parse_u(const std::string& spec) {
  if (spec == "u_a" || spec == "swap") return Unitary2::swap();
  if (spec == "u_b" || spec == "identity") return Unitary2::identity();
  if (spec == "rot45") return Unitary2::rotation(kPi / 4.0);
  std::vector<double> vals;
  std::string token;
  std::stringstream ss(spec);
  while (std::getline(ss, token, ',')) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("u entry is not a number: " + token);
    }
    if (used != token.size())
      throw std::invalid_argument("u entry is not a number: " + token);
    vals.push_back(v);
  }
  if (vals.size() != 8)
    throw std::invalid_argument(
        "u must be a named constant (u_a, u_b, rot45) or 8 comma-separated "
        "reals re00,im00,re01,im01,re10,im10,re11,im11");
  Mat2 m;
  m << cplx(vals[0], vals[1]), cplx(vals[2], vals[3]),
       cplx(vals[4], vals[5]), cplx(vals[6], vals[7]);
  return Unitary2(m);  // throws on non-unitary input
}

// Coordinates accept plain numbers and pi multiples: "pi", "2pi", "0.5pi".
double parse_coord(const std::string& spec) {
  const size_t pos = spec.find("pi");
  std::string head = spec.substr(0, pos == std::string::npos ? spec.size() : pos);
  double mult = 1.0;
  if (!head.empty()) {
    size_t used = 0;
    try {
      mult = std::stod(head, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad coordinate: " + spec);
    }
    if (used != head.size()) throw std::invalid_argument("bad coordinate: " + spec);
  } else if (pos == std::string::npos) {
    throw std::invalid_argument("bad coordinate: " + spec);
  }
  if (pos == std::string::npos) return mult;
  if (pos + 2 != spec.size()) throw std::invalid_argument("bad coordinate: " + spec);
  return mult * kPi;
}

struct EvolvePreset {
  int p_max, two_j_max;
  double tau, I, delta, tilt_v, tilt_ramp, t_max;
  int t_steps;
};

// Frozen golden parameters for the three canonical runs.
const EvolvePreset kLocalization{16, 16, 0.05, 500.0, 0.5, 0.0, 0.0, 10.0, 10};
const EvolvePreset kSpreading{16, 16, 0.05, 1.0, 0.5, 0.0, 0.0, 5.0, 5};
const EvolvePreset kTilt{12, 12, 2.0, 5.0, 1.0, 1.0, 60.0, 60.0, 5};

void print_defaults() {
  std::cout << "out-dir = $QTOP_OUT_DIR or .\n"
            << "spectrum: u = u_a, lambda-max = 25, seed = 1, n-probes = 8\n"
            << "classify: u = u_a, tol = 1e-8, n-probes = 8, seed = 1, k-max = 6\n"
            << "geometry weyl: u = u_a, modes = 500, n-min = 20\n"
            << "geometry distance: u = u_a, xi = 1, x = 0, yi = 1, y = 2pi, grid = 512\n"
            << "geometry depth: order = 2, grids = 128,256,512, depth = 3\n"
            << "geometry rough: profile = exp, modes = 1000, k-max = 6\n"
            << "evolve presets (p-max, j2-max, tau, I, delta, tilt-v, tilt-ramp, "
               "t-max, t-steps):\n"
            << "  localization = 16, 16, 0.05, 500, 0.5, off, off, 10, 10\n"
            << "  spreading    = 16, 16, 0.05, 1, 0.5, off, off, 5, 5\n"
            << "  tilt         = 12, 12, 2, 5, 1, 1, 60, 60, 5\n"
            << "evolve: u0 = u_a, tilt-u = u_b\n"
            << "gelfand joint: k = 32, seed = 1\n"
            << "gelfand fuzzy: k = 5\n";
}

fs::path out_file(const std::string& out_dir, const std::string& name) {
  fs::create_directories(out_dir);
  return fs::path(out_dir) / name;
}

int cmd_spectrum(const std::string& u_spec, double lambda_max, uint64_t seed,
                 const std::string& out_dir, const std::string& prefix) {
  const Unitary2 u = parse_u(u_spec);
  if (lambda_max <= 0.0) throw std::invalid_argument("lambda-max must be positive");
  const ConfigEcho config{{"subcommand", "spectrum"},
                          {"u", u_spec},
                          {"lambda_max", format_full(lambda_max)},
                          {"seed", std::to_string(seed)}};

  const SymmetryReport sym = verify_symmetry(u, 8, seed);
  const SpectrumTable analytic = analytic_spectrum(u, lambda_max);
  const SpectrumTable secular = solve_spectrum_numeric(u, lambda_max);
  const SpectrumComparison cmp = compare_spectra(analytic, secular);

  json j = spectrum_json(analytic, secular, cmp, config);
  j["symmetry"] = symmetry_json(sym, config);
  j["negative_spectrum_empty"] = negative_spectrum_empty(u);
  write_json_atomic(out_file(out_dir, prefix + ".json"), j);
  write_text_atomic(out_file(out_dir, prefix + ".csv"),
                    spectrum_csv(analytic, secular, config));

  if (sym.max_residual_in_domain > 1e-9)
    throw AcceptanceError("boundary form does not vanish on domain probes");
  if (!cmp.same_count || cmp.max_abs_diff > 1e-9)
    throw AcceptanceError("analytic and secular spectra disagree");
  return 0;
}

int cmd_classify(const std::string& u_spec, double tol, int n_probes, uint64_t seed,
                 int k_max, const std::string& out_dir, const std::string& prefix) {
  const Unitary2 u = parse_u(u_spec);
  const ConfigEcho config{{"subcommand", "classify"},
                          {"u", u_spec},
                          {"tol", format_full(tol)},
                          {"n_probes", std::to_string(n_probes)},
                          {"seed", std::to_string(seed)},
                          {"k_max", std::to_string(k_max)}};
  TopologyReport rep = classify(u, tol, n_probes, seed);
  if (!rep.gluings.empty()) {
    rep.smoothness_order = smoothness_order(u, k_max, n_probes, seed);
    rep.smoothness_all_tested = rep.smoothness_order == k_max;
  }
  write_json_atomic(out_file(out_dir, prefix + ".json"),
                    topology_json(rep, u.matrix(), config));
  write_text_atomic(out_file(out_dir, prefix + ".dot"), gluing_graph_dot(rep));
  return 0;
}

int cmd_weyl(const std::string& u_spec, int modes, int n_min,
             const std::string& out_dir, const std::string& prefix) {
  const Unitary2 u = parse_u(u_spec);
  if (modes < n_min + 50) throw std::invalid_argument("need modes >= n-min + 50");
  double lambda_max = std::pow(modes / 4.0, 2.0);
  std::vector<double> lam;
  for (int guard = 0; guard < 20; ++guard) {
    lam = expand_eigenvalues(analytic_spectrum(u, lambda_max));
    int positive = 0;
    for (double l : lam)
      if (l > 1e-12) ++positive;
    if (positive >= modes) break;
    lambda_max *= 1.5;
  }
  std::vector<double> kept;
  for (double l : lam) {
    if (l > 1e-12) kept.push_back(l);
    if (static_cast<int>(kept.size()) == modes) break;
  }
  const WeylFit fit = weyl_dimension(kept, 2, n_min);
  const ConfigEcho config{{"subcommand", "geometry weyl"},
                          {"u", u_spec},
                          {"modes", std::to_string(modes)},
                          {"n_min", std::to_string(n_min)}};
  write_text_atomic(out_file(out_dir, prefix + ".csv"),
                    weyl_csv(kept, fit, n_min, config));
  json j;
  j["config"] = config_json(config);
  j["d"] = fit.d;
  j["slope"] = fit.slope;
  j["r2"] = fit.r2;
  write_json_atomic(out_file(out_dir, prefix + ".json"), j);
  if (std::abs(fit.d - 1.0) > 0.05)
    throw AcceptanceError("spectral dimension is not 1 within 5%");
  return 0;
}

int cmd_distance(const std::string& u_spec, int xi, const std::string& xs, int yi,
                 const std::string& ys, int P, const std::string& out_dir,
                 const std::string& prefix) {
  const Unitary2 u = parse_u(u_spec);
  const ChartPoint x{xi, parse_coord(xs)};
  const ChartPoint y{yi, parse_coord(ys)};
  const TopologyReport chart = classify(u);
  double dirac = 0.0, laplace = 0.0;
  try {
    dirac = connes_distance_dirac(chart, x, y, P, true);
    laplace = connes_distance_laplace(chart, x, y, P, true);
  } catch (const std::runtime_error& e) {
    throw AcceptanceError(std::string("distance cross-validation failed: ") + e.what());
  }
  const ConfigEcho config{{"subcommand", "geometry distance"},
                          {"u", u_spec},
                          {"x", std::to_string(xi) + ":" + xs},
                          {"y", std::to_string(yi) + ":" + ys},
                          {"grid", std::to_string(P)}};
  write_json_atomic(out_file(out_dir, prefix + ".json"),
                    distance_json(x, y, dirac, laplace, config));

  const std::vector<std::string> labels{"1:0", "1:pi", "1:2pi", "2:0", "2:pi", "2:2pi"};
  const std::vector<ChartPoint> pts{{1, 0.0},       {1, kPi}, {1, 2.0 * kPi},
                                    {2, 0.0},       {2, kPi}, {2, 2.0 * kPi}};
  Eigen::MatrixXd dist(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      dist(i, j) = connes_distance_dirac(chart, pts[i], pts[j], P, false);
  write_text_atomic(out_file(out_dir, prefix + ".csv"),
                    distance_csv(labels, dist, config));
  return 0;
}

int cmd_depth(int order, const std::vector<int>& grids, int depth,
              const std::string& out_dir, const std::string& prefix) {
  if (order != 1 && order != 2) throw std::invalid_argument("order must be 1 or 2");
  if (grids.size() < 2) throw std::invalid_argument("need at least two grid sizes");
  const double L = kIntervalLength;
  std::vector<std::vector<double>> residuals;
  for (int P : grids) {
    if (P < 8) throw std::invalid_argument("grid size too small");
    const DiscretizedOperator op =
        order == 2 ? laplacian_operator(L, P) : momentum_operator(L, P);
    Eigen::VectorXd f(P);
    for (int i = 0; i < P; ++i) f(i) = std::sin(L * i / P);
    residuals.push_back(
        commutator_depth_residuals(op, std::vector<Eigen::VectorXd>(depth, f), depth));
  }
  ConfigEcho config{{"subcommand", "geometry depth"},
                    {"order", std::to_string(order)},
                    {"depth", std::to_string(depth)}};
  std::string gl;
  for (int P : grids) gl += (gl.empty() ? "" : ",") + std::to_string(P);
  config.emplace_back("grids", gl);
  write_text_atomic(out_file(out_dir, prefix + ".csv"),
                    depth_csv(grids, residuals, config));
  return 0;
}

int cmd_rough(const std::string& profile, int modes, int k_max,
              const std::string& out_dir, const std::string& prefix) {
  std::vector<double> omega;
  std::vector<cplx> b;
  for (int n = 1; n <= modes; ++n) {
    const double w = std::sqrt(static_cast<double>(n));
    omega.push_back(w);
    if (profile == "exp")
      b.push_back(std::exp(-w));
    else if (profile == "power2")
      b.push_back(1.0 / (w * w));
    else if (profile == "power4")
      b.push_back(1.0 / (w * w * w * w));
    else
      throw std::invalid_argument("profile must be exp, power2 or power4");
  }
  const RougheningReport rep = roughening_truncation(omega, b, k_max);
  const ConfigEcho config{{"subcommand", "geometry rough"},
                          {"profile", profile},
                          {"modes", std::to_string(modes)},
                          {"k_max", std::to_string(k_max)}};
  write_text_atomic(out_file(out_dir, prefix + ".csv"), roughening_csv(rep, config));
  return 0;
}

int cmd_evolve(const EvolvePreset& p, const std::string& preset_name,
               const std::string& u0_spec, const std::string& tilt_spec,
               const std::string& out_dir, const std::string& prefix) {
  const Unitary2 u0 = parse_u(u0_spec);
  const PWBasis basis(p.p_max, p.two_j_max);
  const auto quad = u2_quadrature(p.p_max, p.two_j_max);
  const PeterWeylState state = coherent_packet(u0, p.tau, basis);

  EvolveOptions opt;
  opt.I = p.I;
  opt.delta = p.delta;
  if (p.tilt_v != 0.0) {
    opt.V = tilt_potential(basis, parse_u(tilt_spec), p.tilt_v);
    opt.ramp_time = p.tilt_ramp;
  }
  std::vector<double> ts;
  for (int i = 0; i <= p.t_steps; ++i) ts.push_back(p.t_max * i / p.t_steps);
  const EvolutionTrace trace = evolve(basis, state, opt, ts, quad);

  const ConfigEcho config{{"subcommand", "evolve"},
                          {"preset", preset_name},
                          {"u0", u0_spec},
                          {"p_max", std::to_string(p.p_max)},
                          {"two_j_max", std::to_string(p.two_j_max)},
                          {"tau", format_full(p.tau)},
                          {"I", format_full(p.I)},
                          {"delta", format_full(p.delta)},
                          {"tilt_u", p.tilt_v != 0.0 ? tilt_spec : "off"},
                          {"tilt_v", format_full(p.tilt_v)},
                          {"tilt_ramp", format_full(p.tilt_ramp)},
                          {"t_max", format_full(p.t_max)},
                          {"t_steps", std::to_string(p.t_steps)}};
  write_text_atomic(out_file(out_dir, prefix + ".csv"), evolution_csv(trace, config));

  double pa_min = 1.0, pb_max = 0.0, norm_dev = 0.0, energy_dev = 0.0;
  for (const auto& r : trace.rows) {
    pa_min = std::min(pa_min, r.P_a);
    pb_max = std::max(pb_max, r.P_b);
    norm_dev = std::max(norm_dev, std::abs(r.norm - 1.0));
    if (!opt.V) energy_dev = std::max(energy_dev, std::abs(r.energy - trace.rows[0].energy));
  }
  json j;
  j["config"] = config_json(config);
  j["boundary_shell_weight"] = state.boundary_shell_weight;
  j["truncation_warning"] = state.truncation_warning;
  j["P_a_initial"] = trace.rows.front().P_a;
  j["P_a_min"] = pa_min;
  j["P_a_final"] = trace.rows.back().P_a;
  j["P_b_initial"] = trace.rows.front().P_b;
  j["P_b_max"] = pb_max;
  j["max_norm_deviation"] = norm_dev;
  if (!opt.V) j["max_energy_drift"] = energy_dev;
  write_json_atomic(out_file(out_dir, prefix + ".json"), j);

  if (norm_dev > 1e-10) throw AcceptanceError("norm not conserved");
  if (!opt.V && energy_dev > 1e-8 * std::max(1.0, std::abs(trace.rows[0].energy)))
    throw AcceptanceError("energy not conserved");
  return 0;
}

int cmd_gelfand_joint(int K, const std::string& diag_spec, uint64_t seed,
                      const std::string& out_dir, const std::string& prefix) {
  CommutingFamily fam;
  ConfigEcho config{{"subcommand", "gelfand joint"}, {"seed", std::to_string(seed)}};
  bool circle = diag_spec.empty();
  if (circle) {
    if (K < 2) throw std::invalid_argument("k must be >= 2");
    config.emplace_back("k", std::to_string(K));
    Eigen::MatrixXcd clock = Eigen::MatrixXcd::Zero(K, K);
    for (int j = 0; j < K; ++j) clock(j, j) = std::polar(1.0, 2.0 * kPi * j / K);
    fam.mats.push_back(0.5 * (clock + clock.adjoint()));
    fam.mats.push_back(cplx(0.0, -0.5) * (clock - clock.adjoint()));
  } else {
    config.emplace_back("diag", diag_spec);
    std::vector<double> vals;
    std::stringstream ss(diag_spec);
    std::string token;
    while (std::getline(ss, token, ',')) vals.push_back(std::stod(token));
    if (vals.empty()) throw std::invalid_argument("empty diagonal");
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(vals.size(), vals.size());
    for (size_t i = 0; i < vals.size(); ++i) d(i, i) = vals[i];
    fam.mats.push_back(d);
  }
  const CharacterSet set = joint_spectrum(fam, seed);
  write_text_atomic(out_file(out_dir, prefix + ".csv"), character_csv(set, config));
  if (circle) {
    if (static_cast<int>(set.points.size()) != K)
      throw AcceptanceError("expected one character per clock eigenvalue");
    for (const auto& pt : set.points) {
      const double r = std::hypot(pt.coords[0], pt.coords[1]);
      if (std::abs(r - 1.0) > 1e-10)
        throw AcceptanceError("character off the unit circle");
    }
  }
  return 0;
}

int cmd_gelfand_fuzzy(int K, const std::string& out_dir, const std::string& prefix) {
  const FuzzyTorus torus = fuzzy_torus(K);
  const ConfigEcho config{{"subcommand", "gelfand fuzzy"}, {"k", std::to_string(K)}};
  write_json_atomic(out_file(out_dir, prefix + ".json"), fuzzy_json(torus, config));
  if (!torus.relation_exact) throw AcceptanceError("clock-shift relation not exact");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-interval boundary-condition toolkit"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // app-level flags are accepted after a subcommand too

  const char* env_dir = std::getenv("QTOP_OUT_DIR");
  std::string out_dir = env_dir ? env_dir : ".";
  app.add_option("--out-dir", out_dir, "output directory");
  bool show_defaults = false;
  app.add_flag("--show-defaults", show_defaults, "print all defaults and exit");

  std::string u_spec = "u_a";
  uint64_t seed = 1;

  auto* sp = app.add_subcommand("spectrum", "dual-solver eigenvalue table");
  double lambda_max = 25.0;
  std::string sp_prefix = "spectrum";
  sp->add_option("--u", u_spec, "boundary unitary");
  sp->add_option("--lambda-max", lambda_max, "eigenvalue ceiling");
  sp->add_option("--seed", seed, "probe seed");
  sp->add_option("--prefix", sp_prefix, "output basename");

  auto* cl = app.add_subcommand("classify", "topology of the glued configuration space");
  double tol = 1e-8;
  int n_probes = 8;
  int k_max = 6;
  std::string cl_prefix = "classify";
  cl->add_option("--u", u_spec, "boundary unitary");
  cl->add_option("--tol", tol, "residual tolerance");
  cl->add_option("--n-probes", n_probes, "density probe count");
  cl->add_option("--seed", seed, "probe seed");
  cl->add_option("--k-max", k_max, "smoothness orders to test");
  cl->add_option("--prefix", cl_prefix, "output basename");

  auto* ge = app.add_subcommand("geometry", "spectral-geometry pipelines");
  ge->require_subcommand(1);

  auto* we = ge->add_subcommand("weyl", "dimension from eigenvalue growth");
  int modes = 500, n_min = 20;
  std::string we_prefix = "weyl";
  we->add_option("--u", u_spec, "boundary unitary");
  we->add_option("--modes", modes, "eigenvalues to fit");
  we->add_option("--n-min", n_min, "first fitted index");
  we->add_option("--prefix", we_prefix, "output basename");

  auto* di = ge->add_subcommand("distance", "sup-over-Lipschitz distance on the chart");
  int xi = 1, yi = 1, P = 512;
  std::string xs = "0", ys = "2pi", di_prefix = "distance";
  di->add_option("--u", u_spec, "boundary unitary");
  di->add_option("--xi", xi, "interval of x");
  di->add_option("--x", xs, "coordinate of x (accepts pi multiples)");
  di->add_option("--yi", yi, "interval of y");
  di->add_option("--y", ys, "coordinate of y");
  di->add_option("--grid", P, "grid points per chart");
  di->add_option("--prefix", di_prefix, "output basename");

  auto* de = ge->add_subcommand("depth", "nested-commutator residual table");
  int order = 2, depth = 3;
  std::vector<int> grids{128, 256, 512};
  std::string de_prefix = "depth";
  de->add_option("--order", order, "operator order (1 or 2)");
  de->add_option("--depth", depth, "commutator depth");
  de->add_option("--grids", grids, "comma-separated grid sizes")->delimiter(',');
  de->add_option("--prefix", de_prefix, "output basename");

  auto* ro = ge->add_subcommand("rough", "coefficient-decay truncation report");
  std::string profile = "exp";
  int r_modes = 1000, r_kmax = 6;
  std::string ro_prefix = "rough";
  ro->add_option("--profile", profile, "exp, power2 or power4");
  ro->add_option("--modes", r_modes, "mode count");
  ro->add_option("--k-max", r_kmax, "largest order tested");
  ro->add_option("--prefix", ro_prefix, "output basename");

  auto* ev = app.add_subcommand("evolve", "packet evolution over boundary conditions");
  std::string preset = "localization", u0_spec = "u_a", tilt_spec = "u_b";
  std::string ev_prefix = "evolve";
  EvolvePreset evp{};
  auto* o_pmax = ev->add_option("--p-max", evp.p_max, "charge cutoff");
  auto* o_jmax = ev->add_option("--j2-max", evp.two_j_max, "doubled-spin cutoff");
  auto* o_tau = ev->add_option("--tau", evp.tau, "packet width parameter");
  auto* o_I = ev->add_option("--I", evp.I, "moment of inertia");
  auto* o_delta = ev->add_option("--delta", evp.delta, "ball radius");
  auto* o_v = ev->add_option("--tilt-v", evp.tilt_v, "tilt strength (0 = off)");
  auto* o_ramp = ev->add_option("--tilt-ramp", evp.tilt_ramp, "tilt ramp time");
  auto* o_tmax = ev->add_option("--t-max", evp.t_max, "final time");
  auto* o_steps = ev->add_option("--t-steps", evp.t_steps, "output intervals");
  ev->add_option("--preset", preset, "localization, spreading or tilt");
  ev->add_option("--u0", u0_spec, "packet center");
  ev->add_option("--tilt-u", tilt_spec, "tilt target");
  ev->add_option("--prefix", ev_prefix, "output basename");

  auto* gf = app.add_subcommand("gelfand", "commutative-algebra character sets");
  gf->require_subcommand(1);
  auto* jo = gf->add_subcommand("joint", "joint spectrum of a commuting family");
  int joint_k = 32;
  std::string diag_spec, jo_prefix = "gelfand_joint";
  jo->add_option("--k", joint_k, "clock-pair dimension");
  jo->add_option("--diag", diag_spec, "comma-separated diagonal instead of the clock pair");
  jo->add_option("--seed", seed, "combination seed");
  jo->add_option("--prefix", jo_prefix, "output basename");
  auto* fu = gf->add_subcommand("fuzzy", "clock-shift torus relation report");
  int fuzzy_k = 5;
  std::string fu_prefix = "gelfand_fuzzy";
  fu->add_option("--k", fuzzy_k, "matrix dimension");
  fu->add_option("--prefix", fu_prefix, "output basename");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (show_defaults) {
      print_defaults();
      return 0;
    }
    if (sp->parsed())
      return cmd_spectrum(u_spec, lambda_max, seed, out_dir, sp_prefix);
    if (cl->parsed())
      return cmd_classify(u_spec, tol, n_probes, seed, k_max, out_dir, cl_prefix);
    if (we->parsed()) return cmd_weyl(u_spec, modes, n_min, out_dir, we_prefix);
    if (di->parsed())
      return cmd_distance(u_spec, xi, xs, yi, ys, P, out_dir, di_prefix);
    if (de->parsed()) return cmd_depth(order, grids, depth, out_dir, de_prefix);
    if (ro->parsed()) return cmd_rough(profile, r_modes, r_kmax, out_dir, ro_prefix);
    if (ev->parsed()) {
      EvolvePreset p;
      if (preset == "localization")
        p = kLocalization;
      else if (preset == "spreading")
        p = kSpreading;
      else if (preset == "tilt")
        p = kTilt;
      else
        throw std::invalid_argument("unknown preset: " + preset);
      if (o_pmax->count()) p.p_max = evp.p_max;
      if (o_jmax->count()) p.two_j_max = evp.two_j_max;
      if (o_tau->count()) p.tau = evp.tau;
      if (o_I->count()) p.I = evp.I;
      if (o_delta->count()) p.delta = evp.delta;
      if (o_v->count()) p.tilt_v = evp.tilt_v;
      if (o_ramp->count()) p.tilt_ramp = evp.tilt_ramp;
      if (o_tmax->count()) p.t_max = evp.t_max;
      if (o_steps->count()) p.t_steps = evp.t_steps;
      if (p.p_max < 1 || p.two_j_max < 1 || p.tau <= 0.0 || p.I <= 0.0 ||
          p.delta <= 0.0 || p.t_steps < 1 || p.t_max < 0.0)
        throw std::invalid_argument("bad evolve parameters");
      return cmd_evolve(p, preset, u0_spec, tilt_spec, out_dir, ev_prefix);
    }
    if (jo->parsed())
      return cmd_gelfand_joint(joint_k, diag_spec, seed, out_dir, jo_prefix);
    if (fu->parsed()) return cmd_gelfand_fuzzy(fuzzy_k, out_dir, fu_prefix);
    std::cerr << app.help();
    return 2;
  } catch (const AcceptanceError& e) {
    std::cerr << "acceptance failure: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
