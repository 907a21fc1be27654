#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nhlattice/errors.hpp"
#include "nhlattice/presets.hpp"
#include "nhlattice/spectral.hpp"
#include "run_config.hpp"

namespace nhl::cli {
namespace {

using Applier = std::function<void(RunConfig&)>;

// Options only override the resolved config when they were given explicitly,
// so presets and --config files can be adjusted flag by flag.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  template <class T, class F>
  CLI::Option* option(const std::string& name, const std::string& help, F apply) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app_->add_option(name, *value, help);
    appliers_.push_back([opt, value, apply](RunConfig& cfg) {
      if (opt->count() > 0) apply(cfg, *value);
    });
    return opt;
  }

  template <class F>
  CLI::Option* complex_option(const std::string& name, const std::string& help, F apply) {
    return option<std::string>(name, help + " (a+bi)",
                               [apply](RunConfig& cfg, const std::string& s) { apply(cfg, parse_complex(s)); });
  }

  template <class F>
  CLI::Option* flag(const std::string& name, const std::string& help, F apply) {
    CLI::Option* opt = app_->add_flag(name, help);
    appliers_.push_back([opt, apply](RunConfig& cfg) {
      if (opt->count() > 0) apply(cfg);
    });
    return opt;
  }

  void apply(RunConfig& cfg) const {
    for (const Applier& a : appliers_) a(cfg);
  }

  CLI::App* app() const { return app_; }

 private:
  CLI::App* app_;
  std::vector<Applier> appliers_;
};

struct Subcommand {
  Command command;
  CLI::App* app;
  FlagSet flags;
  std::string config_path;
  bool dump_config = false;
  bool fig2a = false;
  bool fig2b = false;
};

void add_common(Subcommand& s) {
  s.app->add_option("--config", s.config_path, "JSON run config (as written by --dump-config)")
      ->check(CLI::ExistingFile);
  s.app->add_flag("--dump-config", s.dump_config, "print the resolved JSON config and exit");
  s.flags.option<std::string>("-o,--output", "output file (default: stdout)",
                              [](RunConfig& c, const std::string& v) { c.output = v; });
}

void add_lattice(FlagSet& f) {
  f.option<std::string>("--geometry", "infinite, chain or ring", [](RunConfig& c, const std::string& v) {
    c.lattice.geometry = parse_geometry(v);
  });
  f.option<int>("--sites", "number of sites", [](RunConfig& c, int v) { c.lattice.sites = v; });
  f.complex_option("--kappa1", "hopping onto c_{n+1}", [](RunConfig& c, Complex v) { c.lattice.kappa1 = v; });
  f.complex_option("--kappa2", "hopping onto c_{n-1}", [](RunConfig& c, Complex v) { c.lattice.kappa2 = v; });
  f.option<double>("--force", "uniform force F", [](RunConfig& c, double v) { c.lattice.force = v; });
  f.option<long>("--n-min", "first site of the infinite-chain window",
                 [](RunConfig& c, long v) { c.lattice.window.n_min = v; });
  f.option<long>("--n-max", "last site of the infinite-chain window",
                 [](RunConfig& c, long v) { c.lattice.window.n_max = v; });
}

void add_evolve(FlagSet& f) {
  f.option<double>("--t-end", "final time", [](RunConfig& c, double v) { c.evolve.t_end = v; });
  f.option<double>("--dt", "RK4 step", [](RunConfig& c, double v) { c.evolve.dt = v; });
  f.option<std::string>("--method", "rk4 or closed-form", [](RunConfig& c, const std::string& v) {
    Json j = c.evolve;
    j["method"] = v;
    c.evolve = j.get<EvolveConfig>();
  });
  f.option<int>("--record-every", "record every k-th step", [](RunConfig& c, int v) { c.evolve.record_every = v; });
  f.flag("--normalize", "renormalize every step and track the log scale",
         [](RunConfig& c) { c.evolve.normalize = true; });
}

void add_initial(FlagSet& f) {
  f.option<long>("--site", "excite a single site (default: last site)", [](RunConfig& c, long v) {
    c.initial.kind = InitialState::Kind::Site;
    c.initial.site = v;
  });
  f.option<double>("--gaussian-center", "Gaussian initial state centre", [](RunConfig& c, double v) {
    c.initial.kind = InitialState::Kind::Gaussian;
    c.initial.center = v;
  });
  f.option<double>("--gaussian-width", "Gaussian width w in exp[-(n-c)^2/w^2]", [](RunConfig& c, double v) {
    c.initial.kind = InitialState::Kind::Gaussian;
    c.initial.width = v;
  });
}

void add_engineer(FlagSet& f) {
  f.option<double>("--theta", "lumped phase gradient per site", [](RunConfig& c, double v) { c.engineer.theta = v; });
  f.option<double>("--x", "duty fraction T1/T", [](RunConfig& c, double v) { c.engineer.x = v; });
  f.complex_option("--gamma", "modulation strength (alpha+i beta) T1/4", [](RunConfig& c, Complex v) {
    c.engineer.gamma = v;
  });
  f.complex_option("--gamma-guess", "starting point of the root search", [](RunConfig& c, Complex v) {
    c.engineer.gamma_guess = v;
  });
  f.flag("--solve", "use the root of sigma(Gamma) = 0 instead of --gamma",
         [](RunConfig& c) { c.engineer.solve = true; });
  f.option<double>("--kappa", "bare hopping", [](RunConfig& c, double v) { c.engineer.kappa = v; });
}

void apply_command_defaults(RunConfig& cfg) {
  if (cfg.command == Command::Floquet) {
    cfg.lattice.geometry = Geometry::Ring;
    cfg.lattice.sites = cfg.floquet.drive.sites;
  }
  if (cfg.command == Command::Laser) cfg.initial.site = 0;
}

void apply_bloch_preset(RunConfig& cfg, BlochVariant variant) {
  const BlochPreset p = bloch_preset(variant);
  cfg.lattice = p.spec;
  cfg.evolve = p.config;
  cfg.initial.kind = InitialState::Kind::Gaussian;
  cfg.initial.center = p.gaussian_center;
  cfg.initial.width = p.gaussian_width;
  cfg.period = p.period;
}

Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParameterError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

// Writes to the --output file when set, otherwise to `out`.
void emit(const std::optional<std::string>& path, std::ostream& out,
          const std::function<void(std::ostream&)>& write) {
  if (!path) {
    write(out);
    return;
  }
  std::ofstream file(*path);
  if (!file) throw IoError("cannot open '" + *path + "' for writing");
  write(file);
  file.flush();
  if (!file) throw IoError("failed writing '" + *path + "'");
}

std::string observables_path(const std::string& path) {
  const std::string ext = ".csv";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size()) + "_observables" + ext;
  }
  return path + "_observables.csv";
}

void emit_trajectory(const RunConfig& cfg, const StateTrajectory& traj, std::ostream& out) {
  emit(cfg.output, out, [&](std::ostream& o) { write_trajectory_csv(o, traj); });
  if (cfg.output) {
    emit(observables_path(*cfg.output), out, [&](std::ostream& o) { write_observables_csv(o, traj); });
  }
}

void emit_json(const RunConfig& cfg, const Json& j, std::ostream& out) {
  emit(cfg.output, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

void warn_window_edges(const LatticeSpec& spec, const StateTrajectory& traj, std::ostream& err) {
  if (spec.geometry != Geometry::InfiniteChain) return;
  bool low = false, high = false;
  for (const StateVector& s : traj.states) {
    const double w = s.amps.squaredNorm();
    if (w == 0.0) continue;
    low = low || std::norm(s.amps(0)) > 1e-12 * w;
    high = high || std::norm(s.amps(s.size() - 1)) > 1e-12 * w;
  }
  if (low) err << "warning: amplitude reached the window edge n_min = " << spec.window.n_min << '\n';
  if (high) err << "warning: amplitude reached the window edge n_max = " << spec.window.n_max << '\n';
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SpectrumOptions opts;
  opts.cluster_tol = cfg.spectrum.cluster_tol;
  opts.rank_tol = cfg.spectrum.rank_tol;
  SpectrumReport report = analyze_spectrum(build_hamiltonian(cfg.lattice), opts);
  if (!cfg.spectrum.eigenvectors) report.eigenvectors.reset();
  Json j = report;
  if (cfg.lattice.geometry == Geometry::Ring && cfg.lattice.force == 0.0) {
    j["ring_eigenvalues"] = ring_spectrum(cfg.lattice).eigenvalues;
  }
  emit_json(cfg, j, out);
  int max_order = 0;
  for (const EigenCluster& c : report.clusters) max_order = std::max(max_order, c.ep_order);
  err << "dim=" << report.eigenvalues.size() << " clusters=" << report.clusters.size()
      << " max_ep_order=" << max_order << " defective=" << (report.is_defective ? "yes" : "no") << '\n';
  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
  return kOk;
}

int cmd_dump_h(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const HamiltonianMatrix h = hamiltonian_at(cfg.lattice, cfg.time, cfg.flux_rate);
  emit_json(cfg, Json(h), out);
  err << "dim=" << h.dim() << " offset=" << h.offset << " max_abs_entry=" << fmt(h.max_abs_entry()) << '\n';
  return kOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const StateVector c0 = cfg.initial.build(cfg.lattice);
  const StateTrajectory traj = evolve(cfg.lattice, c0, cfg.evolve, cfg.flux_rate);
  emit_trajectory(cfg, traj, out);
  warn_window_edges(cfg.lattice, traj, err);
  const Observables& last = traj.observables.back();
  err << "records=" << traj.size() << " t_end=" << fmt(traj.times.back()) << " com=" << fmt(last.center_of_mass)
      << " weight=" << fmt(last.total_weight) << '\n';
  return kOk;
}

int cmd_bloch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const StateVector c0 = cfg.initial.build(cfg.lattice);
  const StateTrajectory traj = evolve(cfg.lattice, c0, cfg.evolve, cfg.flux_rate);
  emit_trajectory(cfg, traj, out);
  warn_window_edges(cfg.lattice, traj, err);
  if (!cfg.period && cfg.lattice.force == 0.0) throw ParameterError("bloch needs a force or an explicit period");
  const double period = cfg.period.value_or(2.0 * std::numbers::pi / std::abs(cfg.lattice.force));
  err << "period=" << fmt(period) << " revival_error=" << fmt(revival_error(traj, period))
      << " com_drift=" << fmt(center_of_mass_drift(traj, period)) << '\n';
  return kOk;
}

int cmd_floquet(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const FluxDrive& drive = cfg.floquet.drive;
  Json j;
  const QuasiEnergyReport analytic = quasi_energies_analytic(cfg.lattice.kappa1, drive, cfg.floquet.profile);
  j["analytic"] = analytic;
  std::optional<QuasiEnergyReport> numeric;
  if (!cfg.floquet.analytic_only) {
    numeric = monodromy(cfg.lattice, drive, cfg.floquet.dt.value_or(drive.period() / 1e4));
    j["monodromy"] = *numeric;
  }
  emit_json(cfg, j, out);
  const auto max_abs = [](const std::vector<Complex>& v) {
    double m = 0.0;
    for (Complex z : v) m = std::max(m, std::abs(z));
    return m;
  };
  err << "force=" << fmt(analytic.force) << " period=" << fmt(analytic.period)
      << " max_abs_mu_analytic=" << fmt(max_abs(analytic.mu));
  if (numeric) {
    err << " max_abs_mu=" << fmt(max_abs(numeric->mu)) << " monodromy_defect=" << fmt(*numeric->monodromy_defect);
  }
  err << '\n';
  return kOk;
}

Complex resolved_gamma(const EngineerSettings& e, std::optional<UnidirectionalRoot>& root) {
  if (!e.solve) return e.gamma;
  root = solve_unidirectional(e.theta, e.x, e.gamma_guess);
  return root->gamma;
}

int cmd_engineer(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const EngineerSettings& e = cfg.engineer;
  const ModulationProtocol at_gamma = ModulationProtocol::from_dimensionless(e.theta, e.x, e.gamma, e.period);
  const EffectiveHopping hop = effective_hopping(at_gamma, e.kappa);
  const UnidirectionalRoot root = solve_unidirectional(e.theta, e.x, e.gamma_guess);
  const ModulationProtocol at_root = ModulationProtocol::from_dimensionless(e.theta, e.x, root.gamma, e.period);
  const EffectiveHopping root_hop = effective_hopping(at_root, e.kappa);

  Json j;
  j["protocol"] = at_gamma;
  j["gamma"] = e.gamma;
  j["effective_hopping"] = hop;
  j["root"] = root;
  j["root"]["protocol"] = at_root;
  j["root"]["effective_hopping"] = root_hop;
  emit_json(cfg, j, out);
  err << "gamma*=" << format_complex(root.gamma) << " rho=" << format_complex(root_hop.rho)
      << " abs_sigma=" << fmt(std::abs(root_hop.sigma)) << " abs_sigma_at_gamma=" << fmt(std::abs(hop.sigma))
      << '\n';
  return kOk;
}

int cmd_rwa(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const EngineerSettings& e = cfg.engineer;
  std::optional<UnidirectionalRoot> root;
  const Complex gamma = resolved_gamma(e, root);
  const ModulationProtocol p = ModulationProtocol::from_dimensionless(e.theta, e.x, gamma, e.period);
  if (cfg.rwa.ratios.empty()) throw ParameterError("rwa needs at least one ratio");
  LatticeSpec chain;
  chain.sites = cfg.rwa.sites;
  chain.validate();
  const StateVector c0 = cfg.initial.build(chain);
  double t_end = 0.0;
  if (cfg.rwa.t_end) {
    t_end = *cfg.rwa.t_end;
  } else {
    const double slowest = *std::min_element(cfg.rwa.ratios.begin(), cfg.rwa.ratios.end());
    const double scale = e.kappa != 0.0 ? std::abs(e.kappa) : 1.0;
    t_end = cfg.rwa.cycles * 2.0 * std::numbers::pi / (slowest * scale);
  }
  const std::vector<RwaPoint> points = rwa_validate(p, e.kappa, cfg.rwa.ratios, cfg.rwa.sites, c0, t_end);
  emit(cfg.output, out, [&](std::ostream& o) { write_rwa_csv(o, points); });
  err << "gamma=" << format_complex(gamma) << " t_end=" << fmt(t_end);
  for (const RwaPoint& pt : points) err << " d(" << fmt(pt.omega_ratio) << ")=" << fmt(pt.discrepancy);
  err << '\n';
  return kOk;
}

int cmd_laser(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  LatticeSpec modes;
  modes.geometry = Geometry::InfiniteChain;
  modes.window = cfg.laser.modes;
  const StateVector c0 = cfg.initial.build(modes);
  const StateTrajectory traj = laser_evolve(cfg.laser.params, cfg.laser.modes, c0, cfg.evolve, cfg.laser.edge_tolerance);
  emit_trajectory(cfg, traj, out);
  const LaserCouplings c = laser_effective_couplings(cfg.laser.params);
  const Observables& last = traj.observables.back();
  err << "forward=" << format_complex(c.forward) << " backward=" << format_complex(c.backward)
      << " com=" << fmt(last.center_of_mass) << " weight=" << fmt(last.total_weight) << '\n';
  return kOk;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cfg.command) {
    case Command::Spectrum: return cmd_spectrum(cfg, out, err);
    case Command::DumpH: return cmd_dump_h(cfg, out, err);
    case Command::Evolve: return cmd_evolve(cfg, out, err);
    case Command::Bloch: return cmd_bloch(cfg, out, err);
    case Command::Floquet: return cmd_floquet(cfg, out, err);
    case Command::Engineer: return cmd_engineer(cfg, out, err);
    case Command::Rwa: return cmd_rwa(cfg, out, err);
    case Command::Laser: return cmd_laser(cfg, out, err);
  }
  return kUsage;
}

void validate(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Spectrum:
    case Command::DumpH:
      cfg.lattice.validate();
      break;
    case Command::Evolve:
    case Command::Bloch:
      cfg.lattice.validate();
      cfg.evolve.validate();
      break;
    case Command::Floquet:
      cfg.lattice.validate();
      cfg.floquet.drive.validate();
      break;
    case Command::Engineer:
    case Command::Rwa:
      require_finite(cfg.engineer.gamma, "Gamma");
      require_finite(cfg.engineer.gamma_guess, "Gamma guess");
      break;
    case Command::Laser:
      cfg.laser.params.validate();
      cfg.evolve.validate();
      break;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-Hermitian tight-binding lattice toolkit", "nhl"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Subcommand>> subs;
  const auto add = [&](Command c, const std::string& help) -> Subcommand& {
    CLI::App* sub = app.add_subcommand(std::string(to_string(c)), help);
    subs.push_back(std::make_unique<Subcommand>(Subcommand{c, sub, FlagSet(sub), {}, false, false, false}));
    add_common(*subs.back());
    return *subs.back();
  };

  {
    Subcommand& s = add(Command::Spectrum, "eigenvalues and Jordan structure of a static lattice");
    add_lattice(s.flags);
    s.flags.option<double>("--cluster-tol", "relative eigenvalue clustering tolerance",
                           [](RunConfig& c, double v) { c.spectrum.cluster_tol = v; });
    s.flags.option<double>("--rank-tol", "relative singular-value threshold for rank decisions",
                           [](RunConfig& c, double v) { c.spectrum.rank_tol = v; });
    s.flags.flag("--no-eigenvectors", "omit eigenvectors from the report",
                 [](RunConfig& c) { c.spectrum.eigenvectors = false; });
  }
  {
    Subcommand& s = add(Command::DumpH, "print the Hamiltonian matrix as JSON");
    add_lattice(s.flags);
    s.flags.option<double>("--time", "evaluation time for flux-driven rings", [](RunConfig& c, double v) { c.time = v; });
    s.flags.option<double>("--flux-rate", "Peierls phase rate on a ring", [](RunConfig& c, double v) { c.flux_rate = v; });
  }
  {
    Subcommand& s = add(Command::Evolve, "time evolution; writes trajectory and observables CSV");
    add_lattice(s.flags);
    add_evolve(s.flags);
    add_initial(s.flags);
    s.flags.option<double>("--flux-rate", "Peierls phase rate on a ring", [](RunConfig& c, double v) { c.flux_rate = v; });
  }
  {
    Subcommand& s = add(Command::Bloch, "Bloch-oscillation presets with revival diagnostics");
    s.app->add_flag("--fig2a", s.fig2a, "Hermitian chain: 16 sites, F = -0.6, kappa2 = kappa1 = 1");
    s.app->add_flag("--fig2b", s.fig2b, "unidirectional chain: 16 sites, F = -0.6, kappa1 = 1, kappa2 = 0");
    s.app->get_option("--fig2a")->excludes("--fig2b");
    add_lattice(s.flags);
    add_evolve(s.flags);
    add_initial(s.flags);
    s.flags.option<double>("--period", "revival period (default 2 pi / |F|)",
                           [](RunConfig& c, double v) { c.period = v; });
  }
  {
    Subcommand& s = add(Command::Floquet, "quasi-energies of a ring threaded by a linearly growing flux");
    s.flags.option<double>("--phi0-rate", "flux quanta per unit time", [](RunConfig& c, double v) {
      c.floquet.drive.phi0_rate = v;
    });
    s.flags.option<int>("--sites", "ring sites", [](RunConfig& c, int v) {
      c.floquet.drive.sites = v;
      c.lattice.sites = v;
    });
    s.flags.complex_option("--kappa1", "hopping onto c_{n+1}", [](RunConfig& c, Complex v) { c.lattice.kappa1 = v; });
    s.flags.complex_option("--kappa2", "hopping onto c_{n-1}", [](RunConfig& c, Complex v) { c.lattice.kappa2 = v; });
    s.flags.option<double>("--dt", "RK4 step for the monodromy (default T_B / 1e4)",
                           [](RunConfig& c, double v) { c.floquet.dt = v; });
    s.flags.option<std::string>("--profile", "peierls or constant", [](RunConfig& c, const std::string& v) {
      c.floquet.profile = parse_profile(v);
    });
    s.flags.flag("--analytic-only", "skip the numerical monodromy", [](RunConfig& c) { c.floquet.analytic_only = true; });
  }
  {
    Subcommand& s = add(Command::Engineer, "effective hopping of a modulated chain and the unidirectional root");
    add_engineer(s.flags);
    s.flags.option<double>("--period", "modulation period T", [](RunConfig& c, double v) { c.engineer.period = v; });
  }
  {
    Subcommand& s = add(Command::Rwa, "exact versus averaged dynamics for increasing drive frequency");
    add_engineer(s.flags);
    s.flags.option<std::vector<double>>("--ratios", "omega/kappa values", [](RunConfig& c, const std::vector<double>& v) {
      c.rwa.ratios = v;
    });
    s.flags.option<int>("--sites", "chain sites", [](RunConfig& c, int v) { c.rwa.sites = v; });
    s.flags.option<int>("--cycles", "drive periods at the smallest ratio", [](RunConfig& c, int v) { c.rwa.cycles = v; });
    s.flags.option<double>("--t-end", "comparison time (overrides --cycles)", [](RunConfig& c, double v) { c.rwa.t_end = v; });
    add_initial(s.flags);
  }
  {
    Subcommand& s = add(Command::Laser, "axial-mode dynamics of an AM/FM mode-locked laser");
    FlagSet& f = s.flags;
    f.option<double>("--g", "saturated gain", [](RunConfig& c, double v) { c.laser.params.g = v; });
    f.option<double>("--l", "cavity loss", [](RunConfig& c, double v) { c.laser.params.l = v; });
    f.option<double>("--Dg", "gain curvature", [](RunConfig& c, double v) { c.laser.params.Dg = v; });
    f.option<double>("--delta-am", "AM depth", [](RunConfig& c, double v) { c.laser.params.delta_am = v; });
    f.option<double>("--delta-fm", "FM depth", [](RunConfig& c, double v) { c.laser.params.delta_fm = v; });
    f.option<double>("--phi", "AM/FM phase offset", [](RunConfig& c, double v) { c.laser.params.phi = v; });
    f.option<double>("--F", "modulation detuning", [](RunConfig& c, double v) { c.laser.params.F = v; });
    f.option<long>("--mode-min", "lowest axial mode", [](RunConfig& c, long v) { c.laser.modes.n_min = v; });
    f.option<long>("--mode-max", "highest axial mode", [](RunConfig& c, long v) { c.laser.modes.n_max = v; });
    f.option<double>("--edge-tol", "boundary weight fraction that aborts the run (0 disables)",
                     [](RunConfig& c, double v) {
                       if (v > 0.0) {
                         c.laser.edge_tolerance = v;
                       } else {
                         c.laser.edge_tolerance.reset();
                       }
                     });
    add_evolve(f);
    add_initial(f);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const auto it = std::find_if(subs.begin(), subs.end(), [](const auto& s) { return s->app->parsed(); });
  Subcommand& sub = **it;

  try {
    RunConfig cfg;
    cfg.command = sub.command;
    apply_command_defaults(cfg);
    if (sub.fig2a) apply_bloch_preset(cfg, BlochVariant::Hermitian);
    if (sub.fig2b) apply_bloch_preset(cfg, BlochVariant::Unidirectional);
    if (sub.command == Command::Bloch && !sub.fig2a && !sub.fig2b && sub.config_path.empty()) {
      err << "bloch: pass --fig2a, --fig2b or --config\n";
      return kUsage;
    }
    if (!sub.config_path.empty()) merge_json(read_config_file(sub.config_path), cfg);
    sub.flags.apply(cfg);
    validate(cfg);
    if (sub.dump_config) {
      out << to_json(cfg).dump(2) << '\n';
      return kOk;
    }
    return execute(cfg, out, err);
  } catch (const ParameterError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const Json::exception& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ComputationError& e) {
    err << "computation error: " << e.what() << '\n';
    return kComputation;
  } catch (const std::exception& e) {
    err << "computation error: " << e.what() << '\n';
    return kComputation;
  }
}

}  // namespace nhl::cli
