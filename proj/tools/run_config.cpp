#include "run_config.hpp"

#include <array>
#include <utility>

#include "nhlattice/errors.hpp"

namespace nhl::cli {
namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommandNames{{
    {Command::Spectrum, "spectrum"},
    {Command::DumpH, "dump-h"},
    {Command::Evolve, "evolve"},
    {Command::Bloch, "bloch"},
    {Command::Floquet, "floquet"},
    {Command::Engineer, "engineer"},
    {Command::Rwa, "rwa"},
    {Command::Laser, "laser"},
}};

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class T>
void read_optional(const Json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
  } else {
    out = j.at(key).get<T>();
  }
}

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Json initial_json(const InitialState& s) {
  if (s.kind == InitialState::Kind::Site) return Json{{"kind", "site"}, {"site", optional_json(s.site)}};
  return Json{{"kind", "gaussian"}, {"center", s.center}, {"width", s.width}};
}

void merge_initial(const Json& j, InitialState& s) {
  if (j.contains("kind")) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "site") {
      s.kind = InitialState::Kind::Site;
    } else if (kind == "gaussian") {
      s.kind = InitialState::Kind::Gaussian;
    } else {
      throw ParameterError("unknown initial state kind '" + kind + "'");
    }
  }
  read_optional(j, "site", s.site);
  read(j, "center", s.center);
  read(j, "width", s.width);
}

// Lattice and evolve sections overlay individual keys, unlike the library's
// from_json which resets missing keys to defaults.
void merge_lattice(const Json& j, LatticeSpec& s) {
  if (j.contains("geometry")) s.geometry = parse_geometry(j.at("geometry").get<std::string>());
  read(j, "sites", s.sites);
  read(j, "kappa1", s.kappa1);
  read(j, "kappa2", s.kappa2);
  read(j, "force", s.force);
  read(j, "window", s.window);
}

void merge_evolve(const Json& j, EvolveConfig& c) {
  Json full = c;
  full.update(j);
  c = full.get<EvolveConfig>();
}

std::string_view profile_name(PhaseProfile p) { return p == PhaseProfile::Peierls ? "peierls" : "constant"; }

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommandNames) {
    if (cmd == c) return name;
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommandNames) {
    if (n == name) return cmd;
  }
  throw ParameterError("unknown command '" + std::string(name) + "'");
}

PhaseProfile parse_profile(std::string_view name) {
  if (name == "peierls") return PhaseProfile::Peierls;
  if (name == "constant") return PhaseProfile::Constant;
  throw ParameterError("unknown phase profile '" + std::string(name) + "'");
}

StateVector InitialState::build(const LatticeSpec& spec) const {
  if (kind == Kind::Gaussian) return StateVector::gaussian(spec, center, width);
  return StateVector::site_excitation(spec, site.value_or(spec.last_site()));
}

LatticeSpec RunConfig::default_lattice() {
  LatticeSpec s;
  s.sites = 16;
  return s;
}

Json to_json(const RunConfig& cfg) {
  Json j{{"command", std::string(to_string(cfg.command))}};
  switch (cfg.command) {
    case Command::Spectrum:
      j["lattice"] = cfg.lattice;
      j["spectrum"] = Json{{"cluster_tol", cfg.spectrum.cluster_tol},
                           {"rank_tol", optional_json(cfg.spectrum.rank_tol)},
                           {"eigenvectors", cfg.spectrum.eigenvectors}};
      break;
    case Command::DumpH:
      j["lattice"] = cfg.lattice;
      j["time"] = cfg.time;
      j["flux_rate"] = optional_json(cfg.flux_rate);
      break;
    case Command::Evolve:
    case Command::Bloch:
      j["lattice"] = cfg.lattice;
      j["evolve"] = cfg.evolve;
      j["initial"] = initial_json(cfg.initial);
      j["flux_rate"] = optional_json(cfg.flux_rate);
      if (cfg.command == Command::Bloch) j["period"] = optional_json(cfg.period);
      break;
    case Command::Floquet:
      j["lattice"] = cfg.lattice;
      j["floquet"] = Json{{"drive", cfg.floquet.drive},
                          {"dt", optional_json(cfg.floquet.dt)},
                          {"profile", std::string(profile_name(cfg.floquet.profile))},
                          {"analytic_only", cfg.floquet.analytic_only}};
      break;
    case Command::Engineer:
    case Command::Rwa: {
      const EngineerSettings& e = cfg.engineer;
      j["engineer"] = Json{{"theta", e.theta}, {"x", e.x},         {"gamma", e.gamma},
                           {"gamma_guess", e.gamma_guess},         {"solve", e.solve},
                           {"kappa", e.kappa}, {"period", e.period}};
      if (cfg.command == Command::Rwa) {
        j["rwa"] = Json{{"ratios", cfg.rwa.ratios},
                        {"sites", cfg.rwa.sites},
                        {"cycles", cfg.rwa.cycles},
                        {"t_end", optional_json(cfg.rwa.t_end)}};
        j["initial"] = initial_json(cfg.initial);
      }
      break;
    }
    case Command::Laser:
      j["laser"] = Json{{"params", cfg.laser.params},
                        {"modes", cfg.laser.modes},
                        {"edge_tolerance", optional_json(cfg.laser.edge_tolerance)}};
      j["evolve"] = cfg.evolve;
      j["initial"] = initial_json(cfg.initial);
      break;
  }
  j["output"] = optional_json(cfg.output);
  return j;
}

void merge_json(const Json& j, RunConfig& cfg) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  if (j.contains("command")) {
    const Command c = parse_command(j.at("command").get<std::string>());
    if (c != cfg.command) {
      throw ParameterError("config was written for '" + std::string(to_string(c)) + "', not '" +
                           std::string(to_string(cfg.command)) + "'");
    }
  }
  if (j.contains("lattice")) merge_lattice(j.at("lattice"), cfg.lattice);
  if (j.contains("evolve")) merge_evolve(j.at("evolve"), cfg.evolve);
  if (j.contains("initial")) merge_initial(j.at("initial"), cfg.initial);
  read_optional(j, "flux_rate", cfg.flux_rate);
  read_optional(j, "period", cfg.period);
  read(j, "time", cfg.time);
  if (j.contains("spectrum")) {
    const Json& s = j.at("spectrum");
    read(s, "cluster_tol", cfg.spectrum.cluster_tol);
    read_optional(s, "rank_tol", cfg.spectrum.rank_tol);
    read(s, "eigenvectors", cfg.spectrum.eigenvectors);
  }
  if (j.contains("floquet")) {
    const Json& f = j.at("floquet");
    read(f, "drive", cfg.floquet.drive);
    read_optional(f, "dt", cfg.floquet.dt);
    if (f.contains("profile")) cfg.floquet.profile = parse_profile(f.at("profile").get<std::string>());
    read(f, "analytic_only", cfg.floquet.analytic_only);
  }
  if (j.contains("engineer")) {
    const Json& e = j.at("engineer");
    read(e, "theta", cfg.engineer.theta);
    read(e, "x", cfg.engineer.x);
    read(e, "gamma", cfg.engineer.gamma);
    read(e, "gamma_guess", cfg.engineer.gamma_guess);
    read(e, "solve", cfg.engineer.solve);
    read(e, "kappa", cfg.engineer.kappa);
    read(e, "period", cfg.engineer.period);
  }
  if (j.contains("rwa")) {
    const Json& r = j.at("rwa");
    read(r, "ratios", cfg.rwa.ratios);
    read(r, "sites", cfg.rwa.sites);
    read(r, "cycles", cfg.rwa.cycles);
    read_optional(r, "t_end", cfg.rwa.t_end);
  }
  if (j.contains("laser")) {
    const Json& l = j.at("laser");
    if (l.contains("params")) {
      Json full = cfg.laser.params;
      full.update(l.at("params"));
      cfg.laser.params = full.get<LaserParams>();
    }
    read(l, "modes", cfg.laser.modes);
    read_optional(l, "edge_tolerance", cfg.laser.edge_tolerance);
  }
  read_optional(j, "output", cfg.output);
}

}  // namespace nhl::cli
