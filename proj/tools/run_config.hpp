#pragma once

// Resolved parameters of one CLI invocation. Every run can be dumped to JSON
// and replayed from it with identical output.

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nhlattice/dynamics.hpp"
#include "nhlattice/engineering.hpp"
#include "nhlattice/floquet.hpp"
#include "nhlattice/io.hpp"
#include "nhlattice/lattice.hpp"

namespace nhl::cli {

enum class Command { Spectrum, DumpH, Evolve, Bloch, Floquet, Engineer, Rwa, Laser };

std::string_view to_string(Command c);
Command parse_command(std::string_view name);
PhaseProfile parse_profile(std::string_view name);

struct InitialState {
  enum class Kind { Site, Gaussian };
  Kind kind = Kind::Site;
  /// Excited site; defaults to the last site of the lattice.
  std::optional<long> site;
  double center = 0.0;
  double width = 1.0;

  StateVector build(const LatticeSpec& spec) const;
};

struct SpectrumSettings {
  double cluster_tol = 1e-8;
  std::optional<double> rank_tol;
  bool eigenvectors = true;
};

struct FloquetSettings {
  FluxDrive drive{1.0, 4};
  std::optional<double> dt;
  PhaseProfile profile = PhaseProfile::Peierls;
  bool analytic_only = false;
};

struct EngineerSettings {
  double theta = std::numbers::pi / 2;
  double x = 0.8;
  Complex gamma{3.0, 0.7};
  Complex gamma_guess{3.0, 0.7};
  /// Replace gamma by the unidirectional root found from gamma_guess.
  bool solve = false;
  double kappa = 1.0;
  double period = 1.0;
};

struct RwaSettings {
  std::vector<double> ratios{5.0, 10.0, 20.0};
  int sites = 10;
  /// Whole drive periods at the smallest ratio; ignored when t_end is set.
  int cycles = 5;
  std::optional<double> t_end;
};

struct LaserSettings {
  LaserParams params;
  SiteWindow modes = kDefaultLaserModes;
  /// Boundary weight fraction that aborts the run; absent disables the check.
  std::optional<double> edge_tolerance = 1e-6;
};

struct RunConfig {
  Command command = Command::Spectrum;
  LatticeSpec lattice = default_lattice();
  EvolveConfig evolve;
  InitialState initial;
  std::optional<double> flux_rate;
  /// Revival period used by `bloch`; defaults to 2 pi / |F|.
  std::optional<double> period;
  double time = 0.0;
  SpectrumSettings spectrum;
  FloquetSettings floquet;
  EngineerSettings engineer;
  RwaSettings rwa;
  LaserSettings laser;
  std::optional<std::string> output;

  static LatticeSpec default_lattice();
};

/// Only the sections the command reads are written.
Json to_json(const RunConfig& cfg);
/// Overlays the keys present in `j` onto `cfg`.
void merge_json(const Json& j, RunConfig& cfg);

}  // namespace nhl::cli
