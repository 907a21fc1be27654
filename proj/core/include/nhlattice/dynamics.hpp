#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nhlattice/lattice.hpp"

namespace nhl {

struct Observables {
  /// <n> = sum n |c_n|^2 / sum |c_n|^2 over absolute site indices.
  double center_of_mass = 0.0;
  /// sum |c_n|^2 of the raw (unnormalized) amplitudes.
  double total_weight = 0.0;
  /// |<c(0)|c(t)>|^2 / (||c(0)||^2 ||c(t)||^2).
  double revival_fidelity = 0.0;
};

struct StateTrajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<Observables> observables;
  /// When the integrator renormalizes each step, the physical state at record
  /// k is states[k] * exp(log_scale[k]). Empty otherwise.
  std::vector<double> log_scale;

  bool normalized() const { return !log_scale.empty(); }
  std::size_t size() const { return times.size(); }
};

enum class Method { ClosedForm, RK4 };

struct EvolveConfig {
  double t_end = 1.0;
  double dt = 1e-3;
  Method method = Method::RK4;
  int record_every = 1;
  /// Rescale to unit norm after every step, accumulating the log of the scale.
  bool normalize = false;

  /// t_end = 0 is accepted and yields the initial state only.
  void validate() const;
};

/// Element U_{n,l}(t) = (-i kappa1 t)^{l-n} / (l-n)! (zero for l < n) of the
/// free unidirectional propagator.
Complex propagator_entry_unidirectional(Complex kappa1, double t, long n, long l);

/// Exact evolution for kappa2 = 0, F = 0: the triangular factorial kernel on
/// chains, the discrete Bloch sum on rings.
StateTrajectory evolve_closed_form(const LatticeSpec& spec, const StateVector& c0,
                                   std::span<const double> times);

/// Fixed-step RK4 of the lattice equations of motion, with an optional ring flux.
/// Requires dt <= 0.05 / max(|kappa1|, |kappa2|, |F| max(dim, max|n|), flux_rate).
StateTrajectory evolve_rk4(const LatticeSpec& spec, const StateVector& c0, const EvolveConfig& cfg,
                           std::optional<double> flux_rate = std::nullopt);

/// Dispatches on cfg.method. The closed-form path samples the same time grid
/// the RK4 path would record.
StateTrajectory evolve(const LatticeSpec& spec, const StateVector& c0, const EvolveConfig& cfg,
                       std::optional<double> flux_rate = std::nullopt);

/// Generator callback: writes H(t) into the output matrix.
using GeneratorFn = std::function<void(double, Eigen::MatrixXcd&)>;

/// RK4 driver shared by the lattice, laser and engineering models.
/// `fastest_rate` is the largest frequency the step must resolve.
StateTrajectory integrate_schrodinger(const GeneratorFn& generator, bool time_dependent,
                                      const StateVector& c0, const EvolveConfig& cfg,
                                      double fastest_rate);

double total_weight(const StateVector& state);
/// Throws UndefinedValueError for a zero-norm state.
double center_of_mass(const StateVector& state);
Observables observe(const StateVector& state, const StateVector& reference);

/// Physical state at recorded index k (undoes per-step normalization).
StateVector physical_state(const StateTrajectory& traj, std::size_t k);
/// Linear interpolation between the two bracketing records.
StateVector state_at(const StateTrajectory& traj, double t);

/// ||c(period) - c(0)|| / ||c(0)|| on raw amplitudes. For normalized
/// trajectories the projective distance sqrt(1 - fidelity) is returned instead.
double revival_error(const StateTrajectory& traj, double period);

/// max |<n>(t + period) - <n>(t)| over recorded t with t + period inside the trajectory.
double center_of_mass_drift(const StateTrajectory& traj, double period);

}  // namespace nhl
