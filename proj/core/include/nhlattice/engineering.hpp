#pragma once

// Synthesis of unidirectional hopping from periodically modulated complex
// site potentials, and the mode-locked laser mapping onto the forced
// unidirectional chain.

#include <optional>
#include <span>
#include <vector>

#include "nhlattice/dynamics.hpp"
#include "nhlattice/lattice.hpp"

namespace nhl {

/// Drive V_n(t) = theta n [delta(t - T1) - delta(t - T)] + [(1 + (-1)^n)/2] (alpha + i beta) S(t)
/// repeated with period T, where S = +1, -1, +1, 0 on the quarters
/// (0, T1/4), (T1/4, 3T1/4), (3T1/4, T1) and the idle segment (T1, T).
/// The phase gradient imprinted at T1 is removed again at the end of the
/// period, so the drive has zero mean.
struct ModulationProtocol {
  double theta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double T1 = 0.5;
  double T = 1.0;

  void validate() const;
  double x() const { return T1 / T; }
  Complex amplitude() const { return {alpha, beta}; }
  /// Gamma = (alpha + i beta) T1 / 4.
  Complex gamma() const { return amplitude() * T1 / 4.0; }

  /// Protocol with period T realizing the dimensionless triple (theta, x, Gamma).
  static ModulationProtocol from_dimensionless(double theta, double x, Complex gamma, double period);
};

/// Lumped phase event: c_n -> exp(-i phase_per_site n) c_n at `time`,
/// undone (c_n -> exp(+i phase_per_site n) c_n) at `undo_time`.
struct PhaseKick {
  double time;
  double phase_per_site;
  double undo_time;
};

/// S(t) for t folded into [0, T); segment boundaries belong to the later segment.
double modulation_envelope(const ModulationProtocol& protocol, double t);

/// Smooth part of V_n(t); the delta kick is reported separately by kick_event().
Complex potential(const ModulationProtocol& protocol, long n, double t);
PhaseKick kick_event(const ModulationProtocol& protocol);

struct EffectiveHopping {
  /// Coefficient of c_{n+1} in i dc_n/dt (plays the role of kappa1).
  Complex rho;
  /// Coefficient of c_{n-1} (plays the role of kappa2).
  Complex sigma;
  /// Same quantities from direct quadrature of the time average.
  Complex rho_quadrature;
  Complex sigma_quadrature;
  double self_check_error = 0.0;
};

/// Closed forms rho = kappa [x sinc(Gamma) + (1-x) e^{-i theta}],
/// sigma = kappa [x sinc(Gamma) + (1-x) e^{i theta}], verified against
/// time_averaged_hopping(); throws ComputationError if they disagree by more
/// than 1e-8 kappa.
EffectiveHopping effective_hopping(const ModulationProtocol& protocol, double kappa);

/// kappa < exp[i int_0^t (V_n - V_m) dt'] > averaged over one period by
/// Gauss-Legendre quadrature, m = n + 1 (forward) or n - 1 (backward).
Complex time_averaged_hopping(const ModulationProtocol& protocol, double kappa, long n, bool forward);

/// sin(z)/z with sinc(0) = 1.
Complex sinc(Complex z);
Complex sinc_derivative(Complex z);

struct UnidirectionalRoot {
  Complex gamma;
  /// Forward hopping at the root in units of kappa.
  Complex rho;
  /// |x sinc(Gamma) + (1 - x) e^{i theta}| at the root.
  double residual = 0.0;
  int iterations = 0;
};

/// Damped Newton solve of x sinc(Gamma) + (1 - x) e^{i theta} = 0.
UnidirectionalRoot solve_unidirectional(double theta, double x, Complex gamma_guess);

struct RwaPoint {
  double omega_ratio;
  double period;
  long periods;
  Complex rho;
  Complex sigma;
  /// ||frame-aligned full state - effective state|| / ||effective state|| at t_end.
  double discrepancy;
};

/// Compares the stroboscopic evolution of the modulated Hermitian chain
/// against the averaged effective chain for each omega/kappa ratio, holding
/// theta, x and Gamma fixed. Ratios are taken relative to |kappa| (or 1 when
/// kappa = 0). Each piecewise-constant segment is propagated with a dense
/// matrix exponential.
std::vector<RwaPoint> rwa_validate(const ModulationProtocol& protocol, double kappa,
                                   std::span<const double> omega_ratios, int sites,
                                   const StateVector& c0, double t_end);

struct LaserParams {
  double g = 0.0;
  double l = 0.0;
  double Dg = 0.0;
  double delta_am = 0.0;
  double delta_fm = 0.0;
  double phi = 0.0;
  double F = 0.0;

  void validate() const;
};

struct LaserCouplings {
  /// Coefficient of c_{n+1}: delta_fm + i delta_am e^{i phi}.
  Complex forward;
  /// Coefficient of c_{n-1}: delta_fm + i delta_am e^{-i phi}.
  Complex backward;
  /// Diagonal is force n + net_gain + curvature n^2.
  double force;
  Complex net_gain;
  Complex curvature;
};

LaserCouplings laser_effective_couplings(const LaserParams& p);

/// Generator of the axial-mode equations on the absolute mode window.
HamiltonianMatrix laser_hamiltonian(const LaserParams& p, const SiteWindow& modes);

/// Default axial-mode window: 64 modes centred on n = 0.
inline constexpr SiteWindow kDefaultLaserModes{-32, 31};

/// RK4 of the axial-mode equations. When edge_tolerance is set, aborts with
/// ComputationError once a recorded state carries more than that fraction of
/// its weight on the two boundary modes.
StateTrajectory laser_evolve(const LaserParams& p, const SiteWindow& modes, const StateVector& c0,
                             const EvolveConfig& cfg,
                             std::optional<double> edge_tolerance = 1e-6);

}  // namespace nhl
