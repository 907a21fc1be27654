#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nhlattice/lattice.hpp"

namespace nhl {

/// Linear flux Phi(t) = phi0_rate t (in flux quanta) threading a ring of
/// `sites` sites. Each bond picks up the Peierls phase F t with
/// F = 2 pi phi0_rate / sites.
struct FluxDrive {
  double phi0_rate = 1.0;
  int sites = 2;

  void validate() const;
  double force() const;
  /// T_B = 2 pi / |F|.
  double period() const;
};

struct QuasiEnergyReport {
  /// One quasi-energy per Bloch momentum (analytic) or monodromy eigenvalue.
  /// Real parts folded into (-|F|/2, |F|/2] unless the report is a static limit.
  std::vector<Complex> mu;
  std::optional<Eigen::MatrixXcd> monodromy;
  /// max_{ij} |M - I|_{ij}; present for numerically integrated reports.
  std::optional<double> monodromy_defect;
  double force = 0.0;
  double period = 0.0;
};

enum class PhaseProfile {
  /// Hopping phase e^{iFt}: the flux-threaded ring.
  Peierls,
  /// Phase replaced by 1: the static ring written as a quasi-energy average.
  Constant,
};

/// mu_l = (kappa1 / T_B) e^{-i q_l} * integral_0^{T_B} e^{iFt} dt, with the
/// integral evaluated in closed form. With PhaseProfile::Constant the integral
/// is T_B and the static ring spectrum is returned unfolded.
QuasiEnergyReport quasi_energies_analytic(Complex kappa1, const FluxDrive& drive,
                                          PhaseProfile profile = PhaseProfile::Peierls);

/// One-period fundamental matrix of the flux-driven ring by RK4 on the
/// identity columns, and quasi-energies mu = i log(eig M) / T_B.
QuasiEnergyReport monodromy(const LatticeSpec& spec, const FluxDrive& drive, double dt);

/// Folds x into (-|F|/2, |F|/2].
double fold_quasi_energy(double x, double force);

}  // namespace nhl
