#include "nhlattice/floquet.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nhlattice/errors.hpp"
#include "nhlattice/rk4.hpp"

namespace nhl {

void FluxDrive::validate() const {
  require_finite(phi0_rate, "flux rate phi0");
  if (phi0_rate == 0.0) throw ParameterError("flux rate phi0 must be non-zero");
  if (sites < 2) throw ParameterError("flux drive needs a ring of at least 2 sites");
}

double FluxDrive::force() const { return 2.0 * std::numbers::pi * phi0_rate / sites; }

double FluxDrive::period() const { return 2.0 * std::numbers::pi / std::abs(force()); }

double fold_quasi_energy(double x, double force) {
  const double width = std::abs(force);
  if (!(width > 0.0)) throw ParameterError("folding needs a non-zero force");
  const double half = 0.5 * width;
  double y = x - width * std::ceil((x - half) / width);
  // Guard the open end against rounding.
  if (y <= -half) y += width;
  if (y > half) y -= width;
  return y;
}

QuasiEnergyReport quasi_energies_analytic(Complex kappa1, const FluxDrive& drive,
                                          PhaseProfile profile) {
  drive.validate();
  require_finite(kappa1, "kappa1");
  const double force = drive.force();
  const double period = drive.period();

  // integral_0^{T_B} e^{iFt} dt = (e^{iF T_B} - 1) / (iF)
  const Complex phase_integral = profile == PhaseProfile::Peierls
                                     ? (std::polar(1.0, force * period) - 1.0) / Complex(0.0, force)
                                     : Complex(period, 0.0);

  QuasiEnergyReport report;
  report.force = force;
  report.period = period;
  for (int l = 0; l < drive.sites; ++l) {
    const double q = 2.0 * std::numbers::pi * l / drive.sites;
    Complex mu = kappa1 / period * std::polar(1.0, -q) * phase_integral;
    if (profile == PhaseProfile::Peierls) mu.real(fold_quasi_energy(mu.real(), force));
    report.mu.push_back(mu);
  }
  return report;
}

QuasiEnergyReport monodromy(const LatticeSpec& spec, const FluxDrive& drive, double dt) {
  spec.validate();
  drive.validate();
  if (spec.geometry != Geometry::Ring) throw ParameterError("monodromy requires the ring geometry");
  if (spec.sites != drive.sites) throw ParameterError("flux drive and ring disagree on the site count");
  if (spec.force != 0.0) throw ParameterError("the ring force enters through the flux drive only");
  require_finite(dt, "dt");
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");

  const double force = drive.force();
  const double period = drive.period();
  const double fastest = std::max({std::abs(spec.kappa1), std::abs(spec.kappa2), std::abs(force)});
  if (dt * fastest > 0.05 * (1.0 + 1e-12) || dt > period) {
    throw ParameterError("dt does not resolve the hopping and flux rates");
  }

  const PhasedHamiltonian hamiltonian(spec, force);
  const auto generator = [&hamiltonian](double t, Eigen::MatrixXcd& out) { hamiltonian.evaluate(t, out); };
  const int d = spec.dim();
  const long steps = static_cast<long>(std::ceil(period / dt - 1e-9));
  const double h = period / static_cast<double>(steps);

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
  for (long k = 0; k < steps; ++k) rk4::step(m, static_cast<double>(k) * h, h, generator);
  if (!m.allFinite()) throw ComputationError("monodromy integration produced non-finite entries");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) throw ComputationError("monodromy eigensolve did not converge");

  QuasiEnergyReport report;
  report.force = force;
  report.period = period;
  const double floor = std::numeric_limits<double>::epsilon() * std::max(1.0, m.norm());
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const Complex lambda = solver.eigenvalues()(i);
    if (std::abs(lambda) <= floor) throw ComputationError("monodromy matrix is singular");
    Complex mu = Complex(0.0, 1.0) * std::log(lambda) / period;
    mu.real(fold_quasi_energy(mu.real(), force));
    report.mu.push_back(mu);
  }
  report.monodromy_defect = (m - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
  report.monodromy = std::move(m);
  return report;
}

}  // namespace nhl
