#include "nhlattice/engineering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "nhlattice/errors.hpp"

namespace nhl {
namespace {

constexpr Complex kI{0.0, 1.0};

double even_site_weight(long n) { return n % 2 == 0 ? 1.0 : 0.0; }

// Segment boundaries of one period: quarters of the active part, then idle.
std::array<double, 5> breakpoints(const ModulationProtocol& p) {
  return {0.0, 0.25 * p.T1, 0.75 * p.T1, p.T1, p.T};
}

// int_0^t (V_n - V_m) dt' for t in [0, T), kick included for t > T1.
Complex phase_integral(const ModulationProtocol& p, long n, long m, double t) {
  const auto b = breakpoints(p);
  Complex acc{};
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double lo = b[i];
    const double hi = std::min(b[i + 1], t);
    if (hi <= lo) break;
    const double mid = 0.5 * (b[i] + b[i + 1]);
    acc += (potential(p, n, mid) - potential(p, m, mid)) * (hi - lo);
  }
  const PhaseKick kick = kick_event(p);
  if (t > kick.time) acc += kick.phase_per_site * static_cast<double>(n - m);
  return acc;
}

}  // namespace

void ModulationProtocol::validate() const {
  require_finite(theta, "theta");
  require_finite(alpha, "alpha");
  require_finite(beta, "beta");
  require_finite(T1, "T1");
  require_finite(T, "T");
  if (!(T1 > 0.0 && T1 < T)) throw ParameterError("modulation protocol needs 0 < T1 < T");
}

ModulationProtocol ModulationProtocol::from_dimensionless(double theta, double x, Complex gamma,
                                                          double period) {
  if (!(x > 0.0 && x < 1.0)) throw ParameterError("duty fraction x must lie in (0, 1)");
  if (!(period > 0.0)) throw ParameterError("modulation period must be positive");
  require_finite(gamma, "Gamma");
  ModulationProtocol p;
  p.theta = theta;
  p.T = period;
  p.T1 = x * period;
  const Complex amp = 4.0 * gamma / p.T1;
  p.alpha = amp.real();
  p.beta = amp.imag();
  p.validate();
  return p;
}

double modulation_envelope(const ModulationProtocol& p, double t) {
  p.validate();
  require_finite(t, "time");
  const double tau = t - p.T * std::floor(t / p.T);
  if (tau < 0.25 * p.T1) return 1.0;
  if (tau < 0.75 * p.T1) return -1.0;
  if (tau < p.T1) return 1.0;
  return 0.0;
}

Complex potential(const ModulationProtocol& p, long n, double t) {
  return even_site_weight(n) * p.amplitude() * modulation_envelope(p, t);
}

PhaseKick kick_event(const ModulationProtocol& p) {
  p.validate();
  return {p.T1, p.theta, p.T};
}

Complex sinc(Complex z) {
  if (std::abs(z) < 1e-4) {
    const Complex z2 = z * z;
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sin(z) / z;
}

Complex sinc_derivative(Complex z) {
  if (std::abs(z) < 1e-4) {
    const Complex z2 = z * z;
    return -z / 3.0 + z * z2 / 30.0;
  }
  return (z * std::cos(z) - std::sin(z)) / (z * z);
}

Complex time_averaged_hopping(const ModulationProtocol& p, double kappa, long n, bool forward) {
  p.validate();
  require_finite(kappa, "kappa");
  const long m = forward ? n + 1 : n - 1;
  const auto b = breakpoints(p);
  const double rate = std::abs(p.amplitude()) + 1.0;
  Complex total{};
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double len = b[i + 1] - b[i];
    const int panels = std::max(1, static_cast<int>(std::ceil(rate * len)));
    for (int k = 0; k < panels; ++k) {
      const double lo = b[i] + len * k / panels;
      const double hi = b[i] + len * (k + 1) / panels;
      total += boost::math::quadrature::gauss<double, 20>::integrate(
          [&](double t) { return std::exp(kI * phase_integral(p, n, m, t)); }, lo, hi);
    }
  }
  return kappa * total / p.T;
}

EffectiveHopping effective_hopping(const ModulationProtocol& p, double kappa) {
  p.validate();
  require_finite(kappa, "kappa");
  const double x = p.x();
  const Complex active = x * sinc(p.gamma());
  EffectiveHopping h;
  h.rho = kappa * (active + (1.0 - x) * std::polar(1.0, -p.theta));
  h.sigma = kappa * (active + (1.0 - x) * std::polar(1.0, p.theta));

  // Both parities of n give the same averages.
  double err = 0.0;
  for (long n : {0L, 1L}) {
    const Complex rq = time_averaged_hopping(p, kappa, n, true);
    const Complex sq = time_averaged_hopping(p, kappa, n, false);
    err = std::max({err, std::abs(rq - h.rho), std::abs(sq - h.sigma)});
    if (n == 0) {
      h.rho_quadrature = rq;
      h.sigma_quadrature = sq;
    }
  }
  h.self_check_error = err;
  if (err > 1e-8 * std::max(1.0, std::abs(kappa))) {
    throw ComputationError("closed-form effective hopping disagrees with quadrature by " +
                           std::to_string(err));
  }
  return h;
}

UnidirectionalRoot solve_unidirectional(double theta, double x, Complex gamma_guess) {
  require_finite(theta, "theta");
  require_finite(gamma_guess, "Gamma guess");
  if (!(x > 0.0 && x < 1.0)) throw ParameterError("duty fraction x must lie in (0, 1)");
  if (std::abs(std::sin(theta)) < 1e-12) {
    throw ParameterError("sin(theta) = 0: sigma = 0 would force rho = 0 as well");
  }

  const Complex target = (1.0 - x) * std::polar(1.0, theta);
  const auto residual = [&](Complex g) { return x * sinc(g) + target; };
  constexpr int kMaxIterations = 100;
  constexpr int kMaxHalvings = 8;
  constexpr double kTolerance = 1e-13;

  Complex gamma = gamma_guess;
  Complex f = residual(gamma);
  int iter = 0;
  while (std::abs(f) >= kTolerance && iter < kMaxIterations) {
    ++iter;
    const Complex slope = x * sinc_derivative(gamma);
    if (std::abs(slope) < 1e-14 * std::max(1.0, std::abs(f))) {
      throw RootNotFoundError("Newton iteration stalled: sinc'(Gamma) vanishes", std::abs(f), iter);
    }
    Complex step = -f / slope;
    Complex trial = gamma + step;
    Complex f_trial = residual(trial);
    for (int h = 0; h < kMaxHalvings && !(std::abs(f_trial) < std::abs(f)); ++h) {
      step *= 0.5;
      trial = gamma + step;
      f_trial = residual(trial);
    }
    if (!std::isfinite(std::abs(f_trial))) {
      throw RootNotFoundError("Newton iteration diverged", std::abs(f), iter);
    }
    if (trial == gamma) break;
    gamma = trial;
    f = f_trial;
  }
  if (!(std::abs(f) < 1e-10)) {
    throw RootNotFoundError("no root of sigma(Gamma) found within " + std::to_string(kMaxIterations) +
                                " iterations (residual " + std::to_string(std::abs(f)) + ")",
                            std::abs(f), iter);
  }
  UnidirectionalRoot root;
  root.gamma = gamma;
  root.rho = x * sinc(gamma) + (1.0 - x) * std::polar(1.0, -theta);
  root.residual = std::abs(f);
  root.iterations = iter;
  return root;
}

std::vector<RwaPoint> rwa_validate(const ModulationProtocol& protocol, double kappa,
                                   std::span<const double> omega_ratios, int sites,
                                   const StateVector& c0, double t_end) {
  protocol.validate();
  require_finite(kappa, "kappa");
  require_finite(t_end, "t_end");
  if (sites < 2) throw ParameterError("RWA comparison needs at least 2 sites");
  if (!(t_end > 0.0)) throw ParameterError("t_end must be positive");
  c0.validate();
  if (c0.offset != 0 || c0.size() != sites) throw ParameterError("initial state must cover sites 0..sites-1");
  if (c0.amps.squaredNorm() == 0.0) throw ParameterError("initial state has zero norm");

  const double theta = protocol.theta;
  const double x = protocol.x();
  const Complex gamma = protocol.gamma();
  const double scale = kappa != 0.0 ? std::abs(kappa) : 1.0;
  const Complex minus_i{0.0, -1.0};

  Eigen::MatrixXcd hopping = Eigen::MatrixXcd::Zero(sites, sites);
  for (int n = 0; n + 1 < sites; ++n) hopping(n, n + 1) = hopping(n + 1, n) = kappa;

  std::vector<RwaPoint> out;
  for (double ratio : omega_ratios) {
    require_finite(ratio, "omega ratio");
    if (ratio < 5.0) throw ParameterError("the averaged model needs omega/kappa >= 5");
    const double period = 2.0 * std::numbers::pi / (ratio * scale);
    const double cycles = t_end / period;
    const long periods = std::lround(cycles);
    if (periods < 1 || std::abs(cycles - static_cast<double>(periods)) > 1e-6) {
      throw ParameterError("t_end must be a whole number of drive periods at omega/kappa = " +
                           std::to_string(ratio));
    }
    const ModulationProtocol p = ModulationProtocol::from_dimensionless(theta, x, gamma, period);
    const auto b = breakpoints(p);

    // One-period propagator: three active segments, the kick at T1, idle, then the undo at T.
    const PhaseKick kick = kick_event(p);
    Eigen::VectorXcd kick_diag(sites);
    for (int n = 0; n < sites; ++n) kick_diag(n) = std::polar(1.0, -kick.phase_per_site * n);
    Eigen::MatrixXcd one_period = Eigen::MatrixXcd::Identity(sites, sites);
    Eigen::VectorXcd frame_phase = Eigen::VectorXcd::Zero(sites);
    for (std::size_t i = 0; i + 1 < b.size(); ++i) {
      const double len = b[i + 1] - b[i];
      const double mid = 0.5 * (b[i] + b[i + 1]);
      Eigen::MatrixXcd h = hopping;
      for (int n = 0; n < sites; ++n) {
        const Complex v = potential(p, n, mid);
        h(n, n) = v;
        frame_phase(n) += v * len;
      }
      one_period = (minus_i * len * h).exp() * one_period;
      if (i == 2) one_period = kick_diag.asDiagonal() * one_period;
    }
    one_period = kick_diag.conjugate().asDiagonal() * one_period;

    Eigen::VectorXcd full = c0.amps;
    for (long k = 0; k < periods; ++k) full = one_period * full;
    // Undo the accumulated on-site phases to land in the averaged frame.
    for (int n = 0; n < sites; ++n) {
      full(n) *= std::exp(kI * static_cast<double>(periods) * frame_phase(n));
    }

    const double x_frac = p.x();
    const Complex active = x_frac * sinc(p.gamma());
    const Complex rho = kappa * (active + (1.0 - x_frac) * std::polar(1.0, -theta));
    const Complex sigma = kappa * (active + (1.0 - x_frac) * std::polar(1.0, theta));
    Eigen::MatrixXcd h_eff = Eigen::MatrixXcd::Zero(sites, sites);
    for (int n = 0; n + 1 < sites; ++n) {
      h_eff(n, n + 1) = rho;
      h_eff(n + 1, n) = sigma;
    }
    const double t_total = static_cast<double>(periods) * period;
    const Eigen::VectorXcd effective = (minus_i * t_total * h_eff).exp() * c0.amps;

    const double ref = effective.norm() > 0.0 ? effective.norm() : c0.amps.norm();
    if (!full.allFinite() || !effective.allFinite()) {
      throw ComputationError("RWA comparison produced non-finite amplitudes");
    }
    out.push_back({ratio, period, periods, rho, sigma, (full - effective).norm() / ref});
  }
  return out;
}

void LaserParams::validate() const {
  for (double v : {g, l, Dg, delta_am, delta_fm, phi, F}) require_finite(v, "laser parameter");
  if (Dg < 0.0) throw ParameterError("gain curvature D_g must be non-negative");
}

LaserCouplings laser_effective_couplings(const LaserParams& p) {
  p.validate();
  LaserCouplings c;
  c.forward = p.delta_fm + kI * p.delta_am * std::polar(1.0, p.phi);
  c.backward = p.delta_fm + kI * p.delta_am * std::polar(1.0, -p.phi);
  c.force = p.F;
  c.net_gain = kI * (p.g - p.l);
  c.curvature = -kI * p.Dg;
  return c;
}

HamiltonianMatrix laser_hamiltonian(const LaserParams& p, const SiteWindow& modes) {
  if (modes.n_min >= modes.n_max) throw ParameterError("mode window needs n_min < n_max");
  const LaserCouplings c = laser_effective_couplings(p);
  const int d = static_cast<int>(modes.n_max - modes.n_min + 1);
  HamiltonianMatrix h{modes.n_min, Eigen::MatrixXcd::Zero(d, d)};
  for (int k = 0; k < d; ++k) {
    const double n = static_cast<double>(modes.n_min + k);
    h.entries(k, k) = c.force * n + c.net_gain + c.curvature * n * n;
    if (k + 1 < d) {
      h.entries(k, k + 1) = c.forward;
      h.entries(k + 1, k) = c.backward;
    }
  }
  return h;
}

StateTrajectory laser_evolve(const LaserParams& p, const SiteWindow& modes, const StateVector& c0,
                             const EvolveConfig& cfg, std::optional<double> edge_tolerance) {
  const HamiltonianMatrix h = laser_hamiltonian(p, modes);
  c0.validate();
  if (c0.offset != h.offset || c0.size() != h.dim()) {
    throw ParameterError("initial state does not match the mode window");
  }
  const double fastest = h.entries.cwiseAbs().maxCoeff();
  const GeneratorFn generator = [&h](double, Eigen::MatrixXcd& out) { out = h.entries; };
  StateTrajectory traj = integrate_schrodinger(generator, false, c0, cfg, fastest);

  if (edge_tolerance) {
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const auto& a = traj.states[k].amps;
      const double edge = std::norm(a(0)) + std::norm(a(a.size() - 1));
      if (edge > *edge_tolerance * a.squaredNorm()) {
        throw ComputationError("mode window too narrow: boundary weight fraction " +
                               std::to_string(edge / a.squaredNorm()) + " at t = " +
                               std::to_string(traj.times[k]));
      }
    }
  }
  return traj;
}

}  // namespace nhl
