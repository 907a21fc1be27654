#include "nhlattice/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nhlattice/errors.hpp"
#include "nhlattice/rk4.hpp"

namespace nhl {
namespace {

constexpr double kOverflowLimit = 1e150;
constexpr double kStepSafety = 0.05;

void check_state_matches(const LatticeSpec& spec, const StateVector& c0) {
  c0.validate();
  if (c0.size() != spec.dim() || c0.offset != spec.first_site()) {
    throw ParameterError("initial state does not match the lattice sites");
  }
  if (c0.amps.squaredNorm() == 0.0) throw ParameterError("initial state has zero norm");
}

void record(StateTrajectory& traj, double t, const StateVector& state, const StateVector& reference,
            std::optional<double> log_scale) {
  traj.times.push_back(t);
  traj.states.push_back(state);
  traj.observables.push_back(observe(state, reference));
  if (log_scale) traj.log_scale.push_back(*log_scale);
}

std::vector<double> recorded_times(const EvolveConfig& cfg) {
  std::vector<double> times{0.0};
  if (cfg.t_end == 0.0) return times;
  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  const double h = cfg.t_end / static_cast<double>(steps);
  for (long k = 1; k <= steps; ++k) {
    if (k % cfg.record_every == 0 || k == steps) {
      times.push_back(k == steps ? cfg.t_end : static_cast<double>(k) * h);
    }
  }
  return times;
}

}  // namespace

void EvolveConfig::validate() const {
  require_finite(t_end, "t_end");
  require_finite(dt, "dt");
  if (t_end < 0.0) throw ParameterError("t_end must be non-negative");
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  if (t_end > 0.0 && dt > t_end) throw ParameterError("dt must not exceed t_end");
  if (record_every < 1) throw ParameterError("record_every must be a positive integer");
}

Complex propagator_entry_unidirectional(Complex kappa1, double t, long n, long l) {
  if (l < n) return {};
  const long k = l - n;
  if (k == 0) return {1.0, 0.0};
  const Complex z = Complex(0.0, -1.0) * kappa1 * t;
  if (z == Complex{}) return {};
  if (k <= 32) {
    Complex term{1.0, 0.0};
    for (long j = 1; j <= k; ++j) term *= z / static_cast<double>(j);
    return term;
  }
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(z) - std::lgamma(kd + 1.0));
}

StateTrajectory evolve_closed_form(const LatticeSpec& spec, const StateVector& c0,
                                   std::span<const double> times) {
  spec.validate();
  if (!spec.unidirectional() || spec.force != 0.0) {
    throw ParameterError("closed-form evolution requires kappa2 = 0 and F = 0; use the RK4 path");
  }
  check_state_matches(spec, c0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    require_finite(times[i], "time");
    if (i > 0 && !(times[i] > times[i - 1])) throw ParameterError("times must be strictly increasing");
  }

  const int d = spec.dim();
  StateTrajectory traj;
  for (double t : times) {
    StateVector c{c0.offset, Eigen::VectorXcd::Zero(d)};
    if (spec.geometry == Geometry::Ring) {
      // U_{n,l} depends on (n - l) mod d only.
      Eigen::VectorXcd kernel = Eigen::VectorXcd::Zero(d);
      for (int k = 0; k < d; ++k) {
        const double q = 2.0 * std::numbers::pi * k / d;
        const Complex energy = spec.kappa1 * std::polar(1.0, q);
        const Complex decay = std::exp(Complex(0.0, -1.0) * energy * t);
        for (int m = 0; m < d; ++m) kernel(m) += std::polar(1.0, q * m) * decay;
      }
      kernel /= static_cast<double>(d);
      for (int n = 0; n < d; ++n) {
        for (int l = 0; l < d; ++l) c.amps(n) += kernel(((n - l) % d + d) % d) * c0.amps(l);
      }
    } else {
      // Upper-triangular Toeplitz kernel; sites below the first one are open.
      std::vector<Complex> kernel(d);
      for (int k = 0; k < d; ++k) kernel[k] = propagator_entry_unidirectional(spec.kappa1, t, 0, k);
      for (int n = 0; n < d; ++n) {
        for (int l = n; l < d; ++l) c.amps(n) += kernel[l - n] * c0.amps(l);
      }
    }
    record(traj, t, c, c0, std::nullopt);
  }
  return traj;
}

StateTrajectory integrate_schrodinger(const GeneratorFn& generator, bool time_dependent,
                                      const StateVector& c0, const EvolveConfig& cfg,
                                      double fastest_rate) {
  cfg.validate();
  c0.validate();
  if (c0.amps.squaredNorm() == 0.0) throw ParameterError("initial state has zero norm");
  if (fastest_rate > 0.0 && cfg.dt * fastest_rate > kStepSafety * (1.0 + 1e-12)) {
    throw ParameterError("dt = " + std::to_string(cfg.dt) + " does not resolve the fastest rate " +
                         std::to_string(fastest_rate) + " (need dt <= " +
                         std::to_string(kStepSafety / fastest_rate) + ")");
  }

  StateTrajectory traj;
  StateVector state = c0;
  std::optional<double> log_scale;
  if (cfg.normalize) {
    const double norm = state.amps.norm();
    state.amps /= norm;
    log_scale = std::log(norm);
  }
  record(traj, 0.0, state, c0, log_scale);
  if (cfg.t_end == 0.0) return traj;

  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9)));
  const double h = cfg.t_end / static_cast<double>(steps);
  Eigen::MatrixXcd static_h;
  if (!time_dependent) generator(0.0, static_h);

  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k - 1) * h;
    if (time_dependent) {
      rk4::step(state.amps, t, h, generator);
    } else {
      rk4::step_static(state.amps, h, static_h);
    }
    const double peak = state.amps.cwiseAbs().maxCoeff();
    if (!(peak <= kOverflowLimit)) {
      throw OverflowError("amplitude overflow (max |c| > 1e150) at t = " +
                          std::to_string(t + h) + "; enable normalization to follow secular growth");
    }
    if (log_scale) {
      const double norm = state.amps.norm();
      if (norm == 0.0) throw ComputationError("state collapsed to zero norm");
      state.amps /= norm;
      *log_scale += std::log(norm);
    }
    if (k % cfg.record_every == 0 || k == steps) {
      record(traj, k == steps ? cfg.t_end : static_cast<double>(k) * h, state, c0, log_scale);
    }
  }
  return traj;
}

StateTrajectory evolve_rk4(const LatticeSpec& spec, const StateVector& c0, const EvolveConfig& cfg,
                           std::optional<double> flux_rate) {
  spec.validate();
  check_state_matches(spec, c0);
  const PhasedHamiltonian hamiltonian(spec, flux_rate);

  const double max_site = static_cast<double>(
      std::max({std::abs(spec.first_site()), std::abs(spec.last_site()), static_cast<long>(spec.dim())}));
  const double fastest = std::max({std::abs(spec.kappa1), std::abs(spec.kappa2),
                                   std::abs(spec.force) * max_site,
                                   flux_rate ? std::abs(*flux_rate) : 0.0});
  const GeneratorFn generator = [&hamiltonian](double t, Eigen::MatrixXcd& out) {
    hamiltonian.evaluate(t, out);
  };
  return integrate_schrodinger(generator, hamiltonian.time_dependent(), c0, cfg, fastest);
}

StateTrajectory evolve(const LatticeSpec& spec, const StateVector& c0, const EvolveConfig& cfg,
                       std::optional<double> flux_rate) {
  if (cfg.method == Method::RK4) return evolve_rk4(spec, c0, cfg, flux_rate);
  cfg.validate();
  if (flux_rate) throw ParameterError("closed-form evolution does not support a ring flux");
  const std::vector<double> times = recorded_times(cfg);
  return evolve_closed_form(spec, c0, times);
}

double total_weight(const StateVector& state) { return state.amps.squaredNorm(); }

double center_of_mass(const StateVector& state) {
  const double weight = total_weight(state);
  if (!(weight > 0.0)) throw UndefinedValueError("center of mass of a zero-norm state is undefined");
  double moment = 0.0;
  for (int k = 0; k < state.size(); ++k) {
    moment += static_cast<double>(state.offset + k) * std::norm(state.amps(k));
  }
  return moment / weight;
}

Observables observe(const StateVector& state, const StateVector& reference) {
  Observables o;
  o.total_weight = total_weight(state);
  o.center_of_mass = center_of_mass(state);
  const double ref_weight = total_weight(reference);
  if (ref_weight > 0.0 && reference.size() == state.size() && reference.offset == state.offset) {
    o.revival_fidelity = std::norm(reference.amps.dot(state.amps)) / (ref_weight * o.total_weight);
  }
  return o;
}

StateVector physical_state(const StateTrajectory& traj, std::size_t k) {
  StateVector s = traj.states.at(k);
  if (traj.normalized()) s.amps *= std::exp(traj.log_scale.at(k));
  return s;
}

StateVector state_at(const StateTrajectory& traj, double t) {
  if (traj.times.empty()) throw ParameterError("empty trajectory");
  if (t < traj.times.front() || t > traj.times.back()) {
    throw ParameterError("time " + std::to_string(t) + " outside the recorded range");
  }
  const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - traj.times.begin());
  if (traj.times[hi] == t || hi == 0) return traj.states[hi];
  const std::size_t lo = hi - 1;
  const double w = (t - traj.times[lo]) / (traj.times[hi] - traj.times[lo]);
  StateVector s = traj.states[lo];
  s.amps = (1.0 - w) * traj.states[lo].amps + w * traj.states[hi].amps;
  return s;
}

double revival_error(const StateTrajectory& traj, double period) {
  if (!(period > 0.0)) throw ParameterError("revival period must be positive");
  if (traj.times.size() < 2) throw ParameterError("trajectory does not cover a revival period");
  double spacing = 0.0;
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    spacing = std::max(spacing, traj.times[i] - traj.times[i - 1]);
  }
  const double slack = 1e-9 * std::max(1.0, period);
  if (std::abs(traj.times.front()) > spacing + slack) {
    throw ParameterError("trajectory does not start at t = 0");
  }
  if (traj.times.back() < period - slack) {
    throw ParameterError("trajectory ends before the revival period");
  }
  const StateVector& start = traj.states.front();
  const StateVector end = state_at(traj, std::min(period, traj.times.back()));
  if (traj.normalized()) {
    const double fid = std::norm(start.amps.dot(end.amps)) /
                       (start.amps.squaredNorm() * end.amps.squaredNorm());
    return std::sqrt(std::max(0.0, 1.0 - fid));
  }
  return (end.amps - start.amps).norm() / start.amps.norm();
}

double center_of_mass_drift(const StateTrajectory& traj, double period) {
  if (!(period > 0.0)) throw ParameterError("revival period must be positive");
  if (traj.times.empty() || traj.times.back() < traj.times.front() + period * (1.0 - 1e-12)) {
    throw ParameterError("trajectory is shorter than one period");
  }
  const double last = traj.times.back();
  double drift = 0.0;
  for (std::size_t k = 0; k < traj.size() && traj.times[k] + period <= last * (1.0 + 1e-12); ++k) {
    const double later = center_of_mass(state_at(traj, std::min(traj.times[k] + period, last)));
    drift = std::max(drift, std::abs(later - traj.observables[k].center_of_mass));
  }
  return drift;
}

}  // namespace nhl
