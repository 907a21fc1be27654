#include "nhlattice/lattice.hpp"

#include <cmath>
#include <string>

#include "nhlattice/errors.hpp"

namespace nhl {

std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::InfiniteChain:
      return "infinite";
    case Geometry::FiniteChain:
      return "chain";
    case Geometry::Ring:
      return "ring";
  }
  return "unknown";
}

Geometry parse_geometry(std::string_view name) {
  if (name == "infinite") return Geometry::InfiniteChain;
  if (name == "chain" || name == "finite") return Geometry::FiniteChain;
  if (name == "ring") return Geometry::Ring;
  throw ParameterError("unknown geometry '" + std::string(name) +
                       "' (expected infinite, chain or ring)");
}

void require_finite(Complex z, std::string_view what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ParameterError(std::string(what) + " must be finite");
  }
}

void require_finite(double x, std::string_view what) {
  if (!std::isfinite(x)) throw ParameterError(std::string(what) + " must be finite");
}

void LatticeSpec::validate() const {
  require_finite(kappa1, "kappa1");
  require_finite(kappa2, "kappa2");
  require_finite(force, "force");
  switch (geometry) {
    case Geometry::FiniteChain:
      if (sites < 1) throw ParameterError("finite chain needs sites >= 1");
      break;
    case Geometry::Ring:
      if (sites < 2) throw ParameterError("ring needs sites >= 2");
      break;
    case Geometry::InfiniteChain:
      if (window.n_min >= window.n_max) {
        throw ParameterError("infinite-chain window needs n_min < n_max");
      }
      break;
  }
}

int LatticeSpec::dim() const {
  if (geometry == Geometry::InfiniteChain) {
    return static_cast<int>(window.n_max - window.n_min + 1);
  }
  return sites;
}

long LatticeSpec::first_site() const {
  return geometry == Geometry::InfiniteChain ? window.n_min : 0;
}

double HamiltonianMatrix::max_abs_entry() const {
  return entries.size() == 0 ? 0.0 : entries.cwiseAbs().maxCoeff();
}

Complex StateVector::at(long n) const {
  if (n < offset || n > last_site()) return {};
  return amps(n - offset);
}

void StateVector::validate() const {
  if (amps.size() < 1) throw ParameterError("state vector must hold at least one amplitude");
  if (!amps.allFinite()) throw ParameterError("state vector contains non-finite amplitudes");
}

StateVector StateVector::zeros(const LatticeSpec& spec) {
  spec.validate();
  return {spec.first_site(), Eigen::VectorXcd::Zero(spec.dim())};
}

StateVector StateVector::site_excitation(const LatticeSpec& spec, long n0) {
  StateVector s = zeros(spec);
  if (n0 < s.offset || n0 > s.last_site()) {
    throw ParameterError("excited site " + std::to_string(n0) + " lies outside the lattice");
  }
  s.amps(n0 - s.offset) = 1.0;
  return s;
}

StateVector StateVector::gaussian(const LatticeSpec& spec, double center, double width) {
  if (!(width > 0.0)) throw ParameterError("gaussian width must be positive");
  require_finite(center, "gaussian center");
  StateVector s = zeros(spec);
  for (int k = 0; k < s.size(); ++k) {
    const double d = static_cast<double>(s.offset + k) - center;
    s.amps(k) = std::exp(-d * d / (width * width));
  }
  return s;
}

PhasedHamiltonian::PhasedHamiltonian(const LatticeSpec& spec, std::optional<double> flux_rate)
    : offset_(spec.first_site()), flux_rate_(flux_rate) {
  spec.validate();
  if (flux_rate) {
    if (spec.geometry != Geometry::Ring) {
      throw ParameterError("a flux rate applies to the ring geometry only");
    }
    require_finite(*flux_rate, "flux rate");
  }
  const int d = spec.dim();
  diagonal_ = Eigen::MatrixXcd::Zero(d, d);
  forward_ = Eigen::MatrixXcd::Zero(d, d);
  backward_ = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    diagonal_(k, k) = spec.force * static_cast<double>(offset_ + k);
  }
  for (int k = 0; k + 1 < d; ++k) {
    forward_(k, k + 1) += spec.kappa1;
    backward_(k + 1, k) += spec.kappa2;
  }
  if (spec.geometry == Geometry::Ring) {
    forward_(d - 1, 0) += spec.kappa1;
    backward_(0, d - 1) += spec.kappa2;
  }
}

void PhasedHamiltonian::evaluate(double t, Eigen::MatrixXcd& out) const {
  if (!flux_rate_) {
    out = diagonal_ + forward_ + backward_;
    return;
  }
  const Complex phase = std::polar(1.0, *flux_rate_ * t);
  out = diagonal_ + phase * forward_ + std::conj(phase) * backward_;
}

Eigen::MatrixXcd PhasedHamiltonian::at(double t) const {
  Eigen::MatrixXcd m;
  evaluate(t, m);
  return m;
}

HamiltonianMatrix build_hamiltonian(const LatticeSpec& spec) {
  return hamiltonian_at(spec, 0.0, std::nullopt);
}

HamiltonianMatrix hamiltonian_at(const LatticeSpec& spec, double t,
                                 std::optional<double> flux_rate) {
  const PhasedHamiltonian h(spec, flux_rate);
  return {h.offset(), h.at(t)};
}

StateVector rhs(const LatticeSpec& spec, double t, const StateVector& state,
                std::optional<double> flux_rate) {
  state.validate();
  const PhasedHamiltonian h(spec, flux_rate);
  if (state.size() != spec.dim() || state.offset != spec.first_site()) {
    throw ParameterError("state dimension does not match the lattice");
  }
  return {state.offset, Complex(0.0, -1.0) * (h.at(t) * state.amps)};
}

}  // namespace nhl
