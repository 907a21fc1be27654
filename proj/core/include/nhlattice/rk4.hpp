#pragma once

// Classical fixed-step fourth-order Runge-Kutta for linear systems
// i dy/dt = H(t) y, where y is a vector or a matrix of column states.

#include <complex>

#include <Eigen/Dense>

namespace nhl::rk4 {

/// One step of size h from time t. `generator(t, out)` writes H(t) into out.
template <class State, class Generator>
void step(State& y, double t, double h, const Generator& generator) {
  const std::complex<double> minus_i{0.0, -1.0};
  Eigen::MatrixXcd hmat;

  generator(t, hmat);
  const State k1 = minus_i * (hmat * y);
  generator(t + 0.5 * h, hmat);
  const State k2 = minus_i * (hmat * (y + (0.5 * h) * k1));
  const State k3 = minus_i * (hmat * (y + (0.5 * h) * k2));
  generator(t + h, hmat);
  const State k4 = minus_i * (hmat * (y + h * k3));
  y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Same as step() for a time-independent generator.
template <class State>
void step_static(State& y, double h, const Eigen::MatrixXcd& hmat) {
  const std::complex<double> minus_i{0.0, -1.0};
  const State k1 = minus_i * (hmat * y);
  const State k2 = minus_i * (hmat * (y + (0.5 * h) * k1));
  const State k3 = minus_i * (hmat * (y + (0.5 * h) * k2));
  const State k4 = minus_i * (hmat * (y + h * k3));
  y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace nhl::rk4
