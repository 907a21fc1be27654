#pragma once

#include "nhlattice/dynamics.hpp"
#include "nhlattice/lattice.hpp"

namespace nhl {

/// Bloch-oscillation comparison on a 16-site truncated chain: F = -0.6,
/// kappa1 = 1, Gaussian exp[-(n - 7.5)^2 / 9], three Bloch periods at
/// dt = T_B / 10^4. The two variants differ only in kappa2.
struct BlochPreset {
  LatticeSpec spec;
  StateVector initial;
  /// T_B = 2 pi / |F|.
  double period;
  EvolveConfig config;
  double gaussian_center;
  double gaussian_width;
};

enum class BlochVariant {
  /// kappa2 = kappa1: ordinary Hermitian chain.
  Hermitian,
  /// kappa2 = 0.
  Unidirectional,
};

BlochPreset bloch_preset(BlochVariant variant);

}  // namespace nhl
