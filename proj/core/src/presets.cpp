#include "nhlattice/presets.hpp"

#include <cmath>
#include <numbers>

namespace nhl {

BlochPreset bloch_preset(BlochVariant variant) {
  constexpr int kLastSite = 15;
  constexpr double kForce = -0.6;

  BlochPreset p;
  p.spec.geometry = Geometry::FiniteChain;
  p.spec.sites = kLastSite + 1;
  p.spec.kappa1 = 1.0;
  p.spec.kappa2 = variant == BlochVariant::Hermitian ? Complex{1.0, 0.0} : Complex{};
  p.spec.force = kForce;
  p.gaussian_center = kLastSite / 2.0;
  p.gaussian_width = 3.0;
  p.initial = StateVector::gaussian(p.spec, p.gaussian_center, p.gaussian_width);
  p.period = 2.0 * std::numbers::pi / std::abs(kForce);
  p.config.t_end = 3.0 * p.period;
  p.config.dt = p.period / 1e4;
  p.config.method = Method::RK4;
  p.config.record_every = 10;
  return p;
}

}  // namespace nhl
