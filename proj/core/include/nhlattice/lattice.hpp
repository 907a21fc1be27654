#pragma once

// Domain types and Hamiltonian construction for nearest-neighbour
// tight-binding chains with (possibly) asymmetric hopping.
//
// Equations of motion throughout the library are written as
//
//   i dc_n/dt = kappa1 c_{n+1} + kappa2 c_{n-1} + F n c_n,
//
// so H[n][n+1] = kappa1, H[n+1][n] = kappa2 and H[n][n] = F n.  Setting
// kappa2 = 0 gives the unidirectional lattice where site n is driven by
// site n+1 only.

#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace nhl {

using Complex = std::complex<double>;

enum class Geometry { InfiniteChain, FiniteChain, Ring };

std::string_view to_string(Geometry g);
/// Accepts "infinite", "chain" (or "finite") and "ring".
Geometry parse_geometry(std::string_view name);

/// Absolute site range [n_min, n_max] used to represent the infinite chain.
struct SiteWindow {
  long n_min = -32;
  long n_max = 32;

  bool operator==(const SiteWindow&) const = default;
};

struct LatticeSpec {
  Geometry geometry = Geometry::FiniteChain;
  /// Number of sites N+1; ignored for InfiniteChain.
  int sites = 1;
  Complex kappa1{1.0, 0.0};
  Complex kappa2{0.0, 0.0};
  /// Uniform dc force; adds F n on the diagonal.
  double force = 0.0;
  SiteWindow window{};

  /// Throws ParameterError when an invariant is violated.
  void validate() const;

  int dim() const;
  /// Absolute index of the first amplitude (n_min for the infinite chain, 0 otherwise).
  long first_site() const;
  long last_site() const { return first_site() + dim() - 1; }

  bool unidirectional() const { return kappa2 == Complex{}; }

  bool operator==(const LatticeSpec&) const = default;
};

/// Dense matrix of <n|H|m> over the Wannier basis. Row/column k refers to the
/// absolute site offset + k.
struct HamiltonianMatrix {
  long offset = 0;
  Eigen::MatrixXcd entries;

  int dim() const { return static_cast<int>(entries.rows()); }
  double max_abs_entry() const;
};

/// Amplitudes c_n for n = offset, offset+1, ...
struct StateVector {
  long offset = 0;
  Eigen::VectorXcd amps;

  int size() const { return static_cast<int>(amps.size()); }
  long last_site() const { return offset + size() - 1; }
  /// Amplitude at absolute site n; zero outside the stored range.
  Complex at(long n) const;

  void validate() const;

  /// Zero state over the lattice's sites.
  static StateVector zeros(const LatticeSpec& spec);
  /// delta_{n, n0} over the lattice's sites.
  static StateVector site_excitation(const LatticeSpec& spec, long n0);
  /// exp[-(n - center)^2 / width^2] over the lattice's sites.
  static StateVector gaussian(const LatticeSpec& spec, double center, double width);
};

/// <n|H|m> for the static lattice. Ring wraps add onto existing entries, so a
/// two-site ring carries kappa1 + kappa2 on both off-diagonals.
HamiltonianMatrix build_hamiltonian(const LatticeSpec& spec);

/// H(t) with an optional Peierls flux on a ring: kappa1 -> kappa1 e^{i r t},
/// kappa2 -> kappa2 e^{-i r t} on every bond, including the wrap bond.
HamiltonianMatrix hamiltonian_at(const LatticeSpec& spec, double t,
                                 std::optional<double> flux_rate);

/// dc/dt = -i H(t) c.
StateVector rhs(const LatticeSpec& spec, double t, const StateVector& state,
                std::optional<double> flux_rate = std::nullopt);

/// Splits H(t) = D + e^{i r t} K1 + e^{-i r t} K2 so that time-dependent
/// generators can be re-evaluated without rebuilding the lattice.
class PhasedHamiltonian {
 public:
  PhasedHamiltonian(const LatticeSpec& spec, std::optional<double> flux_rate);

  void evaluate(double t, Eigen::MatrixXcd& out) const;
  Eigen::MatrixXcd at(double t) const;
  bool time_dependent() const { return flux_rate_.has_value(); }
  long offset() const { return offset_; }

 private:
  long offset_;
  std::optional<double> flux_rate_;
  Eigen::MatrixXcd diagonal_;
  Eigen::MatrixXcd forward_;
  Eigen::MatrixXcd backward_;
};

/// Throws ParameterError unless every component is finite.
void require_finite(Complex z, std::string_view what);
void require_finite(double x, std::string_view what);

}  // namespace nhl
