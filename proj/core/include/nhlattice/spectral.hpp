#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhlattice/lattice.hpp"

namespace nhl {

struct DispersionSample {
  double q;
  Complex energy;
};

/// E(q) = kappa1 e^{iq} for each q in [-pi, pi).
std::vector<DispersionSample> bloch_dispersion(Complex kappa1, std::span<const double> q_values);

/// A group of numerically coincident eigenvalues and its Jordan structure.
struct EigenCluster {
  Complex value;
  int multiplicity = 1;
  /// Sizes of the Jordan blocks, largest first. Sums to multiplicity.
  std::vector<int> jordan_blocks{1};
  /// Largest block size; 1 means the eigenvalue is semisimple.
  int ep_order = 1;
  /// rank((H - value I)^k) for k = 0..multiplicity+1; empty for simple eigenvalues.
  std::vector<int> rank_sequence;
  /// Expected eigenvalue spread ||H|| eps^(1/ep_order) of a floating point
  /// eigensolve near a block of this order.
  double perturbation_radius = 0.0;
  /// Singular values fell within a decade of the rank threshold.
  bool rank_ambiguous = false;
};

struct SpectrumReport {
  std::vector<Complex> eigenvalues;
  /// Columns are right eigenvectors; absent when the matrix is defective.
  std::optional<Eigen::MatrixXcd> eigenvectors;
  std::vector<EigenCluster> clusters;
  bool is_defective = false;
  /// Absolute clustering distance actually used.
  double cluster_tolerance = 0.0;
  /// Diagnostics that did not abort the analysis.
  std::vector<std::string> warnings;
};

struct SpectrumOptions {
  /// Eigenvalues closer than cluster_tol * max|H_nm| are merged.
  double cluster_tol = 1e-8;
  /// Relative rank threshold; rank((H - lI)^k) counts singular values above
  /// rank_tol * ||H - lI||_2^k. Defaults to dim * machine epsilon.
  std::optional<double> rank_tol;
};

/// Dense eigensolve followed by clustering and rank-sequence Jordan analysis.
SpectrumReport analyze_spectrum(const HamiltonianMatrix& h, const SpectrumOptions& options = {});

/// Closed-form ring spectrum kappa1 e^{i q_k} + kappa2 e^{-i q_k},
/// q_k = 2 pi k / (N+1), cross-checked against a dense eigensolve.
/// Requires the ring geometry with zero force.
SpectrumReport ring_spectrum(const LatticeSpec& spec);

struct WannierStarkState {
  long ladder_index = 0;
  Complex energy;
  /// a_n over the lattice (or window) sites.
  StateVector amplitudes;
  /// Weight sum_{n < first site} |a_n|^2 cut off by the window (0 for the finite chain).
  double tail_weight = 0.0;
};

/// Eigenstates of the forced unidirectional chain: a_l = 1,
/// a_n = (kappa1/F)^{l-n} / (l-n)! for n < l, zero above l; energy l F.
std::vector<WannierStarkState> wannier_stark_states(const LatticeSpec& spec,
                                                    std::span<const long> l_range);

}  // namespace nhl
