#include "nhlattice/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "nhlattice/errors.hpp"

namespace nhl {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct RankResult {
  int rank = 0;
  bool ambiguous = false;
};

RankResult numerical_rank(const Eigen::MatrixXcd& m, double threshold) {
  if (m.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  RankResult r;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++r.rank;
    if (threshold > 0.0 && sv(i) > threshold / 10.0 && sv(i) < threshold * 10.0) {
      r.ambiguous = true;
    }
  }
  return r;
}

// Single-linkage grouping of eigenvalues within tol of each other.
std::vector<std::vector<int>> group_eigenvalues(const std::vector<Complex>& values, double tol) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

bool complex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Jordan block sizes from r_k = rank(A^k), k = 0..m+1. The number of blocks
// of size >= k is r_{k-1} - r_k.
std::vector<int> blocks_from_ranks(const std::vector<int>& ranks) {
  std::vector<int> blocks;
  const int kmax = static_cast<int>(ranks.size()) - 2;
  for (int k = 1; k <= kmax; ++k) {
    const int at_least_k = ranks[k - 1] - ranks[k];
    const int at_least_k1 = ranks[k] - ranks[k + 1];
    for (int c = 0; c < at_least_k - at_least_k1; ++c) blocks.push_back(k);
  }
  std::sort(blocks.rbegin(), blocks.rend());
  return blocks;
}

EigenCluster analyze_cluster(const Eigen::MatrixXcd& h, Complex value, int multiplicity,
                             double rank_tol, double norm_h, std::vector<std::string>& warnings) {
  EigenCluster c;
  c.value = value;
  c.multiplicity = multiplicity;
  c.jordan_blocks = {1};
  c.ep_order = 1;
  if (multiplicity == 1) return c;

  const int d = static_cast<int>(h.rows());
  const Eigen::MatrixXcd shifted = h - value * Eigen::MatrixXcd::Identity(d, d);
  const double shift_norm = Eigen::BDCSVD<Eigen::MatrixXcd>(shifted).singularValues()(0);

  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(d, d);
  c.rank_sequence.push_back(d);
  double scale = 1.0;
  for (int k = 1; k <= multiplicity + 1; ++k) {
    power = shifted * power;
    scale *= shift_norm;
    const double threshold = std::max(rank_tol * scale, std::numeric_limits<double>::min());
    const RankResult r = numerical_rank(power, threshold);
    c.rank_sequence.push_back(r.rank);
    c.rank_ambiguous = c.rank_ambiguous || r.ambiguous;
  }

  std::vector<int> blocks = blocks_from_ranks(c.rank_sequence);
  int total = std::accumulate(blocks.begin(), blocks.end(), 0);
  if (total != multiplicity) {
    warnings.push_back("Jordan structure at eigenvalue (" + std::to_string(value.real()) + ", " +
                       std::to_string(value.imag()) + "): rank sequence accounts for " +
                       std::to_string(total) + " of " + std::to_string(multiplicity) +
                       " clustered eigenvalues");
    while (total > multiplicity && !blocks.empty()) {
      const int excess = total - multiplicity;
      if (blocks.back() <= excess) {
        total -= blocks.back();
        blocks.pop_back();
      } else {
        blocks.back() -= excess;
        total = multiplicity;
      }
    }
    for (; total < multiplicity; ++total) blocks.push_back(1);
    std::sort(blocks.rbegin(), blocks.rend());
  }
  if (c.rank_ambiguous) {
    warnings.push_back("rank decision near eigenvalue (" + std::to_string(value.real()) + ", " +
                       std::to_string(value.imag()) +
                       ") is ill-conditioned: singular values within a factor 10 of threshold");
  }
  c.jordan_blocks = std::move(blocks);
  c.ep_order = c.jordan_blocks.front();
  if (c.ep_order > 1) {
    c.perturbation_radius = norm_h * std::pow(kEps, 1.0 / c.ep_order);
  }
  return c;
}

void finalize_clusters(SpectrumReport& report) {
  std::sort(report.clusters.begin(), report.clusters.end(),
            [](const EigenCluster& a, const EigenCluster& b) { return complex_less(a.value, b.value); });
  report.is_defective = std::any_of(report.clusters.begin(), report.clusters.end(),
                                    [](const EigenCluster& c) { return c.ep_order > 1; });
}

}  // namespace

std::vector<DispersionSample> bloch_dispersion(Complex kappa1, std::span<const double> q_values) {
  require_finite(kappa1, "kappa1");
  std::vector<DispersionSample> out;
  out.reserve(q_values.size());
  for (double q : q_values) {
    require_finite(q, "Bloch wave number");
    if (q < -std::numbers::pi || q >= std::numbers::pi) {
      throw ParameterError("Bloch wave number must lie in [-pi, pi)");
    }
    out.push_back({q, kappa1 * std::polar(1.0, q)});
  }
  return out;
}

SpectrumReport analyze_spectrum(const HamiltonianMatrix& h, const SpectrumOptions& options) {
  if (!(options.cluster_tol > 0.0)) throw ParameterError("cluster tolerance must be positive");
  const int d = h.dim();
  if (d < 1 || h.entries.cols() != d) throw ParameterError("Hamiltonian must be a non-empty square matrix");
  if (!h.entries.allFinite()) throw ParameterError("Hamiltonian contains non-finite entries");
  const double rank_tol = options.rank_tol.value_or(d * kEps);
  if (!(rank_tol > 0.0)) throw ParameterError("rank tolerance must be positive");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h.entries, true);
  if (solver.info() != Eigen::Success) throw ComputationError("dense eigensolver did not converge");

  SpectrumReport report;
  report.eigenvalues.assign(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + solver.eigenvalues().size());
  const double max_entry = h.max_abs_entry();
  report.cluster_tolerance = options.cluster_tol * (max_entry > 0.0 ? max_entry : 1.0);
  const double norm_h = d > 0 ? Eigen::BDCSVD<Eigen::MatrixXcd>(h.entries).singularValues()(0) : 0.0;

  for (const auto& group : group_eigenvalues(report.eigenvalues, report.cluster_tolerance)) {
    Complex mean{};
    for (int i : group) mean += report.eigenvalues[i];
    mean /= static_cast<double>(group.size());
    report.clusters.push_back(analyze_cluster(h.entries, mean, static_cast<int>(group.size()),
                                              rank_tol, norm_h, report.warnings));
  }
  finalize_clusters(report);
  if (!report.is_defective) report.eigenvectors = solver.eigenvectors();
  return report;
}

SpectrumReport ring_spectrum(const LatticeSpec& spec) {
  spec.validate();
  if (spec.geometry != Geometry::Ring) throw ParameterError("ring_spectrum requires the ring geometry");
  if (spec.force != 0.0) throw ParameterError("ring_spectrum requires zero force");

  const int d = spec.dim();
  SpectrumReport report;
  Eigen::MatrixXcd vectors(d, d);
  for (int k = 0; k < d; ++k) {
    const double q = 2.0 * std::numbers::pi * k / d;
    report.eigenvalues.push_back(spec.kappa1 * std::polar(1.0, q) + spec.kappa2 * std::polar(1.0, -q));
    for (int n = 0; n < d; ++n) vectors(n, k) = std::polar(1.0 / std::sqrt(d), q * n);
  }
  report.eigenvectors = std::move(vectors);

  // Cross-check against the dense eigensolve, pairing nearest eigenvalues.
  const HamiltonianMatrix h = build_hamiltonian(spec);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h.entries, false);
  if (solver.info() != Eigen::Success) throw ComputationError("dense eigensolver did not converge");
  const double tol = 1e-10 * std::max(1.0, h.max_abs_entry());
  std::vector<bool> used(d, false);
  for (Complex analytic : report.eigenvalues) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d; ++i) {
      const double dist = std::abs(solver.eigenvalues()(i) - analytic);
      if (!used[i] && dist < best_dist) {
        best = i;
        best_dist = dist;
      }
    }
    if (best < 0 || best_dist > tol) {
      throw ComputationError("ring spectrum disagrees with dense eigensolve (distance " +
                             std::to_string(best_dist) + ")");
    }
    used[best] = true;
  }

  const double max_entry = h.max_abs_entry();
  report.cluster_tolerance = 1e-8 * (max_entry > 0.0 ? max_entry : 1.0);
  for (const auto& group : group_eigenvalues(report.eigenvalues, report.cluster_tolerance)) {
    EigenCluster c;
    c.value = report.eigenvalues[group.front()];
    c.multiplicity = static_cast<int>(group.size());
    c.jordan_blocks.assign(group.size(), 1);
    report.clusters.push_back(std::move(c));
  }
  finalize_clusters(report);
  return report;
}

std::vector<WannierStarkState> wannier_stark_states(const LatticeSpec& spec,
                                                    std::span<const long> l_range) {
  spec.validate();
  if (spec.force == 0.0) {
    throw ParameterError("Wannier-Stark ladder undefined for zero force; use analyze_spectrum");
  }
  if (!spec.unidirectional()) throw ParameterError("Wannier-Stark closed form requires kappa2 = 0");
  if (spec.geometry == Geometry::Ring) {
    throw ParameterError("Wannier-Stark closed form applies to chain geometries only");
  }

  const Complex ratio = spec.kappa1 / spec.force;
  const long first = spec.first_site();
  const long last = spec.last_site();
  std::vector<WannierStarkState> out;
  out.reserve(l_range.size());
  for (long l : l_range) {
    if (l < first || l > last) {
      throw ParameterError("ladder index " + std::to_string(l) + " outside sites [" +
                           std::to_string(first) + ", " + std::to_string(last) + "]");
    }
    WannierStarkState s;
    s.ladder_index = l;
    s.energy = spec.force * static_cast<double>(l);
    s.amplitudes = StateVector::zeros(spec);
    Complex term{1.0, 0.0};
    s.amplitudes.amps(l - first) = term;
    long k = 0;
    for (long n = l - 1; n >= first; --n) {
      ++k;
      term *= ratio / static_cast<double>(k);
      s.amplitudes.amps(n - first) = term;
    }
    if (spec.geometry == Geometry::InfiniteChain) {
      // Continue the factorial series below the window until it is negligible.
      double tail = 0.0;
      for (int guard = 0; guard < 100000; ++guard) {
        ++k;
        term *= ratio / static_cast<double>(k);
        const double w = std::norm(term);
        tail += w;
        if (w <= 1e-17 * tail && static_cast<double>(k) > std::abs(ratio)) break;
      }
      s.tail_weight = tail;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace nhl
