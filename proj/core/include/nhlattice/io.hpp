#pragma once

// Serialization: complex numbers are [re, im] pairs in JSON, split re/im
// columns in CSV and "a+bi" literals on the command line.

#include <complex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "nhlattice/dynamics.hpp"
#include "nhlattice/engineering.hpp"
#include "nhlattice/floquet.hpp"
#include "nhlattice/lattice.hpp"
#include "nhlattice/spectral.hpp"

namespace nlohmann {

template <>
struct adl_serializer<std::complex<double>> {
  static void to_json(json& j, const std::complex<double>& z) { j = json::array({z.real(), z.imag()}); }
  static void from_json(const json& j, std::complex<double>& z);
};

}  // namespace nlohmann

namespace nhl {

using Json = nlohmann::json;

/// Parses "a+bi", "a-bi", "a", "bi", "i", "-i". Throws ParameterError.
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

void to_json(Json& j, const SiteWindow& w);
void from_json(const Json& j, SiteWindow& w);
void to_json(Json& j, const LatticeSpec& s);
void from_json(const Json& j, LatticeSpec& s);
void to_json(Json& j, const EvolveConfig& c);
void from_json(const Json& j, EvolveConfig& c);
void to_json(Json& j, const FluxDrive& d);
void from_json(const Json& j, FluxDrive& d);
void to_json(Json& j, const ModulationProtocol& p);
void from_json(const Json& j, ModulationProtocol& p);
void to_json(Json& j, const LaserParams& p);
void from_json(const Json& j, LaserParams& p);

void to_json(Json& j, const HamiltonianMatrix& h);
void to_json(Json& j, const EigenCluster& c);
void to_json(Json& j, const SpectrumReport& r);
void to_json(Json& j, const QuasiEnergyReport& r);
void to_json(Json& j, const EffectiveHopping& h);
void to_json(Json& j, const UnidirectionalRoot& r);
void to_json(Json& j, const RwaPoint& p);
void to_json(Json& j, const LaserCouplings& c);

Json matrix_to_json(const Eigen::MatrixXcd& m);

/// Columns: t,site,re,im; one row per recorded time and site.
void write_trajectory_csv(std::ostream& out, const StateTrajectory& traj);
/// Columns: t,com,weight,revival.
void write_observables_csv(std::ostream& out, const StateTrajectory& traj);
/// Columns: ratio,period,periods,discrepancy,rho_re,rho_im,sigma_re,sigma_im.
void write_rwa_csv(std::ostream& out, const std::vector<RwaPoint>& points);

}  // namespace nhl
