#include "nhlattice/io.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "nhlattice/errors.hpp"

void nlohmann::adl_serializer<std::complex<double>>::from_json(const json& j, std::complex<double>& z) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw nhl::ParameterError("complex numbers must be JSON pairs [re, im]");
  }
  z = {j[0].get<double>(), j[1].get<double>()};
}

namespace nhl {
namespace {

double parse_real(const std::string& text, std::string_view whole) {
  if (text.empty() || text == "+") return 1.0;
  if (text == "-") return -1.0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    throw ParameterError("malformed complex literal '" + std::string(whole) + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* method_name(Method m) { return m == Method::RK4 ? "rk4" : "closed-form"; }

Method parse_method(const std::string& s) {
  if (s == "rk4") return Method::RK4;
  if (s == "closed-form") return Method::ClosedForm;
  throw ParameterError("unknown method '" + s + "' (expected rk4 or closed-form)");
}

}  // namespace

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw ParameterError("empty complex literal");
  if (s.back() != 'i' && s.back() != 'j') {
    const double re = parse_real(s, text);
    if (s == "+" || s == "-") throw ParameterError("malformed complex literal '" + std::string(text) + "'");
    return {re, 0.0};
  }
  s.pop_back();
  // The split point is the last sign that does not belong to an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, parse_real(s, text)};
  const std::string re_part = s.substr(0, split);
  if (re_part == "+" || re_part == "-") {
    throw ParameterError("malformed complex literal '" + std::string(text) + "'");
  }
  return {parse_real(re_part, text), parse_real(s.substr(split), text)};
}

std::string format_complex(Complex z) {
  std::string out = format_double(z.real());
  const double im = z.imag();
  out += (std::signbit(im) ? "-" : "+");
  out += format_double(std::abs(im));
  out += "i";
  return out;
}

void to_json(Json& j, const SiteWindow& w) { j = Json{{"n_min", w.n_min}, {"n_max", w.n_max}}; }

void from_json(const Json& j, SiteWindow& w) {
  w.n_min = j.at("n_min").get<long>();
  w.n_max = j.at("n_max").get<long>();
}

void to_json(Json& j, const LatticeSpec& s) {
  j = Json{{"geometry", std::string(to_string(s.geometry))},
           {"sites", s.sites},
           {"kappa1", s.kappa1},
           {"kappa2", s.kappa2},
           {"force", s.force},
           {"window", s.window}};
}

void from_json(const Json& j, LatticeSpec& s) {
  LatticeSpec d;
  d.geometry = parse_geometry(j.value("geometry", std::string("chain")));
  d.sites = j.value("sites", d.sites);
  if (j.contains("kappa1")) d.kappa1 = j.at("kappa1").get<Complex>();
  if (j.contains("kappa2")) d.kappa2 = j.at("kappa2").get<Complex>();
  d.force = j.value("force", d.force);
  if (j.contains("window")) d.window = j.at("window").get<SiteWindow>();
  s = d;
}

void to_json(Json& j, const EvolveConfig& c) {
  j = Json{{"t_end", c.t_end},
           {"dt", c.dt},
           {"method", method_name(c.method)},
           {"record_every", c.record_every},
           {"normalize", c.normalize}};
}

void from_json(const Json& j, EvolveConfig& c) {
  EvolveConfig d;
  d.t_end = j.value("t_end", d.t_end);
  d.dt = j.value("dt", d.dt);
  d.method = parse_method(j.value("method", std::string("rk4")));
  d.record_every = j.value("record_every", d.record_every);
  d.normalize = j.value("normalize", d.normalize);
  c = d;
}

void to_json(Json& j, const FluxDrive& d) { j = Json{{"phi0_rate", d.phi0_rate}, {"sites", d.sites}}; }

void from_json(const Json& j, FluxDrive& d) {
  d.phi0_rate = j.at("phi0_rate").get<double>();
  d.sites = j.at("sites").get<int>();
}

void to_json(Json& j, const ModulationProtocol& p) {
  j = Json{{"theta", p.theta}, {"alpha", p.alpha}, {"beta", p.beta}, {"T1", p.T1}, {"T", p.T}};
}

void from_json(const Json& j, ModulationProtocol& p) {
  p.theta = j.at("theta").get<double>();
  p.alpha = j.at("alpha").get<double>();
  p.beta = j.at("beta").get<double>();
  p.T1 = j.at("T1").get<double>();
  p.T = j.at("T").get<double>();
}

void to_json(Json& j, const LaserParams& p) {
  j = Json{{"g", p.g},       {"l", p.l},        {"Dg", p.Dg}, {"delta_am", p.delta_am},
           {"delta_fm", p.delta_fm}, {"phi", p.phi}, {"F", p.F}};
}

void from_json(const Json& j, LaserParams& p) {
  LaserParams d;
  d.g = j.value("g", d.g);
  d.l = j.value("l", d.l);
  d.Dg = j.value("Dg", d.Dg);
  d.delta_am = j.value("delta_am", d.delta_am);
  d.delta_fm = j.value("delta_fm", d.delta_fm);
  d.phi = j.value("phi", d.phi);
  d.F = j.value("F", d.F);
  p = d;
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Complex(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

void to_json(Json& j, const HamiltonianMatrix& h) {
  j = Json{{"dim", h.dim()}, {"offset", h.offset}, {"entries", matrix_to_json(h.entries)}};
}

void to_json(Json& j, const EigenCluster& c) {
  j = Json{{"value", c.value},
           {"multiplicity", c.multiplicity},
           {"jordan_blocks", c.jordan_blocks},
           {"ep_order", c.ep_order},
           {"rank_sequence", c.rank_sequence},
           {"perturbation_radius", c.perturbation_radius},
           {"rank_ambiguous", c.rank_ambiguous}};
}

void to_json(Json& j, const SpectrumReport& r) {
  j = Json{{"eigenvalues", r.eigenvalues},
           {"clusters", r.clusters},
           {"is_defective", r.is_defective},
           {"cluster_tolerance", r.cluster_tolerance},
           {"warnings", r.warnings}};
  j["eigenvectors"] = r.eigenvectors ? matrix_to_json(*r.eigenvectors) : Json(nullptr);
}

void to_json(Json& j, const QuasiEnergyReport& r) {
  j = Json{{"mu", r.mu}, {"force", r.force}, {"period", r.period}};
  j["monodromy_defect"] = r.monodromy_defect ? Json(*r.monodromy_defect) : Json(nullptr);
  j["monodromy"] = r.monodromy ? matrix_to_json(*r.monodromy) : Json(nullptr);
}

void to_json(Json& j, const EffectiveHopping& h) {
  j = Json{{"rho", h.rho},
           {"sigma", h.sigma},
           {"rho_quadrature", h.rho_quadrature},
           {"sigma_quadrature", h.sigma_quadrature},
           {"abs_sigma", std::abs(h.sigma)},
           {"self_check_error", h.self_check_error}};
}

void to_json(Json& j, const UnidirectionalRoot& r) {
  j = Json{{"gamma", r.gamma}, {"rho", r.rho}, {"residual", r.residual}, {"iterations", r.iterations}};
}

void to_json(Json& j, const RwaPoint& p) {
  j = Json{{"omega_ratio", p.omega_ratio}, {"period", p.period},   {"periods", p.periods},
           {"rho", p.rho},                 {"sigma", p.sigma},     {"discrepancy", p.discrepancy}};
}

void to_json(Json& j, const LaserCouplings& c) {
  j = Json{{"forward", c.forward},
           {"backward", c.backward},
           {"onsite", Json{{"force", c.force}, {"net_gain", c.net_gain}, {"curvature", c.curvature}}}};
}

void write_trajectory_csv(std::ostream& out, const StateTrajectory& traj) {
  out << "t,site,re,im\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const StateVector& s = traj.states[k];
    const std::string t = format_double(traj.times[k]);
    for (int i = 0; i < s.size(); ++i) {
      out << t << ',' << (s.offset + i) << ',' << format_double(s.amps(i).real()) << ','
          << format_double(s.amps(i).imag()) << '\n';
    }
  }
  if (!out) throw IoError("failed writing trajectory CSV");
}

void write_observables_csv(std::ostream& out, const StateTrajectory& traj) {
  out << "t,com,weight,revival\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Observables& o = traj.observables[k];
    out << format_double(traj.times[k]) << ',' << format_double(o.center_of_mass) << ','
        << format_double(o.total_weight) << ',' << format_double(o.revival_fidelity) << '\n';
  }
  if (!out) throw IoError("failed writing observables CSV");
}

void write_rwa_csv(std::ostream& out, const std::vector<RwaPoint>& points) {
  out << "ratio,period,periods,discrepancy,rho_re,rho_im,sigma_re,sigma_im\n";
  for (const RwaPoint& p : points) {
    out << format_double(p.omega_ratio) << ',' << format_double(p.period) << ',' << p.periods << ','
        << format_double(p.discrepancy) << ',' << format_double(p.rho.real()) << ','
        << format_double(p.rho.imag()) << ',' << format_double(p.sigma.real()) << ','
        << format_double(p.sigma.imag()) << '\n';
  }
  if (!out) throw IoError("failed writing RWA CSV");
}

}  // namespace nhl
