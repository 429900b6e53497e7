#include "lamcav/records.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "lamcav/params_io.hpp"

#ifndef LAMCAV_VERSION
#define LAMCAV_VERSION "unknown"
#endif

namespace lamcav {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "axis,value,scheme,method,fidelity,error,gap,status\n";
  for (const auto& r : rows)
    os << r.axis << ',' << format_number(r.value) << ',' << r.scheme << ',' << r.method << ','
       << format_number(r.fidelity) << ',' << format_number(r.error) << ',' << format_number(r.gap) << ','
       << r.status << '\n';
}

void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows) {
  os << "scheme,static_error,max_fidelity,gap_at_2pct,convergence_time_at_2pct,needs_confinement,"
        "omega_at_2pct,inverse_gap_us,status\n";
  for (const auto& r : rows)
    os << to_string(r.scheme) << ',' << format_number(r.static_error) << ',' << format_number(r.max_fidelity)
       << ',' << format_number(r.gap_at_2pct) << ',' << format_number(r.convergence_time_us) << ','
       << (r.needs_confinement ? "yes" : "no") << ',' << format_number(r.Omega_at_2pct) << ','
       << format_number(r.inverse_gap_us) << ',' << r.status << '\n';
}

void write_trajectory_csv(std::ostream& os, const std::vector<PopulationRow>& rows) {
  os << "method,t,P_00,P_T,P_11,P_S,P_excited_total,fidelity\n";
  for (const auto& r : rows)
    os << r.method << ',' << format_number(r.t) << ',' << format_number(r.P_00) << ',' << format_number(r.P_T)
       << ',' << format_number(r.P_11) << ',' << format_number(r.P_S) << ',' << format_number(r.P_excited_total)
       << ',' << format_number(r.fidelity) << '\n';
}

void write_table1_text(std::ostream& os, const std::vector<Table1Row>& rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%-9s %10s %10s %12s %12s %10s %12s\n", "scheme", "1-F static", "F max",
                "gap [g]", "t_conv [us]", "1/gap [us]", "confinement");
  os << line;
  for (const auto& r : rows) {
    if (r.status != "ok") {
      std::snprintf(line, sizeof line, "%-9s %10.4f  %s\n", to_string(r.scheme), r.static_error, r.status.c_str());
    } else {
      std::snprintf(line, sizeof line, "%-9s %10.4f %9.2f%% %12.3e %12.2f %10.2f %12s\n", to_string(r.scheme),
                    r.static_error, 100.0 * r.max_fidelity, r.gap_at_2pct, r.convergence_time_us,
                    r.inverse_gap_us, r.needs_confinement ? "yes" : "no");
    }
    os << line;
  }
}

nlohmann::json matrix_json(const MatC& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array(), ii = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

nlohmann::json spectrum_json(const SpectrumReport& s) {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& z : s.eigenvalues) ev.push_back({z.real(), z.imag()});
  return {{"eigenvalues", ev}, {"gap", s.gap}, {"steady_dim", s.steady_dim}, {"degeneracy_tol", s.degeneracy_tol}};
}

nlohmann::json effective_model_json(const EffectiveModel& em) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& l : em.ground->labels()) basis.push_back(to_string(l));
  nlohmann::json ops = nlohmann::json::object();
  for (std::size_t k = 0; k < em.L_eff.size(); ++k) ops[em.labels[k]] = matrix_json(em.L_eff[k]);
  nlohmann::json out = {{"basis", basis}, {"dressed", em.dressed}, {"H_eff", matrix_json(em.H_eff)}, {"L_eff", ops}};
  if (em.dressed) out["ground_energies"] = em.ground_energies;
  return out;
}

nlohmann::json rate_matrix_json(const RateMatrix& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) rows.push_back({r.R(i, 0), r.R(i, 1), r.R(i, 2), r.R(i, 3)});
  return {{"order", {"T+", "T-", "Tr", "S"}}, {"R", rows}};
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const char* code_version() { return LAMCAV_VERSION; }

RunRecord make_record(const std::string& command, const std::string& scheme, const SystemParams& p,
                      nlohmann::json config) {
  RunRecord r;
  r.command = command;
  r.scheme = scheme;
  r.params = p;
  config["command"] = command;
  config["scheme"] = scheme;
  config["params"] = params_to_json(p);
  r.config = std::move(config);
  r.code_version = code_version();
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  r.timestamp = buf;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(r.config.dump())));
  r.config_hash = hex;
  return r;
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : r.outputs) outs.push_back({{"name", o.name}, {"method", o.method}, {"value", o.value}});
  return {{"command", r.command},
          {"scheme", r.scheme},
          {"params", params_to_json(r.params)},
          {"config", r.config},
          {"outputs", outs},
          {"provenance", {{"code_version", r.code_version}, {"timestamp", r.timestamp}, {"config_hash", r.config_hash}}}};
}

}  // namespace lamcav
