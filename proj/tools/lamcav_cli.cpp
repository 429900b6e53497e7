#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "lamcav/errors.hpp"
#include "lamcav/params_io.hpp"
#include "lamcav/records.hpp"
#include "lamcav/reproduce.hpp"

using namespace lamcav;

namespace {

struct ParamFlags {
  std::map<std::string, std::string> values;
  std::string config_file;
  double C = 0.0;
  double ratio = 12.0 / 5.0;
  std::string scheme = "S1";
  PresetOptions preset;
};

void add_param_flags(CLI::App* cmd, ParamFlags& f, bool with_scheme = true) {
  for (const auto& key : param_keys())
    cmd->add_option("--" + key, f.values[key], key + " (number, optionally suffixed by g, gamma or kappa)");
  cmd->add_option("--config", f.config_file, "parameter file (.json or key = value lines)");
  cmd->add_option("--C", f.C, "cooperativity; sets gamma and kappa at fixed gamma/kappa")->check(CLI::PositiveNumber);
  cmd->add_option("--ratio", f.ratio, "gamma/kappa used with --C")->check(CLI::PositiveNumber);
  cmd->add_option("--mw-divisor", f.preset.mw_divisor, "T0/S0/T1: Omega_MW = Omega / divisor");
  cmd->add_option("--ws-delta-factor", f.preset.ws_delta_factor, "WS: Delta = factor g^2 / kappa");
  if (with_scheme) cmd->add_option("--scheme", f.scheme, "S1 S0 T0 T1 mix WS, or custom for no preset");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "0.1gamma" -> 0.1 * p.gamma
double parse_value(const std::string& key, const std::string& text, const SystemParams& p) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "--" + key + ": '" + text + "' is not a number");
  }
  const std::string unit = text.substr(used);
  if (unit.empty()) return x;
  if (unit == "g") return x * p.g;
  if (unit == "gamma") return x * p.gamma;
  if (unit == "kappa") return x * p.kappa;
  throw Error(ErrorCode::Parse, "--" + key + ": unknown unit '" + unit + "'");
}

struct Resolved {
  SystemParams params;
  std::optional<SchemeId> scheme;
};

Resolved resolve(const ParamFlags& f) {
  SystemParams p;
  if (!f.config_file.empty()) {
    const std::string text = read_file(f.config_file);
    p = f.config_file.ends_with(".json") ? params_from_json(nlohmann::json::parse(text)) : params_from_kv(text);
  }
  auto apply = [&](const std::string& key) {
    const auto it = f.values.find(key);
    if (it == f.values.end() || it->second.empty()) return false;
    set_param(p, key, parse_value(key, it->second, p));
    return true;
  };
  apply("g");
  if (f.C > 0.0) {
    rates_for_cooperativity(f.C, f.ratio, p.gamma, p.kappa);
    p.gamma *= p.g;
    p.kappa *= p.g;
  }
  apply("gamma");
  apply("kappa");
  if (!apply("Omega") && f.config_file.empty()) p.Omega = p.gamma / 10.0;
  Resolved r;
  if (f.scheme != "custom") {
    r.scheme = parse_scheme(f.scheme);
    if (!r.scheme) throw Error(ErrorCode::Parse, "unknown scheme '" + f.scheme + "'");
    const int n_max = p.n_max;
    p = preset(*r.scheme, p.g, p.gamma, p.kappa, p.Omega, f.preset);
    p.n_max = n_max;
  }
  for (const auto& key : param_keys())
    if (key != "g" && key != "gamma" && key != "kappa" && key != "Omega") apply(key);
  p.validate();
  r.params = p;
  return r;
}

std::vector<SchemeId> parse_scheme_list(const std::vector<std::string>& names) {
  std::vector<SchemeId> out;
  for (const auto& n : names) {
    if (n == "all") return {kAllSchemes.begin(), kAllSchemes.end()};
    auto id = parse_scheme(n);
    if (!id) throw Error(ErrorCode::Parse, "unknown scheme '" + n + "'");
    out.push_back(*id);
  }
  return out;
}

std::vector<double> grid(double from, double to, int points, bool log) {
  if (points < 1) throw Error(ErrorCode::InvalidArgument, "--points must be >= 1");
  if (!(to >= from)) throw Error(ErrorCode::InvalidArgument, "range must be monotone (from <= to)");
  if (log && !(from > 0.0)) throw Error(ErrorCode::InvalidArgument, "log grid needs from > 0");
  std::vector<double> v;
  for (int i = 0; i < points; ++i) {
    const double s = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    v.push_back(log ? from * std::pow(to / from, s) : from + s * (to - from));
  }
  return v;
}

// Writes to path, or stdout when path is empty or "-".
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path);
  write(out);
}

int cmd_steady(const ParamFlags& f, const std::string& json_out, const std::string& spectrum_out) {
  const auto r = resolve(f);
  const auto& p = r.params;
  const std::string name = r.scheme ? to_string(*r.scheme) : "custom";
  auto rec = make_record("steady", name, p, {});
  std::cout << "scheme " << name << "  C = " << format_number(p.cooperativity()) << "\n";
  if (r.scheme == SchemeId::T0S0_mix) {
    const auto s = scheme_steady(*r.scheme, p.g, p.gamma, p.kappa, p.Omega, f.preset);
    rec.outputs = {{"fidelity", "full", s.fidelity},
                   {"fidelity", "effective", s.effective_fidelity},
                   {"gap", "effective", s.gap},
                   {"error", "analytic", s.analytic_error},
                   {"gap", "analytic", s.analytic_gap}};
  } else {
    const auto full = steady_full(p, true);
    rec.outputs = {{"fidelity", "full", full.fidelity},
                   {"gap", "full", full.gap},
                   {"residual", "full", full.info.residual},
                   {"min_eigenvalue", "full", full.info.min_eigenvalue}};
    try {
      const auto eff = steady_effective(p, false, true);
      rec.outputs.push_back({"fidelity", "effective", eff.fidelity});
      rec.outputs.push_back({"gap", "effective", eff.gap});
    } catch (const Error& e) {
      warn(std::string("effective model: ") + e.what());
    }
    if (r.scheme) {
      const double err = *r.scheme == SchemeId::S1   ? combined_error_S1(p).total
                         : *r.scheme == SchemeId::WS ? ws_analytics(p).total_error
                                                     : static_error(*r.scheme, p.cooperativity());
      const double gap = *r.scheme == SchemeId::S1 ? gap_S1_dressed(p) : gap_analytic(*r.scheme, p);
      rec.outputs.push_back({"error", "analytic", err});
      rec.outputs.push_back({"gap", "analytic", gap});
      rec.outputs.push_back({"fidelity_deviation", "full-analytic", full.fidelity - (1.0 - err)});
      rec.outputs.push_back({"gap_ratio", "full/analytic", full.gap / gap});
    }
    if (!spectrum_out.empty())
      emit(spectrum_out, [&](std::ostream& os) { os << spectrum_json(full.spectrum).dump(2) << "\n"; });
  }
  for (const auto& o : rec.outputs)
    std::cout << "  " << o.name << " [" << o.method << "] = " << format_number(o.value) << "\n";
  if (!json_out.empty()) emit(json_out, [&](std::ostream& os) { os << to_json(rec).dump(2) << "\n"; });
  return 0;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Dissipative entanglement of two Lambda atoms in a lossy cavity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", code_version());

  ParamFlags steady_f;
  std::string steady_json, steady_spectrum;
  auto* steady = app.add_subcommand("steady", "steady state, fidelity and gap of one parameter point");
  add_param_flags(steady, steady_f);
  steady->add_option("--json", steady_json, "write the run record as JSON");
  steady->add_option("--spectrum", steady_spectrum, "write the Liouvillian spectrum as JSON");

  ParamFlags sweep_f;
  std::string axis = "cooperativity", sweep_out;
  std::vector<std::string> sweep_schemes = {"S1"};
  double from = 10.0, to = 1000.0;
  int points = 9;
  bool log_grid = false;
  auto* sweep = app.add_subcommand("sweep", "parameter sweep written as CSV");
  add_param_flags(sweep, sweep_f, false);
  sweep->add_option("--axis", axis, "cooperativity | drive | time | asymmetry")
      ->check(CLI::IsMember({"cooperativity", "drive", "time", "asymmetry"}));
  sweep->add_option("--schemes", sweep_schemes, "scheme list or 'all'")->delimiter(',');
  sweep->add_option("--from", from);
  sweep->add_option("--to", to);
  sweep->add_option("--points", points);
  sweep->add_flag("--log", log_grid, "logarithmic grid");
  sweep->add_option("--out", sweep_out, "CSV path (default stdout)");

  ParamFlags table_f;
  std::string table_csv;
  Table1Options table_opts;
  auto* table = app.add_subcommand("table1", "characteristic measures at 2% dynamic error for all schemes");
  add_param_flags(table, table_f, false);
  table->add_option("--csv", table_csv, "CSV path");
  table->add_option("--g-MHz", table_opts.g_over_2pi_MHz, "g / 2pi in MHz for the time conversion");

  ParamFlags traj_f;
  TrajectoryRequest treq;
  std::vector<std::string> methods = {"full", "effective", "dressed_effective", "rate"};
  std::string integrator = "exact", traj_out;
  double t_final = -1.0;
  auto* traj = app.add_subcommand("trajectory", "population dynamics from several methods as CSV");
  add_param_flags(traj, traj_f);
  traj->add_option("--initial", treq.initial, "mixed | triplet | S | T | 00 | 11 | ...");
  traj->add_option("--t-final", t_final, "final time in 1/g (default 8 / analytic gap)");
  traj->add_option("--samples", treq.samples);
  traj->add_option("--methods", methods, "full,effective,dressed_effective,rate")->delimiter(',');
  traj->add_option("--integrator", integrator)->check(CLI::IsMember({"exact", "rk4"}));
  traj->add_option("--dt", treq.rk4_dt, "RK4 step");
  traj->add_option("--out", traj_out, "CSV path (default stdout)");

  ParamFlags red_f;
  bool dressed = false, selective = false;
  std::string red_out;
  auto* red = app.add_subcommand("reduce", "dump the effective ground-state model as JSON");
  add_param_flags(red, red_f);
  red->add_flag("--dressed", dressed, "shift propagators by the ground-state energies");
  red->add_flag("--selective", selective, "dressed: shift only the near-resonant excited modes");
  red->add_option("--out", red_out, "JSON path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (*steady) return cmd_steady(steady_f, steady_json, steady_spectrum);

  if (*sweep) {
    const auto r = resolve([&] {
      ParamFlags f = sweep_f;
      f.scheme = "custom";
      return f;
    }());
    SweepBase base;
    base.g = r.params.g;
    base.gamma = r.params.gamma;
    base.kappa = r.params.kappa;
    base.Omega = r.params.Omega;
    base.ratio = sweep_f.ratio;
    base.preset = sweep_f.preset;
    const auto schemes = parse_scheme_list(sweep_schemes);
    const auto xs = grid(from, to, points, log_grid);
    std::vector<SweepRow> rows;
    if (axis == "cooperativity") rows = sweep_cooperativity(schemes, xs, base);
    if (axis == "drive") rows = sweep_drive(schemes, xs, base);
    if (axis == "time") rows = sweep_time(xs, base);
    if (axis == "asymmetry") rows = sweep_asymmetry(schemes, xs, base);
    emit(sweep_out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
    int failed = 0;
    for (const auto& row : rows)
      if (row.status != "ok") ++failed;
    if (failed) std::cerr << failed << " sweep point(s) failed\n";
    return failed ? 1 : 0;
  }

  if (*table) {
    ParamFlags f = table_f;
    f.scheme = "custom";
    const auto p = resolve(f).params;
    const auto rows = table1(p.g, p.gamma, p.kappa, table_opts);
    write_table1_text(std::cout, rows);
    if (!table_csv.empty()) emit(table_csv, [&](std::ostream& os) { write_table1_csv(os, rows); });
    for (const auto& row : rows)
      if (row.status != "ok") return 1;
    return 0;
  }

  if (*traj) {
    const auto r = resolve(traj_f);
    treq.params = r.params;
    treq.methods.clear();
    for (const auto& m : methods) {
      auto id = parse_method(m);
      if (!id) throw Error(ErrorCode::Parse, "unknown method '" + m + "'");
      treq.methods.push_back(*id);
    }
    treq.integrator = integrator == "rk4" ? Integrator::RK4 : Integrator::Exact;
    if (t_final < 0.0) {
      const auto id = r.scheme.value_or(SchemeId::S1);
      const double gap = id == SchemeId::S1 ? gap_S1_dressed(r.params) : gap_analytic(id, r.params);
      t_final = 8.0 / gap;
    }
    treq.t_final = t_final;
    const auto res = run_trajectories(treq);
    emit(traj_out, [&](std::ostream& os) { write_trajectory_csv(os, res.rows); });
    for (const auto& fl : res.failures) std::cerr << "method " << fl.method << " failed: " << fl.message << "\n";
    return res.failures.empty() ? 0 : 1;
  }

  if (*red) {
    const auto r = resolve(red_f);
    const auto pm = partition(r.params);
    const auto em = dressed ? reduce_dressed(pm, selective ? Retention::Selective : Retention::Full) : reduce(pm);
    nlohmann::json out = effective_model_json(em);
    out["params"] = params_to_json(r.params);
    const auto sr = shuffling_rates(r.params);
    out["shuffling_rates"] = {{"gamma_eff", sr.gamma_eff}, {"kappa_eff", sr.kappa_eff}, {"gamma_d", sr.gamma_d},
                              {"gamma_a", sr.gamma_a}};
    int status = 0;
    if (r.params.Omega_MW != 0.0 || r.params.beta != 0.0) {
      try {
        out["rates"] = rate_matrix_json(build_rates(r.params, dressed));
      } catch (const Error& e) {
        std::cerr << "rate model failed: " << e.what() << "\n";
        status = 1;
      }
    }
    emit(red_out, [&](std::ostream& os) { os << out.dump(2) << "\n"; });
    return status;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
