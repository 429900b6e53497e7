#include "lamcav/params_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "lamcav/errors.hpp"

namespace lamcav {

const std::vector<std::string>& param_keys() {
  static const std::vector<std::string> keys = {"g",    "gamma", "kappa", "Omega", "Omega_MW", "Delta",
                                                "delta", "beta", "phi",   "alpha", "b",        "n_max"};
  return keys;
}

bool set_param(SystemParams& p, const std::string& key, double value) {
  if (key == "g") p.g = value;
  else if (key == "gamma") p.gamma = value;
  else if (key == "kappa") p.kappa = value;
  else if (key == "Omega") p.Omega = value;
  else if (key == "Omega_MW") p.Omega_MW = value;
  else if (key == "Delta") p.Delta = value;
  else if (key == "delta") p.delta = value;
  else if (key == "beta") p.beta = value;
  else if (key == "phi") p.phi = value;
  else if (key == "alpha") p.alpha = value;
  else if (key == "b") p.b = value;
  else if (key == "n_max") {
    if (value != std::floor(value)) throw Error(ErrorCode::Parse, "n_max must be an integer");
    p.n_max = static_cast<int>(value);
  } else
    return false;
  return true;
}

bool get_param(const SystemParams& p, const std::string& key, double& value) {
  if (key == "g") value = p.g;
  else if (key == "gamma") value = p.gamma;
  else if (key == "kappa") value = p.kappa;
  else if (key == "Omega") value = p.Omega;
  else if (key == "Omega_MW") value = p.Omega_MW;
  else if (key == "Delta") value = p.Delta;
  else if (key == "delta") value = p.delta;
  else if (key == "beta") value = p.beta;
  else if (key == "phi") value = p.phi;
  else if (key == "alpha") value = p.alpha;
  else if (key == "b") value = p.b;
  else if (key == "n_max") value = p.n_max;
  else
    return false;
  return true;
}

nlohmann::json params_to_json(const SystemParams& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& k : param_keys()) {
    double v = 0.0;
    get_param(p, k, v);
    if (k == "n_max")
      j[k] = p.n_max;
    else
      j[k] = v;
  }
  return j;
}

SystemParams params_from_json(const nlohmann::json& j, SystemParams base) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "parameter JSON must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number()) throw Error(ErrorCode::Parse, "value of '" + it.key() + "' is not a number");
    if (!set_param(base, it.key(), it.value().get<double>()))
      throw Error(ErrorCode::Parse, "unknown parameter key '" + it.key() + "'");
  }
  return base;
}

std::string params_to_kv(const SystemParams& p) {
  std::ostringstream out;
  for (const auto& k : param_keys()) {
    double v = 0.0;
    get_param(p, k, v);
    char buf[64];
    if (k == "n_max")
      std::snprintf(buf, sizeof buf, "%d", p.n_max);
    else
      std::snprintf(buf, sizeof buf, "%.17g", v);
    out << k << " = " << buf << '\n';
  }
  return out.str();
}

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

SystemParams params_from_kv(const std::string& text, SystemParams base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    double v = 0.0;
    try {
      size_t used = 0;
      v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": bad number '" + val + "'");
    }
    if (!set_param(base, key, v))
      throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return base;
}

}  // namespace lamcav
