#pragma once

#include <string>

#include "json.hpp"
#include "lamcav/model.hpp"

namespace lamcav {

// Keys: g gamma kappa Omega Omega_MW Delta delta beta phi alpha b n_max.
nlohmann::json params_to_json(const SystemParams& p);
// Missing keys keep the values already present in base.
SystemParams params_from_json(const nlohmann::json& j, SystemParams base = {});

// Flat "key = value" lines; '#' starts a comment.
std::string params_to_kv(const SystemParams& p);
SystemParams params_from_kv(const std::string& text, SystemParams base = {});

// Sets one field by key name; returns false for an unknown key.
bool set_param(SystemParams& p, const std::string& key, double value);
bool get_param(const SystemParams& p, const std::string& key, double& value);
const std::vector<std::string>& param_keys();

}  // namespace lamcav
