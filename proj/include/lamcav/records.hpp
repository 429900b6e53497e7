#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lamcav/effective.hpp"
#include "lamcav/ratemodel.hpp"
#include "lamcav/reproduce.hpp"

namespace lamcav {

// 12 significant digits in scientific notation, '.' decimal separator.
std::string format_number(double x);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows);
void write_trajectory_csv(std::ostream& os, const std::vector<PopulationRow>& rows);
void write_table1_text(std::ostream& os, const std::vector<Table1Row>& rows);

nlohmann::json matrix_json(const MatC& m);
nlohmann::json spectrum_json(const SpectrumReport& s);
nlohmann::json effective_model_json(const EffectiveModel& em);
nlohmann::json rate_matrix_json(const RateMatrix& r);

struct Output {
  std::string name;
  std::string method;  // full | effective | dressed_effective | rate | analytic
  double value = 0.0;
};

struct RunRecord {
  std::string command;
  std::string scheme;
  SystemParams params;
  nlohmann::json config;  // everything that determines the outputs
  std::vector<Output> outputs;
  std::string code_version;
  std::string timestamp;  // UTC, ISO 8601
  std::string config_hash;
};

std::uint64_t fnv1a(const std::string& bytes);
// Fills version, timestamp and hash from the config.
RunRecord make_record(const std::string& command, const std::string& scheme, const SystemParams& p,
                      nlohmann::json config);
nlohmann::json to_json(const RunRecord& r);

const char* code_version();

}  // namespace lamcav
