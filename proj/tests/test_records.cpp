#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "lamcav/parallel.hpp"
#include "lamcav/records.hpp"
#include "support.hpp"

using namespace lamcav;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "1.00000000000e-01");
  CHECK(format_number(-12345.678) == "-1.23456780000e+04");
  CHECK(format_number(0.0) == "0.00000000000e+00");
  CHECK(format_number(std::nan("")) == "nan");
  const std::string s = format_number(1.0 / 3.0);
  CHECK(s.find(',') == std::string::npos);
  CHECK(std::stod(s) == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("csv headers") {
  std::ostringstream a, b, c;
  write_sweep_csv(a, {SweepRow{}});
  write_table1_csv(b, {Table1Row{}});
  write_trajectory_csv(c, {PopulationRow{"full"}});
  CHECK(first_line(a.str()) == "axis,value,scheme,method,fidelity,error,gap,status");
  CHECK(first_line(b.str()).rfind("scheme,static_error,max_fidelity,gap_at_2pct,convergence_time_at_2pct", 0) == 0);
  CHECK(first_line(c.str()) == "method,t,P_00,P_T,P_11,P_S,P_excited_total,fidelity");
  CHECK(c.str().find("full,0.00000000000e+00") != std::string::npos);
}

TEST_CASE("hashing and run records") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  nlohmann::json cfg = {{"axis", "drive"}, {"points", 5}};
  const auto r1 = make_record("sweep", "S1", SystemParams{}, cfg);
  const auto r2 = make_record("sweep", "S1", SystemParams{}, cfg);
  CHECK(r1.config_hash == r2.config_hash);
  cfg["points"] = 6;
  CHECK(make_record("sweep", "S1", SystemParams{}, cfg).config_hash != r1.config_hash);
  const auto j = to_json(r1);
  CHECK(j.at("provenance").at("code_version") == code_version());
  CHECK(j.at("params").at("g") == 1.0);
}

TEST_CASE("matrix json") {
  MatC m(1, 2);
  m << cplx(1, 2), cplx(3, 0);
  const auto j = matrix_json(m);
  CHECK(j.dump().find('2') != std::string::npos);
}

TEST_CASE("worker count honours LE_THREADS") {
  const char* old = std::getenv("LE_THREADS");
  const std::string saved = old ? old : "";
  setenv("LE_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  {
    testing::WarningCapture w;
    setenv("LE_THREADS", "zero", 1);
    CHECK(worker_count() >= 1);
    CHECK(!w.messages.empty());
  }
  if (old)
    setenv("LE_THREADS", saved.c_str(), 1);
  else
    unsetenv("LE_THREADS");
}

TEST_CASE("parallel_for captures failures in order") {
  std::vector<int> out(10, 0);
  const auto fails = parallel_for(10, [&](std::size_t i) {
    if (i % 4 == 1) throw Error(ErrorCode::NoBracket, "point " + std::to_string(i));
    out[i] = static_cast<int>(i);
  });
  REQUIRE(fails.size() == 3);
  CHECK(fails[0].index == 1);
  CHECK(fails[2].index == 9);
  CHECK(fails[1].code == ErrorCode::NoBracket);
  CHECK(out[8] == 8);
}
