// Shared test data access.
#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ak/domain.hpp"
#include "ak/parser.hpp"

#ifndef AK_TEST_DATA_DIR
#error "AK_TEST_DATA_DIR must point at tests/data"
#endif

namespace akt {

inline std::string data_path(const std::string& name) { return std::string(AK_TEST_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string data(const std::string& name) { return slurp(data_path(name)); }

inline ak::DomainDescription bomb() { return ak::validate_domain(ak::parse_domain(data("bomb.ak")).value()).value(); }

inline const char* const kBombPlan = "check; case ~alarm_off -> switch. alarm_off -> []. endcase; defuse";
inline const char* const kBombCase = "case ~alarm_off -> switch. alarm_off -> []. endcase";

}  // namespace akt
