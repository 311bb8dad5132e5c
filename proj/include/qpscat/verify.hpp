// Self-check batteries run by `qpscat verify <suite>`.
#pragma once

#include <string>
#include <vector>

namespace qpscat {

struct VerifyCheck {
  std::string name;
  double tolerance = 0.0;
  double measured = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;
  double seconds = 0.0;

  bool pass() const;
  std::string to_json() const;
};

/// Suite names accepted by run_verify.
const std::vector<std::string>& verify_suites();

/// Throws InvalidArgument for an unknown suite.
VerifyReport run_verify(const std::string& suite);

}  // namespace qpscat
