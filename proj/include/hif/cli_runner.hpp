#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace hif::cli {

struct Assertion {
  std::string name;
  std::string invariant;  // module invariant the assertion instantiates
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::string subcommand;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::vector<Assertion> assertions;
  std::vector<std::string> notes;
  double seconds = 0;

  bool pass() const;
  nlohmann::json to_json() const;
  void check(const std::string& name, const std::string& invariant, bool ok, const std::string& detail = "");
};

// Canonical form used for the round-trip property: sorted keys, no timing.
std::string canonical(const nlohmann::json& j);

// Exit code: 0 when every assertion passes, 1 on a failed assertion or runtime error, 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hif::cli
